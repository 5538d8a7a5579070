import sys
from datetime import datetime
from typing import Optional, Sequence

import pandas as pd
from colorama import Fore, Style, init as colorama_init
from dotenv import load_dotenv

from src.curvature.field import curvature
from src.curvature.orientation import Orientation, sphere_orientation
from src.graph.families import generate
from src.graph.formatter import dump_graph, format_adjacency
from src.growth.volume import dmax_condition, volume_growth
from src.isoperimetry.cheeger import cheeger_exact, cheeger_sweep
from src.isoperimetry.cuts import cheeger_balls
from src.metrics.intrinsic import certify_intrinsic
from src.orchestrator.verification_pipeline import run_verification_pipeline
from src.potentials.doubling import double, dotted_boundary
from src.certifiers.potential_bounds import verify_potential_cheeger
from src.spectral.eigen import lambda0
from src.spectral.form import assemble
from src.tools.cli_tools import (
    family_from_args,
    load_checked_graph,
    parse_args,
    resolve_metric,
    resolve_subset,
    settings_overrides,
    vertex_positions,
)
from src.tools.file_tools import read_json, to_json, write_csv, write_json, write_jsonl
from src.utils.config import get_settings
from src.utils.errors import ToolkitError
from src.utils.logger import log_experiment, ActionType

load_dotenv()
colorama_init(autoreset=True)

EXIT_PASS = 0
EXIT_CERTIFICATE_FAILURE = 1


# --------------------------
# Reports
# --------------------------
def envelope(command: str, result: dict, overrides: dict) -> dict:
    """Every output carries the seed and the resolved settings; only `timestamp` varies between runs."""
    settings = get_settings()
    return {
        "command": command,
        "seed": settings.seed,
        "timestamp": datetime.now().isoformat(),
        "settings": {k: v for k, v in settings.as_dict().items() if k not in ("log_file", "log_enabled")},
        "overrides": overrides,
        "result": result,
    }


def emit(args, report: dict) -> None:
    if args.output:
        write_json(args.output, report)
        print(f"💾 Report written to {args.output}")
    else:
        print(to_json(report))


def status_line(passed: bool, message: str) -> None:
    colour = Fore.GREEN if passed else Fore.RED
    mark = "✅" if passed else "❌"
    print(f"{colour}{mark} {message}{Style.RESET_ALL}")


# --------------------------
# Commands
# --------------------------
def cmd_gen(args, overrides: dict) -> int:
    family = family_from_args(args, get_settings().seed)
    graph = generate(family)
    target = args.output or "graph.json"
    dump_graph(graph, target, extra={"seed": get_settings().seed})
    print(f"🌳 {family.kind.value}: {graph.size} vertices, {graph.edge_count} edges -> {target}")
    if args.show:
        print(format_adjacency(graph, limit=args.show))
    return EXIT_PASS


def cmd_metric(args, overrides: dict) -> int:
    graph = load_checked_graph(args.input)
    metric = resolve_metric(graph, args)
    certificate = certify_intrinsic(graph, metric)
    emit(args, envelope("metric", {
        "metric": metric.to_dict(),
        "certificate": certificate.to_dict(),
        "min_edge_dist": metric.min_edge_dist,
        "neighbor_side": metric.neighbor_side(),
    }, overrides))
    status_line(certificate.is_intrinsic, f"metric '{metric.recipe.value}' intrinsic: {certificate.is_intrinsic}")
    return EXIT_PASS


def cmd_cheeger(args, overrides: dict) -> int:
    graph = load_checked_graph(args.input)
    metric = resolve_metric(graph, args)
    seed = get_settings().seed
    ids = graph.vertex_ids

    if args.mode == "balls":
        center = graph.root if args.center is None else int(vertex_positions(graph, [args.center])[0])
        reports = cheeger_balls(graph, metric, center, args.radii, combinatorial=args.combinatorial)
        rows = [{**r.to_dict(ids), "seed": seed} for r in reports]
        if args.csv:
            frame = pd.DataFrame([
                {"r": r.radius, "boundary": r.boundary_measure, "volume": r.volume, "ratio": r.ratio}
                for r in reports
            ])
            write_csv(args.csv, frame)
        summary = f"{len(reports)} balls, smallest ratio {min(r.ratio for r in reports):.6g}"
    else:
        U = resolve_subset(graph, args.U)
        if args.mode == "exact":
            result = cheeger_exact(graph, metric, U)
        else:
            result = cheeger_sweep(graph, metric, U)
        rows = [{**result.to_dict(ids), "seed": seed}]
        summary = f"alpha(U) = {result.alpha:.12g} ({result.mode.value}, |U| = {U.size})"

    if args.output:
        write_jsonl(args.output, rows)
    else:
        for row in rows:
            print(to_json(row))
    print(f"📐 {summary}")
    return EXIT_PASS


def cmd_lambda0(args, overrides: dict) -> int:
    graph = load_checked_graph(args.input)
    U = resolve_subset(graph, args.U)
    result = lambda0(assemble(graph, U))
    emit(args, envelope("lambda0", {**result.to_dict(graph.vertex_ids), "U_size": int(U.size)}, overrides))
    print(f"📈 lambda0 = {result.lambda0:.12g} ({result.method.value}, residual {result.residual:.2e})")
    return EXIT_PASS


def cmd_curvature(args, overrides: dict) -> int:
    graph = load_checked_graph(args.input)
    metric = resolve_metric(graph, args)
    root = graph.root if args.root is None else int(vertex_positions(graph, [args.root])[0])
    if args.orientation:
        orientation = Orientation.from_dict(graph, read_json(args.orientation))
    else:
        orientation = sphere_orientation(graph, root)
    U = resolve_subset(graph, args.U)
    field = curvature(graph, metric, orientation, U)
    frame = field.to_frame(graph, root)
    if args.output:
        write_csv(args.output, frame)
        print(f"💾 Curvature table written to {args.output}")
    else:
        print(frame.to_csv(index=False))
    print(f"🧭 k_lower = {field.k_lower:.12g} over {U.size} vertices ({orientation.origin})")
    return EXIT_PASS


def cmd_growth(args, overrides: dict) -> int:
    graph = load_checked_graph(args.input)
    metric = resolve_metric(graph, args)
    centers = None if not args.centers else vertex_positions(graph, args.centers)
    estimate = volume_growth(graph, metric, centers, args.radii)
    if args.output:
        write_csv(args.output, estimate.to_frame())
        print(f"💾 Growth table written to {args.output}")
    else:
        print(estimate.to_frame().to_csv(index=False))
    print(f"🌱 mu_hat = {estimate.mu_hat:.6g} (D = D^max condition: {dmax_condition(graph, metric)})")
    return EXIT_PASS


def cmd_potential(args, overrides: dict) -> int:
    graph = load_checked_graph(args.input)
    metric = resolve_metric(graph, args)
    doubled = double(graph, metric)
    if args.doubled_output:
        write_json(args.doubled_output, {**doubled.to_dict(), "seed": get_settings().seed})
    U = resolve_subset(graph, args.U)
    record = verify_potential_cheeger(doubled, U, convention=args.convention)
    cut = dotted_boundary(doubled, vertex_positions(graph, record.context["optimal_W"]), args.convention)
    emit(args, envelope("potential", {
        "record": record.to_dict(),
        "optimal_cut": cut.to_dict(graph.vertex_ids),
        "cross_edges": doubled.cross_count,
    }, overrides))
    status_line(not record.failed, f"{record.claim}: {record.status} (margin {record.margin:.3e})")
    return EXIT_CERTIFICATE_FAILURE if record.failed else EXIT_PASS


def cmd_verify(args, overrides: dict) -> int:
    input_graph = None
    if args.input:
        input_graph = load_checked_graph(args.input)

    print("\n" + "=" * 70)
    print("   Starting Verification Pipeline   ".center(70))
    print("=" * 70 + "\n")

    result = run_verification_pipeline(suites=[args.suite], input_graph=input_graph)
    target = args.output or "verification_report.json"
    write_json(target, envelope("verify", result, overrides))

    print("\n" + "═" * 70)
    for entry in result["history"]:
        status_line(
            entry["decision"] == "SUCCESS",
            f"{entry['suite']}: {entry['passed']} passed, {entry['failed']} failed, "
            f"{entry['not_applicable']} n/a",
        )
    print("═" * 70)
    print(f"💾 Report written to {target}")
    return EXIT_PASS if result["success"] else EXIT_CERTIFICATE_FAILURE


COMMANDS = {
    "gen": cmd_gen,
    "metric": cmd_metric,
    "cheeger": cmd_cheeger,
    "lambda0": cmd_lambda0,
    "curvature": cmd_curvature,
    "growth": cmd_growth,
    "potential": cmd_potential,
    "verify": cmd_verify,
}


# --------------------------
# Main
# --------------------------
def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    with settings_overrides(args) as overrides:
        try:
            code = COMMANDS[args.command](args, overrides)
        except ToolkitError as exc:
            print(f"{Fore.RED}❌ {exc}{Style.RESET_ALL}", file=sys.stderr)
            code = exc.exit_code
            status = "FAILURE"
        else:
            status = "SUCCESS" if code == EXIT_PASS else "FAILURE"
        log_experiment(
            agent_name="CLI",
            model_used=args.command,
            action=ActionType.VALIDATION if args.command == "verify" else ActionType.IO,
            details={"argv": list(sys.argv[1:] if argv is None else argv), "exit_code": code, "overrides": overrides},
            status=status,
        )
    return code


if __name__ == "__main__":
    sys.exit(main())
