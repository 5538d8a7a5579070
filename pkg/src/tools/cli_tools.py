import argparse
import os
from contextlib import contextmanager
from typing import Iterator, Optional, Sequence

import numpy as np

from src.graph.families import FamilyKind, GraphFamily, MeasureConvention, interior
from src.graph.formatter import load_graph
from src.graph.validation import validate
from src.graph.weighted_graph import WeightedGraph
from src.metrics.intrinsic import MetricAssignment, Recipe, build_metric, metric_from_dict
from src.orchestrator.verification_pipeline import SUITES
from src.potentials.doubling import BoundaryConvention
from src.tools.file_tools import read_json
from src.utils.errors import ArgumentError, InputError, ParameterError

FAMILY_ALIASES = {
    "tree": FamilyKind.K_REGULAR_TREE.value,
    "random": FamilyKind.RANDOM_WEIGHTED.value,
}

# flag name -> environment variable read by get_settings()
SETTING_FLAGS = {
    "max_size": "CHEEGER_MAX_SIZE",
    "threads": "CHEEGER_THREADS",
    "dense_limit": "CHEEGER_DENSE_LIMIT",
    "intrinsic_rtol": "CHEEGER_INTRINSIC_RTOL",
    "bound_tol": "CHEEGER_BOUND_TOL",
    "residual_rtol": "CHEEGER_RESIDUAL_RTOL",
    "growth_slack": "CHEEGER_GROWTH_SLACK",
    "seed": "CHEEGER_SEED",
}


# -----------------------
# CLI Parser
# -----------------------
def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Seed for every random draw of the run")
    common.add_argument("--threads", type=int, help="Worker threads for subset enumeration")
    common.add_argument("--max-size", dest="max_size", type=int, help="Exact-enumeration capacity |U|")
    common.add_argument("--dense-limit", dest="dense_limit", type=int, help="Dimension below which eigensolves are dense")
    common.add_argument("--intrinsic-rtol", dest="intrinsic_rtol", type=float, help="Relative tolerance of the intrinsic test")
    common.add_argument("--bound-tol", dest="bound_tol", type=float, help="Absolute slack of inequality certificates")
    common.add_argument("--residual-rtol", dest="residual_rtol", type=float, help="Relative eigen-residual tolerance")
    common.add_argument("--growth-slack", dest="growth_slack", type=float, help="Truncation slack of the growth check")
    common.add_argument("--output", type=str, help="Where to write the command's JSON/CSV output")
    return common


def _metric_options(parser: argparse.ArgumentParser, default: Recipe = Recipe.CANONICAL) -> None:
    parser.add_argument("--input", type=str, required=True, help="Graph JSON file")
    parser.add_argument("--recipe", choices=[r.value for r in Recipe], default=default.value,
                        help="Metric recipe applied to the graph")
    parser.add_argument("--lengths", type=str, help="Metric JSON file (edge_lengths); implies recipe 'custom'")


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Intrinsic-metric Cheeger toolkit")
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    gen = commands.add_parser("gen", parents=[common], help="Generate a family truncation as graph JSON")
    gen.add_argument("--family", required=True, choices=[k.value for k in FamilyKind] + list(FAMILY_ALIASES))
    gen.add_argument("--radius", type=int, default=3)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--sphere-sizes", dest="sphere_sizes", type=int, nargs="+")
    gen.add_argument("--sphere-exponent", dest="sphere_exponent", type=float, default=2.0)
    gen.add_argument("--measure", choices=[m.value for m in MeasureConvention], default=MeasureConvention.UNIT.value)
    gen.add_argument("--measure-values", dest="measure_values", type=float, nargs="+")
    gen.add_argument("--vertices", type=int, default=10)
    gen.add_argument("--edge-probability", dest="edge_probability", type=float, default=0.3)
    gen.add_argument("--potential-range", dest="potential_range", type=float, nargs=2)
    gen.add_argument("--show", type=int, metavar="N", help="Print the adjacency of the first N vertices")

    metric = commands.add_parser("metric", parents=[common], help="Build a metric and certify it is intrinsic")
    _metric_options(metric)

    cheeger = commands.add_parser("cheeger", parents=[common], help="Cheeger constant alpha(U)")
    _metric_options(cheeger)
    mode = cheeger.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_const", dest="mode", const="exact")
    mode.add_argument("--sweep", action="store_const", dest="mode", const="sweep")
    mode.add_argument("--balls", action="store_const", dest="mode", const="balls")
    cheeger.set_defaults(mode="exact")
    cheeger.add_argument("--U", dest="U", type=int, nargs="+", help="Vertex ids of U (default: interior or all)")
    cheeger.add_argument("--center", type=int, help="Ball center id (default: the root)")
    cheeger.add_argument("--radii", type=float, nargs="+", default=[1.0, 2.0, 3.0])
    cheeger.add_argument("--combinatorial", action="store_true", help="Hop-distance balls")
    cheeger.add_argument("--csv", type=str, help="Ball table (r, boundary, volume, ratio)")

    spectral = commands.add_parser("lambda0", parents=[common], help="Bottom of the Dirichlet spectrum on U")
    spectral.add_argument("--input", type=str, required=True)
    spectral.add_argument("--U", dest="U", type=int, nargs="+")

    curv = commands.add_parser("curvature", parents=[common], help="Curvature field of an orientation")
    _metric_options(curv)
    curv.add_argument("--orientation", type=str, help="Orientation JSON (default: sphere orientation)")
    curv.add_argument("--root", type=int, help="Root id of the sphere orientation")
    curv.add_argument("--U", dest="U", type=int, nargs="+")

    growth = commands.add_parser("growth", parents=[common], help="Volume growth estimate")
    _metric_options(growth)
    growth.add_argument("--radii", type=float, nargs="+", default=[1.0, 2.0, 3.0, 4.0])
    growth.add_argument("--centers", type=int, nargs="+")

    potential = commands.add_parser("potential", parents=[common], help="Doubled graph and alpha-dot")
    _metric_options(potential, default=Recipe.POTENTIAL_ADAPTED)
    potential.add_argument("--U", dest="U", type=int, nargs="+")
    potential.add_argument("--convention", choices=[c.value for c in BoundaryConvention],
                           default=BoundaryConvention.DOUBLED.value)
    potential.add_argument("--doubled-output", dest="doubled_output", type=str)

    verify = commands.add_parser("verify", parents=[common], help="Run certificate suites")
    verify.add_argument("--suite", choices=["all", *SUITES], default="all")
    verify.add_argument("--input", type=str, help="Extra graph JSON for the cheeger suite")

    return parser.parse_args(argv)


# -----------------------
# Settings overrides
# -----------------------
@contextmanager
def settings_overrides(args: argparse.Namespace) -> Iterator[dict]:
    """Expose CLI flags through the environment for the duration of one command."""
    saved = {}
    applied = {}
    for flag, env_name in SETTING_FLAGS.items():
        value = getattr(args, flag, None)
        if value is None:
            continue
        saved[env_name] = os.environ.get(env_name)
        os.environ[env_name] = str(value)
        applied[flag] = value
    try:
        yield applied
    finally:
        for env_name, previous in saved.items():
            if previous is None:
                os.environ.pop(env_name, None)
            else:
                os.environ[env_name] = previous


# -----------------------
# Argument helpers
# -----------------------
def family_from_args(args: argparse.Namespace, seed: int) -> GraphFamily:
    kind = FAMILY_ALIASES.get(args.family, args.family)
    return GraphFamily(
        kind=kind,
        radius=args.radius,
        k=args.k,
        sphere_sizes=args.sphere_sizes,
        sphere_exponent=args.sphere_exponent,
        measure=args.measure,
        measure_values=args.measure_values,
        vertices=args.vertices,
        edge_probability=args.edge_probability,
        potential_range=args.potential_range,
        seed=seed,
    )


def vertex_positions(graph: WeightedGraph, ids: Sequence[int]) -> np.ndarray:
    """Map JSON vertex ids to internal positions."""
    lookup = {vid: x for x, vid in enumerate(graph.vertex_ids)}
    missing = [vid for vid in ids if vid not in lookup]
    if missing:
        raise ArgumentError(f"unknown vertex ids {missing[:5]}", "cli")
    return np.array(sorted({lookup[vid] for vid in ids}), dtype=np.int64)


def resolve_subset(graph: WeightedGraph, ids: Optional[Sequence[int]]) -> np.ndarray:
    """Explicit ids, else the interior of a family truncation, else every vertex."""
    if ids:
        return vertex_positions(graph, ids)
    family = graph.origin
    if family is not None and family.is_spherical:
        return interior(graph, family)
    return graph.vertices


def resolve_metric(graph: WeightedGraph, args: argparse.Namespace) -> MetricAssignment:
    if args.lengths:
        document = read_json(args.lengths)
        if not isinstance(document, dict):
            raise InputError(f"{args.lengths} is not a metric document", "cli")
        document.setdefault("recipe", Recipe.CUSTOM.value)
        return metric_from_dict(graph, document)
    if args.recipe == Recipe.CUSTOM.value:
        raise ParameterError("lengths", "recipe 'custom' needs a metric JSON file", "cli")
    return build_metric(graph, args.recipe)


def load_checked_graph(path) -> WeightedGraph:
    """Load a graph document and refuse it unless every standing assumption holds."""
    graph = load_graph(path)
    report = validate(graph)
    if not report.is_valid:
        first = report.violations[0]
        raise InputError(
            f"{path} violates the standing assumptions {sorted(report.kinds())} "
            f"({len(report)} violations, first: {first.detail})",
            "cli",
        )
    return graph
