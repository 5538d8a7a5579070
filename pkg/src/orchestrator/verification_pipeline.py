import json
import math
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from src.certifiers.curvature_bounds import verify_curvature_bound, verify_curvature_chain
from src.certifiers.growth_bounds import verify_growth_bound
from src.certifiers.judge import CertificateJudge
from src.certifiers.potential_bounds import verify_potential_cheeger, verify_potential_form_identity
from src.certifiers.records import CertificateRecord, inequality
from src.certifiers.spectral_bounds import verify_cheeger, verify_essential, verify_upper_bound
from src.curvature.field import curvature
from src.curvature.orientation import random_orientation, sphere_orientation
from src.graph.families import FamilyKind, GraphFamily, MeasureConvention, generate, interior
from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.coarea import coarea_check
from src.isoperimetry.cuts import cheeger_balls
from src.metrics.intrinsic import Recipe, build_metric
from src.orchestrator.samplers import (
    instance_rng,
    random_function,
    random_graph,
    random_metric,
    random_subset,
)
from src.potentials.doubling import double
from src.spectral.eigen import lambda0
from src.spectral.form import assemble
from src.utils.config import get_settings
from src.utils.logger import log_experiment, ActionType

SUITES = ("cheeger", "strong", "coarea", "counterexample", "curvature", "potentials", "upper", "growth", "determinism")

DEFAULT_COUNTS = {
    "cheeger": 200,
    "strong": 100,
    "coarea": 500,
    "curvature_chains": 200,
    "potentials": 50,
    "form_trials": 100,
    "upper": 100,
    "determinism": 20,
}

# Depths of the regular-tree growth check; k = 3 needs depth 12 for the
# finite-radius estimate to reach 2 * k_lower within the slack.
GROWTH_DEPTHS = {2: 12, 3: 12, 4: 10}
# Exact-interior curvature check: radius per branching keeps |interior| <= 13.
CURVATURE_RADII = {2: 3, 3: 3, 4: 2}
COARSE_RTOL = 1e-9
LAMBDA_TOL = 1e-8


class VerificationPipeline:

    def __init__(
        self,
        seed: Optional[int] = None,
        counts: Optional[Dict[str, int]] = None,
        max_size: Optional[int] = None,
        input_graph: Optional[WeightedGraph] = None,
        verbose: bool = True,
    ):
        settings = get_settings()
        self.seed = settings.seed if seed is None else seed
        self.counts = {**DEFAULT_COUNTS, **(counts or {})}
        self.max_size = settings.max_size if max_size is None else max_size
        self.input_graph = input_graph
        self.verbose = verbose
        self.judge = CertificateJudge("VerificationJudge")
        self.history: List[Dict[str, Any]] = []

        self._suites: Dict[str, Callable[[], List[CertificateRecord]]] = {
            "cheeger": self.cheeger_suite,
            "strong": self.strong_suite,
            "coarea": self.coarea_suite,
            "counterexample": self.counterexample_suite,
            "curvature": self.curvature_suite,
            "potentials": self.potentials_suite,
            "upper": self.upper_suite,
            "growth": self.growth_suite,
            "determinism": self.determinism_suite,
        }

    def _say(self, message: str) -> None:
        if self.verbose:
            print(message)

    # ─────────────────────────────────────────────────────────────
    # Lower bounds by alpha
    # ─────────────────────────────────────────────────────────────
    def cheeger_suite(self, count: Optional[int] = None) -> List[CertificateRecord]:
        count = self.counts["cheeger"] if count is None else count
        records = []
        for index in range(count):
            rng = instance_rng(self.seed, "cheeger", index)
            graph = random_graph(rng, max_vertices=14)
            metric = build_metric(graph, Recipe.CANONICAL)
            U = random_subset(rng, graph.size, min(14, self.max_size))
            records.append(verify_cheeger(graph, metric, U, self.max_size))

        tree = GraphFamily(FamilyKind.K_REGULAR_TREE, radius=6, k=2, measure=MeasureConvention.WEIGHTED_DEGREE)
        tree_graph = generate(tree)
        records.extend(verify_essential(tree_graph, build_metric(tree_graph, Recipe.NATURAL), tree, [1, 2, 3], self.max_size))

        antitree = GraphFamily(FamilyKind.ANTITREE, radius=5)
        antitree_graph = generate(antitree)
        records.extend(verify_essential(
            antitree_graph, build_metric(antitree_graph, Recipe.INVERSE_DEGREE), antitree, [1, 2, 3], self.max_size
        ))

        if self.input_graph is not None:
            records.extend(self._input_graph_records(self.input_graph))
        return records

    def _input_graph_records(self, graph: WeightedGraph) -> List[CertificateRecord]:
        metric = build_metric(graph, Recipe.CANONICAL)
        family = graph.origin
        if family is not None and family.is_spherical:
            U = interior(graph, family)
            if U.size <= self.max_size:
                return [verify_cheeger(graph, metric, U, self.max_size)]
            return verify_essential(graph, metric, family, list(range(1, max(2, family.depth))), self.max_size)
        U = np.arange(max(1, min(graph.size - 1, self.max_size)))
        return [verify_cheeger(graph, metric, U, self.max_size)]

    def strong_suite(self, count: Optional[int] = None) -> List[CertificateRecord]:
        count = self.counts["strong"] if count is None else count
        records = []
        for index in range(count):
            rng = instance_rng(self.seed, "strong", index)
            graph = random_graph(rng, max_vertices=14, measure=MeasureConvention.WEIGHTED_DEGREE)
            U = random_subset(rng, graph.size, min(14, self.max_size))
            records.append(verify_cheeger(graph, build_metric(graph, Recipe.NATURAL), U, self.max_size))

        # P3 with m = 2 attains equality at U = {b}
        path = generate(GraphFamily(FamilyKind.PATH, radius=2, measure=MeasureConvention.CUSTOM, measure_values=(2, 2, 2)))
        fixture = verify_cheeger(path, build_metric(path, Recipe.NATURAL), [1], self.max_size)
        records.append(fixture)
        records.append(inequality(
            "P3 equality: |lambda0 - (1 - sqrt(1 - alpha^2))| <= 1e-12",
            1e-12,
            abs(fixture.lhs - fixture.rhs),
            {"lambda0": fixture.lhs, "rhs": fixture.rhs},
            tol=0.0,
        ))
        return records

    # ─────────────────────────────────────────────────────────────
    # Co-area, counterexample, upper bound
    # ─────────────────────────────────────────────────────────────
    def coarea_suite(self, count: Optional[int] = None) -> List[CertificateRecord]:
        count = self.counts["coarea"] if count is None else count
        records = []
        for index in range(count):
            rng = instance_rng(self.seed, "coarea", index)
            graph = random_graph(rng, min_vertices=3, max_vertices=10)
            metric = random_metric(rng, graph)
            report = coarea_check(graph, metric, random_function(rng, graph.size))
            records.append(inequality(
                "co-area and area formulae",
                COARSE_RTOL,
                max(report.gaps()),
                {**report.to_dict(), "recipe": metric.recipe.value},
                tol=0.0,
            ))
        return records

    def counterexample_suite(self) -> List[CertificateRecord]:
        records = []
        family = GraphFamily(FamilyKind.TREE_WITH_SPHERE_EDGES, radius=7, k=2)
        graph = generate(family)
        metric = build_metric(graph, Recipe.INVERSE_DEGREE)
        balls = cheeger_balls(graph, metric, family.root, [2, 3, 4, 5, 6], combinatorial=True)
        for ball in balls:
            bound = 2.0 ** (-(ball.radius - 1) / 2.0)
            records.append(inequality(
                "|dB_r|/m(B_r) <= 2^(-(r-1)/2)",
                bound,
                ball.ratio,
                {"r": ball.radius, "ratio": ball.ratio, "volume": ball.volume},
            ))
        records.extend(verify_upper_bound(graph, metric, metric.min_edge_dist, [ball.W for ball in balls]))

        floor = 3.0 - 2.0 * math.sqrt(2.0)
        previous = None
        for radius in range(2, 7):
            truncated = GraphFamily(FamilyKind.TREE_WITH_SPHERE_EDGES, radius=radius + 1, k=2)
            deeper = generate(truncated)
            value = lambda0(assemble(deeper, interior(deeper, truncated))).lambda0
            records.append(inequality(
                "lambda0(L_{B_R}) >= 3 - 2*sqrt(2)", value, floor, {"R": radius}, tol=LAMBDA_TOL
            ))
            if previous is not None:
                records.append(inequality(
                    "lambda0(L_{B_R}) nonincreasing in R", previous, value, {"R": radius}, tol=LAMBDA_TOL
                ))
            previous = value
        return records

    def upper_suite(self, count: Optional[int] = None) -> List[CertificateRecord]:
        count = self.counts["upper"] if count is None else count
        records = []
        for index in range(count):
            rng = instance_rng(self.seed, "upper", index)
            graph = random_graph(rng, max_vertices=14)
            W = random_subset(rng, graph.size, graph.size, proper=False)
            records.extend(verify_upper_bound(graph, build_metric(graph, Recipe.NATURAL), 1.0, [W]))
        return records

    # ─────────────────────────────────────────────────────────────
    # Curvature, potentials, growth
    # ─────────────────────────────────────────────────────────────
    def curvature_suite(self, count: Optional[int] = None) -> List[CertificateRecord]:
        count = self.counts["curvature_chains"] if count is None else count
        records = []
        for k, radius in CURVATURE_RADII.items():
            family = GraphFamily(FamilyKind.K_REGULAR_TREE, radius=radius, k=k, measure=MeasureConvention.WEIGHTED_DEGREE)
            graph = generate(family)
            metric = build_metric(graph, Recipe.NATURAL)
            orientation = sphere_orientation(graph, family.root)
            U = interior(graph, family)
            expected = (k - 1) / (k + 1)
            k_lower = curvature(graph, metric, orientation, U).k_lower
            records.append(CertificateRecord(
                claim=f"k_lower = (k-1)/(k+1) on the k={k} tree interior",
                lhs=k_lower,
                rhs=expected,
                margin=k_lower - expected,
                passed=bool(k_lower == expected),
                context={"k": k, "radius": radius},
            ))
            records.append(verify_curvature_bound(graph, metric, orientation, U, self.max_size))

        antitree = GraphFamily(FamilyKind.ANTITREE, radius=4)
        graph = generate(antitree)
        metric = build_metric(graph, Recipe.INVERSE_DEGREE)
        orientation = sphere_orientation(graph, antitree.root)
        U = interior(graph, antitree)
        record = verify_curvature_bound(graph, metric, orientation, U, self.max_size)
        records.append(record)
        k_lower = record.context["k_lower"]
        records.append(CertificateRecord(
            claim="antitree k_lower > 0",
            lhs=k_lower,
            rhs=0.0,
            margin=k_lower,
            passed=bool(k_lower > 0),
            context={"spheres": antitree.radius},
        ))

        for index in range(count):
            rng = instance_rng(self.seed, "curvature", index)
            sample = random_graph(rng, max_vertices=12)
            records.append(verify_curvature_chain(
                sample,
                random_metric(rng, sample),
                random_orientation(sample, rng),
                random_subset(rng, sample.size, sample.size, proper=False),
            ))
        return records

    def potentials_suite(self, count: Optional[int] = None) -> List[CertificateRecord]:
        count = self.counts["potentials"] if count is None else count
        records = []
        for index in range(count):
            rng = instance_rng(self.seed, "potentials", index)
            graph = random_graph(rng, max_vertices=12, potential_range=(0.1, 3.0))
            doubled = double(graph, build_metric(graph, Recipe.POTENTIAL_ADAPTED))
            records.append(verify_potential_form_identity(doubled, self.counts["form_trials"], rng))
            U = random_subset(rng, graph.size, min(12, self.max_size), proper=False)
            records.append(verify_potential_cheeger(doubled, U, self.max_size))
        return records

    def growth_suite(self) -> List[CertificateRecord]:
        records = []
        for k, depth in GROWTH_DEPTHS.items():
            family = GraphFamily(FamilyKind.K_REGULAR_TREE, radius=depth, k=k, measure=MeasureConvention.WEIGHTED_DEGREE)
            graph = generate(family)
            metric = build_metric(graph, Recipe.NATURAL)
            field = curvature(graph, metric, sphere_orientation(graph, family.root), interior(graph, family))
            records.append(verify_growth_bound(graph, metric, family, field.k_lower, list(range(1, depth + 1))))
        return records

    def determinism_suite(self) -> List[CertificateRecord]:
        """Re-run reduced suites and compare their serialized records byte for byte."""
        size = self.counts["determinism"]
        records = []
        for name, runner in (("cheeger", self.cheeger_suite), ("coarea", self.coarea_suite), ("potentials", self.potentials_suite)):
            first = json.dumps([r.to_dict() for r in runner(size)], sort_keys=True)
            second = json.dumps([r.to_dict() for r in runner(size)], sort_keys=True)
            identical = first == second
            records.append(CertificateRecord(
                claim=f"suite '{name}' is reproducible",
                lhs=float(identical),
                rhs=1.0,
                margin=float(identical) - 1.0,
                passed=identical,
                context={"suite": name, "instances": size, "seed": self.seed},
            ))
        return records

    # ─────────────────────────────────────────────────────────────
    # Main loop
    # ─────────────────────────────────────────────────────────────
    def run(self, suites: List[str]) -> Dict[str, Any]:
        selected = list(SUITES) if "all" in suites else list(suites)
        unknown = [s for s in selected if s not in self._suites]
        if unknown:
            raise ValueError(f"❌ Unknown suite(s): {unknown}. Choose from {list(SUITES)} or 'all'.")

        results = {}
        for name in selected:
            self._say(f"🔍 Running suite '{name}'...")
            records = self._suites[name]()
            judgement = self.judge.evaluate(name, records, method="enumeration+eigh")
            results[name] = {
                "decision": judgement["decision"],
                "reason": judgement["reason"],
                "records": [r.to_dict() for r in records],
            }
            self.history.append({
                "suite": name,
                "decision": judgement["decision"],
                "passed": judgement["passed"],
                "failed": judgement["failed"],
                "not_applicable": judgement["not_applicable"],
            })
            mark = "✅" if judgement["decision"] == "SUCCESS" else "❌"
            self._say(f"{mark} {name}: {judgement['reason']}")

        success = all(h["decision"] == "SUCCESS" for h in self.history)
        log_experiment(
            agent_name="VerificationPipeline",
            model_used="suites",
            action=ActionType.VALIDATION,
            details={"seed": self.seed, "suites": selected, "history": self.history},
            status="SUCCESS" if success else "FAILURE",
        )
        return {
            "status": "PASS" if success else "FAIL",
            "success": success,
            "seed": self.seed,
            "max_size": self.max_size,
            "history": self.history,
            "suites": results,
        }


# ─────────────────────────────────────────────────────────────
# Helper for main.py
# ─────────────────────────────────────────────────────────────
def run_verification_pipeline(
    suites: List[str],
    seed: Optional[int] = None,
    max_size: Optional[int] = None,
    input_graph: Optional[WeightedGraph] = None,
    counts: Optional[Dict[str, int]] = None,
    verbose: bool = True,
) -> Dict[str, Any]:
    pipeline = VerificationPipeline(
        seed=seed,
        counts=counts,
        max_size=max_size,
        input_graph=input_graph,
        verbose=verbose,
    )
    return pipeline.run(suites)
