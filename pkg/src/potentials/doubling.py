from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

import numpy as np
from scipy import sparse

from src.graph.formatter import graph_to_dict
from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cheeger import CheegerMode, CheegerResult, resolve_max_size
from src.isoperimetry.cuts import CutReport, boundary, edge_flux, flux_matrix
from src.isoperimetry.enumeration import minimize_ratio
from src.metrics.intrinsic import MetricAssignment, certify_intrinsic
from src.utils.config import get_settings
from src.utils.errors import ArgumentError, CapacityError, PreconditionError


class BoundaryConvention(str, Enum):
    DOUBLED = "doubled"     # c(x)delta(x) once per W-vertex: the cross edge (x, x')
    LITERAL = "literal"     # c(x)delta(x) once per boundary pair (x, y)


@dataclass(frozen=True, eq=False)
class DoubledGraph:
    """
    X u X' with b-dot equal to b on each copy and c(x) on the cross edge
    (x, x'), m-dot = m on both copies. Only the X-side metric and the cross
    lengths delta are kept; the metric is never extended to all of X u X'.
    """

    base: WeightedGraph
    metric: MetricAssignment
    doubled: WeightedGraph
    pairing: np.ndarray     # pairing[x] = index of x' in `doubled`
    delta: np.ndarray

    @property
    def cross_count(self) -> int:
        return int(np.count_nonzero(self.base.c > 0))

    def to_dict(self) -> dict:
        document = graph_to_dict(self.doubled)
        ids = self.doubled.vertex_ids
        document["pairing"] = [
            {"x": ids[x], "x_prime": ids[xp], "delta": float(d)}
            for x, (xp, d) in enumerate(zip(self.pairing, self.delta))
        ]
        return document


def adapted_load(graph: WeightedGraph, metric: MetricAssignment) -> np.ndarray:
    """sum_y b(x,y) d(x,y)^2 per vertex, d the closed distance."""
    src, _, w = graph.edges
    return np.bincount(src, weights=w * metric.edge_dist ** 2, minlength=graph.size)


def adapt_delta(graph: WeightedGraph, metric: MetricAssignment) -> np.ndarray:
    """delta(x) = ((m(x) - sum_y b d^2) / c(x))^(1/2) where c > 0, and 0 elsewhere."""
    certificate = certify_intrinsic(graph, metric)
    if not certificate.is_intrinsic:
        raise PreconditionError(
            f"metric is not intrinsic (worst vertex {certificate.worst_vertex}); delta would be imaginary",
            "potentials",
        )
    slack = np.maximum(certificate.slack, 0.0)
    delta = np.zeros(graph.size)
    charged = graph.c > 0
    delta[charged] = np.sqrt(slack[charged] / graph.c[charged])
    return delta


def double(graph: WeightedGraph, metric: MetricAssignment, delta: Optional[np.ndarray] = None) -> DoubledGraph:
    """Encode the potential of `graph` as cross edges to a mirror copy."""
    delta = adapt_delta(graph, metric) if delta is None else np.asarray(delta, dtype=float)
    if delta.shape != (graph.size,) or np.any(delta < 0):
        raise ArgumentError("delta must be a nonnegative value per vertex", "potentials")

    rtol = get_settings().intrinsic_rtol
    load = adapted_load(graph, metric) + graph.c * delta ** 2
    excess = (load - graph.m) / graph.m
    if np.any(excess > rtol):
        worst = int(np.argmax(excess))
        raise PreconditionError(
            f"adapted condition fails at vertex {graph.vertex_ids[worst]}: "
            f"sum b d^2 + c delta^2 = {load[worst]:g} > m = {graph.m[worst]:g}",
            "potentials",
        )

    size = graph.size
    cross = sparse.diags(graph.c)
    b_dot = sparse.bmat([[graph.b, cross], [cross, graph.b]], format="csr")
    ids = tuple(graph.vertex_ids) + tuple(size + x for x in range(size))
    labels = tuple(graph.labels) + tuple(
        None if label is None else f"{label}'" for label in graph.labels
    )
    doubled = WeightedGraph(
        b=b_dot,
        m=np.concatenate([graph.m, graph.m]),
        labels=labels,
        vertex_ids=ids,
    )
    return DoubledGraph(
        base=graph,
        metric=metric,
        doubled=doubled,
        pairing=np.arange(size, 2 * size),
        delta=delta,
    )


# ─────────────────────────────────────────────────────────────
# Boundary with potential term
# ─────────────────────────────────────────────────────────────
def _pair_term(doubled: DoubledGraph, convention: BoundaryConvention) -> np.ndarray:
    """Potential contribution c(x)delta(x) attached to each ordered base edge (literal reading)."""
    src, _, _ = doubled.base.edges
    weight = doubled.base.c * doubled.delta
    if convention == BoundaryConvention.LITERAL:
        return weight[src]
    return np.zeros(src.size)


def dotted_boundary(
    doubled: DoubledGraph,
    W: Iterable[int],
    convention: BoundaryConvention | str = BoundaryConvention.DOUBLED,
) -> CutReport:
    """
    |dW| with potential term for W inside the base vertex set. The X-side
    boundary is the usual one; the potential adds c(x)delta(x) once per
    W-vertex (doubled) or once per boundary pair (literal).
    """
    convention = BoundaryConvention(convention)
    base, metric = doubled.base, doubled.metric
    report = boundary(base, metric, W)
    weight = base.c * doubled.delta
    if convention == BoundaryConvention.DOUBLED:
        term = float(np.sum(weight[report.W]))
    else:
        src, dst, _ = base.edges
        mask = base.indicator(report.W)
        leaving = mask[src] & ~mask[dst]
        term = float(np.sum(weight[src[leaving]]))
    value = report.boundary_measure + term
    return CutReport(
        W=report.W,
        boundary_measure=value,
        volume=report.volume,
        ratio=value / report.volume,
        potential_term=term,
    )


def alpha_dot(
    doubled: DoubledGraph,
    U: Iterable[int],
    max_size: Optional[int] = None,
    convention: BoundaryConvention | str = BoundaryConvention.DOUBLED,
) -> CheegerResult:
    """min over nonempty W in U of |dW|_dot / m(W), by enumeration."""
    convention = BoundaryConvention(convention)
    base, metric = doubled.base, doubled.metric
    subset = base.as_subset(U)
    limit = resolve_max_size(max_size)
    if subset.size > limit:
        raise CapacityError(
            f"|U| = {subset.size} exceeds the exact-enumeration limit {limit}", "potentials"
        )

    src, dst, _ = base.edges
    pair_flux = edge_flux(base, metric) + _pair_term(doubled, convention)
    outflow = np.bincount(src, weights=pair_flux, minlength=base.size)[subset]
    if convention == BoundaryConvention.DOUBLED:
        outflow = outflow + (base.c * doubled.delta)[subset]
        inner = flux_matrix(base, metric)[subset][:, subset].toarray()
    else:
        # not symmetric: the pair (x, y) carries c(x)delta(x)
        inner = sparse.csr_matrix((pair_flux, (src, dst)), shape=base.b.shape)[subset][:, subset].toarray()

    outcome = minimize_ratio(outflow, inner, base.m[subset], threads=get_settings().threads)
    optimal = subset[outcome.members]
    report = dotted_boundary(doubled, optimal, convention)
    return CheegerResult(
        alpha=report.ratio,
        optimal_W=optimal,
        mode=CheegerMode.EXACT,
        enumeration_count=outcome.count,
        U=subset,
    )
