from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import sparse

from src.graph.families import GraphFamily, interior
from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cuts import boundary, edge_flux, flux_matrix
from src.isoperimetry.enumeration import minimize_ratio
from src.metrics.intrinsic import MetricAssignment
from src.spectral.eigen import lambda0
from src.spectral.form import assemble
from src.utils.config import get_settings
from src.utils.errors import CapacityError


class CheegerMode(str, Enum):
    EXACT = "exact"
    BALLS = "balls"
    SWEEP = "sweep"


@dataclass(frozen=True)
class CheegerResult:
    alpha: float
    optimal_W: np.ndarray
    mode: CheegerMode
    enumeration_count: int
    U: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    def to_dict(self, vertex_ids: Optional[Sequence[int]] = None) -> dict:
        ids = (lambda x: int(x)) if vertex_ids is None else (lambda x: vertex_ids[x])
        return {
            "alpha": self.alpha,
            "optimal_W": [ids(x) for x in self.optimal_W],
            "mode": self.mode.value,
            "enumeration_count": self.enumeration_count,
            "U_size": int(self.U.size),
        }


def resolve_max_size(max_size: Optional[int]) -> int:
    return get_settings().max_size if max_size is None else max_size


def subset_flux(graph: WeightedGraph, metric: MetricAssignment, subset: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex outgoing b*d mass over the whole graph, and the same mass inside `subset`."""
    src, _, _ = graph.edges
    outflow = np.bincount(src, weights=edge_flux(graph, metric), minlength=graph.size)[subset]
    inner = flux_matrix(graph, metric)[subset][:, subset].toarray()
    return outflow, inner


def cheeger_exact(
    graph: WeightedGraph,
    metric: MetricAssignment,
    U: Iterable[int],
    max_size: Optional[int] = None,
) -> CheegerResult:
    """
    alpha(U) = min over all nonempty W in U of |dW| / m(W), by enumerating
    every subset (disconnected ones included).
    """
    subset = graph.as_subset(U)
    limit = resolve_max_size(max_size)
    if subset.size > limit:
        raise CapacityError(
            f"|U| = {subset.size} exceeds the exact-enumeration limit {limit}; use mode 'sweep' or 'balls'",
            "isoperimetry",
        )
    outflow, inner = subset_flux(graph, metric, subset)
    outcome = minimize_ratio(outflow, inner, graph.m[subset], threads=get_settings().threads)
    optimal = subset[outcome.members]
    # recomputed from the edge list so the reported value does not carry enumeration cancellation
    report = boundary(graph, metric, optimal)
    return CheegerResult(
        alpha=report.ratio,
        optimal_W=optimal,
        mode=CheegerMode.EXACT,
        enumeration_count=outcome.count,
        U=subset,
    )


def cheeger_by_components(
    graph: WeightedGraph,
    metric: MetricAssignment,
    U: Iterable[int],
    max_size: Optional[int] = None,
) -> CheegerResult:
    """
    Exact alpha(U) as the minimum of alpha over the connected components of
    the graph induced on U. Pieces of W in different components share no
    edge, so |dW| and m(W) add and the ratio of W is a mediant of the ratios
    of its pieces. Only the largest component has to fit under `max_size`.
    """
    subset = graph.as_subset(U)
    limit = resolve_max_size(max_size)
    pieces = graph.components(subset)
    largest = max(piece.size for piece in pieces)
    if largest > limit:
        raise CapacityError(
            f"largest component of U has {largest} vertices, above the exact-enumeration limit {limit}",
            "isoperimetry",
        )
    results = [cheeger_exact(graph, metric, piece, limit) for piece in pieces]
    best = min(results, key=lambda r: (r.alpha, tuple(r.optimal_W)))
    return CheegerResult(
        alpha=best.alpha,
        optimal_W=best.optimal_W,
        mode=CheegerMode.EXACT,
        enumeration_count=sum(r.enumeration_count for r in results),
        U=subset,
    )


def cheeger_sweep(graph: WeightedGraph, metric: MetricAssignment, U: Iterable[int]) -> CheegerResult:
    """
    Best ratio among the superlevel sets of u^2, u the Dirichlet ground state
    on U. The result is an upper bound for alpha(U).
    """
    subset = graph.as_subset(U)
    spectral = lambda0(assemble(graph, subset))
    weight = spectral.eigenvector ** 2
    order = np.argsort(-weight, kind="stable")
    ordered = subset[order]

    src, _, _ = graph.edges
    outflow = np.bincount(src, weights=edge_flux(graph, metric), minlength=graph.size)[ordered]
    inner = flux_matrix(graph, metric)[ordered][:, ordered]
    # mass from the k-th vertex back into the earlier prefix
    backward = np.asarray(sparse.tril(inner, k=-1).sum(axis=1)).reshape(-1)
    boundaries = np.cumsum(outflow - 2.0 * backward)
    volumes = np.cumsum(graph.m[ordered])

    values = weight[order]
    breakpoints = np.flatnonzero(np.append(values[:-1] != values[1:], True))
    ratios = np.maximum(boundaries[breakpoints], 0.0) / volumes[breakpoints]
    winner = int(breakpoints[int(np.argmin(ratios))])
    optimal = np.sort(ordered[: winner + 1])
    report = boundary(graph, metric, optimal)
    return CheegerResult(
        alpha=report.ratio,
        optimal_W=optimal,
        mode=CheegerMode.SWEEP,
        enumeration_count=int(breakpoints.size),
        U=subset,
    )


@dataclass(frozen=True)
class ExhaustionStep:
    radius: int
    alpha_estimate: Optional[float]
    raw_alpha: Optional[float]
    mode: Optional[CheegerMode]
    size: int
    note: str = ""

    @property
    def skipped(self) -> bool:
        return self.alpha_estimate is None

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "alpha_estimate": self.alpha_estimate,
            "raw_alpha": self.raw_alpha,
            "mode": None if self.mode is None else self.mode.value,
            "size": self.size,
            "note": self.note,
        }


def exhausted_set(graph: WeightedGraph, family: GraphFamily, radius: int) -> np.ndarray:
    """interior minus the combinatorial ball B_radius(root)."""
    inner = interior(graph, family)
    hops = graph.hop_distances(family.root)
    return inner[hops[inner] > radius]


def alpha_of(
    graph: WeightedGraph,
    metric: MetricAssignment,
    U: np.ndarray,
    max_size: Optional[int] = None,
) -> CheegerResult:
    """Exact alpha(U) when every component of U fits under `max_size`, the sweep bound otherwise."""
    limit = resolve_max_size(max_size)
    if max(piece.size for piece in graph.components(U)) <= limit:
        return cheeger_by_components(graph, metric, U, limit)
    return cheeger_sweep(graph, metric, U)


def cheeger_at_infinity(
    graph: WeightedGraph,
    metric: MetricAssignment,
    family: GraphFamily,
    exhaustion_radii: Sequence[int],
    max_size: Optional[int] = None,
) -> list[ExhaustionStep]:
    """
    alpha(U_k) for U_k = interior minus B_k(root), k in `exhaustion_radii`.

    `raw_alpha` is exact or a sweep upper bound; `alpha_estimate` is the
    running maximum over increasing k, which stays an upper bound for the
    exact alpha(U_k) because alpha(U_k) itself is nondecreasing in k.
    Empty U_k are kept as skipped steps with a note.
    """
    steps = []
    running = None
    for k in sorted(exhaustion_radii):
        U = exhausted_set(graph, family, k)
        if U.size == 0:
            steps.append(ExhaustionStep(k, None, None, None, 0, note="empty exhausted set, skipped"))
            continue
        result = alpha_of(graph, metric, U, max_size)
        running = result.alpha if running is None else max(running, result.alpha)
        steps.append(ExhaustionStep(k, running, result.alpha, result.mode, int(U.size)))
    return steps
