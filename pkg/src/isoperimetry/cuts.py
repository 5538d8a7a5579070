from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import sparse

from src.graph.weighted_graph import WeightedGraph
from src.metrics.intrinsic import MetricAssignment
from src.utils.errors import ArgumentError

# Relative slack on ball membership so that sums of irrational edge lengths
# land on the intended side of r.
BALL_RTOL = 1e-12


@dataclass(frozen=True)
class CutReport:
    W: np.ndarray
    boundary_measure: float
    volume: float
    ratio: float
    radius: Optional[float] = None
    potential_term: float = 0.0

    def to_dict(self, vertex_ids: Optional[Sequence[int]] = None) -> dict:
        members = [int(x) for x in self.W] if vertex_ids is None else [vertex_ids[x] for x in self.W]
        data = {
            "W": members,
            "boundary_measure": self.boundary_measure,
            "volume": self.volume,
            "ratio": self.ratio,
        }
        if self.radius is not None:
            data["r"] = self.radius
        if self.potential_term:
            data["potential_term"] = self.potential_term
        return data


def edge_flux(graph: WeightedGraph, metric: MetricAssignment) -> np.ndarray:
    """b(x,y) * d(x,y) on the ordered edges, aligned with `graph.edges`."""
    _, _, w = graph.edges
    return w * metric.edge_dist


def flux_matrix(graph: WeightedGraph, metric: MetricAssignment) -> sparse.csr_matrix:
    src, dst, _ = graph.edges
    return sparse.csr_matrix((edge_flux(graph, metric), (src, dst)), shape=(graph.size, graph.size))


def boundary_value(graph: WeightedGraph, metric: MetricAssignment, mask: np.ndarray) -> float:
    """|dW| for the indicator `mask`; sums run over edges only, so +inf distances never enter."""
    src, dst, _ = graph.edges
    leaving = mask[src] & ~mask[dst]
    return float(np.sum(edge_flux(graph, metric)[leaving]))


def boundary(graph: WeightedGraph, metric: MetricAssignment, W: Iterable[int]) -> CutReport:
    """
    Cut report of W: |dW| = sum over ordered pairs (x, y), x in W, y outside,
    of b(x,y) d(x,y), with d the path-closed distance.
    """
    subset = graph.as_subset(W)
    mask = np.zeros(graph.size, dtype=bool)
    mask[subset] = True
    measure = boundary_value(graph, metric, mask)
    volume = float(np.sum(graph.m[subset]))
    return CutReport(W=subset, boundary_measure=measure, volume=volume, ratio=measure / volume)


# ─────────────────────────────────────────────────────────────
# Ball test sets
# ─────────────────────────────────────────────────────────────
def ball_mask(distances: np.ndarray, r: float) -> np.ndarray:
    return distances <= r * (1.0 + BALL_RTOL)


def cheeger_balls(
    graph: WeightedGraph,
    metric: MetricAssignment,
    center: int,
    radii: Sequence[float],
    combinatorial: bool = False,
) -> list[CutReport]:
    """
    Cut reports of the balls B_r(center) for each r. Metric balls use the
    path-closed distance; `combinatorial=True` uses hop distance instead.
    Every ratio is an upper bound for alpha of any set containing the ball.
    """
    if any(r <= 0 for r in radii):
        raise ArgumentError(f"radii must be positive, got {list(radii)}", "isoperimetry")
    if combinatorial:
        distances = graph.hop_distances(center)
    else:
        distances = metric.distances_from(center)[0]
    reports = []
    for r in radii:
        members = np.flatnonzero(ball_mask(distances, r))
        report = boundary(graph, metric, members)
        reports.append(CutReport(
            W=report.W,
            boundary_measure=report.boundary_measure,
            volume=report.volume,
            ratio=report.ratio,
            radius=float(r),
        ))
    return reports
