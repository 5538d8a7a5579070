from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cuts import boundary_value, edge_flux
from src.metrics.intrinsic import MetricAssignment
from src.utils.errors import ArgumentError


@dataclass(frozen=True)
class LevelPiece:
    lower: float
    upper: float
    omega: np.ndarray   # {x : f(x) > t} for every t in [lower, upper)


@dataclass(frozen=True)
class CoareaReport:
    lhs_edge_sum: float
    rhs_integral: float
    volume_lhs: float
    volume_rhs: float

    def gaps(self) -> tuple[float, float]:
        """Relative gaps |lhs - rhs| / (1 + |lhs|) of the co-area and area formulae."""
        return (
            abs(self.lhs_edge_sum - self.rhs_integral) / (1.0 + abs(self.lhs_edge_sum)),
            abs(self.volume_lhs - self.volume_rhs) / (1.0 + abs(self.volume_lhs)),
        )

    def holds(self, rtol: float = 1e-9) -> bool:
        return max(self.gaps()) <= rtol

    def to_dict(self) -> dict:
        coarea_gap, area_gap = self.gaps()
        return {
            "lhs_edge_sum": self.lhs_edge_sum,
            "rhs_integral": self.rhs_integral,
            "volume_lhs": self.volume_lhs,
            "volume_rhs": self.volume_rhs,
            "coarea_gap": coarea_gap,
            "area_gap": area_gap,
        }


def _checked(graph: WeightedGraph, f) -> np.ndarray:
    values = np.asarray(f, dtype=float).reshape(-1)
    if values.size != graph.size:
        raise ArgumentError(f"f has {values.size} values for {graph.size} vertices", "isoperimetry")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ArgumentError("f must be finite and nonnegative", "isoperimetry")
    return values


def superlevel_sets(graph: WeightedGraph, f) -> list[LevelPiece]:
    """
    Piecewise-constant form of t -> Omega_t = {f > t} on [0, max f): one
    piece per gap between consecutive distinct values of f (0 included).
    """
    values = _checked(graph, f)
    thresholds = np.unique(np.concatenate([[0.0], values]))
    pieces = []
    for lower, upper in zip(thresholds[:-1], thresholds[1:]):
        pieces.append(LevelPiece(float(lower), float(upper), np.flatnonzero(values > lower)))
    return pieces


def coarea_check(graph: WeightedGraph, metric: MetricAssignment, f) -> CoareaReport:
    """
    Both sides of the co-area formula
        1/2 sum_{x,y} b d |f(x) - f(y)| = int_0^inf |d Omega_t| dt
    and of the area formula
        sum_x f(x) m(x) = int_0^inf m(Omega_t) dt,
    the integrals taken exactly over the superlevel pieces.
    """
    values = _checked(graph, f)
    src, dst, _ = graph.edges
    lhs = 0.5 * float(np.sum(edge_flux(graph, metric) * np.abs(values[src] - values[dst])))
    volume_lhs = float(np.sum(values * graph.m))

    rhs = 0.0
    volume_rhs = 0.0
    for piece in superlevel_sets(graph, values):
        mask = np.zeros(graph.size, dtype=bool)
        mask[piece.omega] = True
        width = piece.upper - piece.lower
        rhs += width * boundary_value(graph, metric, mask)
        volume_rhs += width * float(np.sum(graph.m[piece.omega]))
    return CoareaReport(lhs, rhs, volume_lhs, volume_rhs)
