from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cuts import ball_mask
from src.metrics.intrinsic import MetricAssignment
from src.utils.errors import ArgumentError

# Centers per Dijkstra call when many centers are requested.
CENTER_BATCH = 64
# tags of dmax_condition
DMAX_EDGE_PROXY = "edge_distances_bounded_below"
DMAX_MEASURE_PROXY = "measure_bounded_below"


@dataclass(frozen=True)
class GrowthEstimate:
    """
    Finite-radius values of inf_x log(m(B_r(x)) / m(B_1(x))) / r over the
    center set. `mu_hat` is the value at the largest radius; the liminf of
    the infinite graph may sit on either side of it.
    """

    per_radius: list
    mu_hat: float
    center_set: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.per_radius, columns=["r", "inf_value"])

    def to_dict(self) -> dict:
        return {
            "per_radius": [{"r": r, "inf_value": v} for r, v in self.per_radius],
            "mu_hat": self.mu_hat,
            "centers": [int(x) for x in self.center_set],
        }


def ball_masses(graph: WeightedGraph, distances: np.ndarray, radii: Sequence[float]) -> np.ndarray:
    """m(B_r(x)) for one row of distances and every r."""
    return np.array([float(np.sum(graph.m[ball_mask(distances, r)])) for r in radii])


def volume_growth(
    graph: WeightedGraph,
    metric: MetricAssignment,
    centers: Optional[Iterable[int]] = None,
    radii: Sequence[float] = (1.0,),
) -> GrowthEstimate:
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ArgumentError(f"radii must be positive and increasing, got {radii}", "growth")
    center_set = np.array([graph.root]) if centers is None else graph.as_subset(centers)

    lowest = np.full(len(radii), np.inf)
    for start in range(0, center_set.size, CENTER_BATCH):
        batch = center_set[start:start + CENTER_BATCH]
        rows = metric.distances_from(batch)
        for distances in rows:
            unit = float(np.sum(graph.m[ball_mask(distances, 1.0)]))
            masses = ball_masses(graph, distances, radii)
            lowest = np.minimum(lowest, np.log(masses / unit) / np.array(radii))

    per_radius = [(r, float(v)) for r, v in zip(radii, lowest)]
    return GrowthEstimate(per_radius=per_radius, mu_hat=per_radius[-1][1], center_set=center_set)


def dmax_condition(graph: WeightedGraph, metric: MetricAssignment) -> str:
    """
    Which sufficient condition for D = D^max the truncation is consistent with.

    Both tags are proxies read off the finite graph. A finite truncation is
    always locally finite and complete, so `edge_distances_bounded_below`
    only records min d > 0 over the edges present; a family whose edge
    distances tend to 0 deeper down still gets it at every finite radius.
    `measure_bounded_below` likewise records min m > 0 over the truncation.
    `unverified` when neither holds. Metadata only.
    """
    if metric.min_edge_dist > 0:
        return DMAX_EDGE_PROXY
    if graph.size and float(np.min(graph.m)) > 0:
        return DMAX_MEASURE_PROXY
    return "unverified"
