from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from src.curvature.orientation import Orientation
from src.graph.families import spheres
from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cuts import edge_flux
from src.metrics.intrinsic import MetricAssignment


@dataclass(frozen=True)
class CurvatureField:
    K: np.ndarray               # one value per vertex, full-graph incidence
    k_lower: float              # min of -K over vertex_set
    vertex_set: np.ndarray
    orientation_origin: str = ""

    def minus_K(self) -> np.ndarray:
        return -self.K

    def to_frame(self, graph: WeightedGraph, root: int = 0) -> pd.DataFrame:
        """Table with columns vertex, sphere, K, minus_K for the vertex set."""
        sphere = spheres(graph, root)
        ids = np.asarray(graph.vertex_ids)
        return pd.DataFrame({
            "vertex": ids[self.vertex_set],
            "sphere": sphere[self.vertex_set],
            "K": self.K[self.vertex_set],
            "minus_K": -self.K[self.vertex_set],
        })

    def to_dict(self) -> dict:
        return {
            "k_lower": self.k_lower,
            "orientation": self.orientation_origin,
            "vertex_count": int(self.vertex_set.size),
        }


def curvature(
    graph: WeightedGraph,
    metric: MetricAssignment,
    orientation: Orientation,
    vertex_set: Optional[Iterable[int]] = None,
) -> CurvatureField:
    """
    K(x) = (sum_{(x,y) in E-} b d - sum_{(x,y) in E+} b d) / m(x) with d the
    closed distance on edges; k_lower = min over `vertex_set` of -K.
    """
    src, _, _ = graph.edges
    signed = np.bincount(src, weights=orientation.sign * edge_flux(graph, metric), minlength=graph.size)
    K = -signed / graph.m
    K.setflags(write=False)
    subset = graph.vertices if vertex_set is None else graph.as_subset(vertex_set)
    return CurvatureField(
        K=K,
        k_lower=float(np.min(-K[subset])),
        vertex_set=subset,
        orientation_origin=orientation.origin,
    )
