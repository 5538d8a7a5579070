from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Mapping, Optional, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from src.graph.weighted_graph import WeightedGraph
from src.utils.config import get_settings
from src.utils.errors import MetricError

# Above this many vertices the path closure on edges avoids a dense matrix.
DENSE_CLOSURE_LIMIT = 4000
# Rows per Dijkstra batch when closing edges of large non-forest graphs.
CLOSURE_BATCH_CELLS = 2 ** 24


class Recipe(str, Enum):
    NATURAL = "natural"
    CANONICAL = "canonical"
    INVERSE_DEGREE = "inverse_degree"
    POTENTIAL_ADAPTED = "potential_adapted"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class MetricAssignment:
    """
    Edge lengths of a path (pseudo-)metric together with their shortest-path
    closure. `edge_length` is aligned with `graph.edges`; `edge_dist` holds the
    closed distances on the same ordered pairs. The full matrix `dist` is only
    built on demand.
    """

    graph: WeightedGraph
    recipe: Recipe
    edge_length: np.ndarray

    @cached_property
    def lengths(self) -> sparse.csr_matrix:
        src, dst, _ = self.graph.edges
        # explicit zeros stay stored so that zero-length edges remain edges
        return sparse.csr_matrix((self.edge_length, (src, dst)), shape=(self.graph.size, self.graph.size))

    @cached_property
    def dist(self) -> np.ndarray:
        """All-pairs shortest-path pseudo-distances; +inf between components."""
        matrix = csgraph.shortest_path(self.lengths, method="D", directed=False)
        matrix.setflags(write=False)
        return matrix

    def distances_from(self, sources) -> np.ndarray:
        """Shortest-path rows for the given sources without forming `dist`."""
        if "dist" in self.__dict__:
            return self.dist[np.atleast_1d(sources)]
        return np.atleast_2d(csgraph.dijkstra(self.lengths, directed=False, indices=np.atleast_1d(sources)))

    @cached_property
    def edge_dist(self) -> np.ndarray:
        src, dst, _ = self.graph.edges
        lengths = self.edge_length
        if lengths.size == 0:
            return lengths
        if np.all(lengths == lengths[0]) and lengths[0] >= 0:
            closed = lengths.copy()
        elif self._is_forest():
            closed = lengths.copy()
        elif self.graph.size <= DENSE_CLOSURE_LIMIT:
            closed = self.dist[src, dst]
        else:
            closed = self._batched_edge_closure(src, dst)
        closed.setflags(write=False)
        return closed

    def _is_forest(self) -> bool:
        count, _ = csgraph.connected_components(self.graph.b, directed=False)
        return self.graph.edge_count == self.graph.size - count

    def _batched_edge_closure(self, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
        closed = np.empty(src.size)
        limit = float(np.max(self.edge_length))
        batch = max(1, CLOSURE_BATCH_CELLS // self.graph.size)
        starts = np.searchsorted(src, np.arange(0, self.graph.size + batch, batch))
        for first, (lo, hi) in enumerate(zip(starts[:-1], starts[1:])):
            if lo == hi:
                continue
            sources = np.arange(first * batch, min((first + 1) * batch, self.graph.size))
            rows = csgraph.dijkstra(self.lengths, directed=False, indices=sources, limit=limit)
            closed[lo:hi] = rows[src[lo:hi] - sources[0], dst[lo:hi]]
        return closed

    # ─────────────────────────────────────────────────────────────
    # Derived quantities
    # ─────────────────────────────────────────────────────────────
    @property
    def min_edge_dist(self) -> float:
        return float(np.min(self.edge_dist)) if self.edge_dist.size else float("inf")

    def is_uniformly_discrete(self, delta: float) -> bool:
        return delta > 0 and self.min_edge_dist >= delta

    def neighbor_side(self) -> Optional[str]:
        """'ge1' if d >= 1 on all edges, 'le1' if d <= 1 on all edges, None if mixed."""
        d = self.edge_dist
        if np.all(d >= 1.0):
            return "ge1"
        if np.all(d <= 1.0):
            return "le1"
        return None

    def scaled(self, factor: float) -> "MetricAssignment":
        if factor <= 0:
            raise MetricError(f"scale factor must be positive, got {factor}", "metrics")
        return MetricAssignment(self.graph, self.recipe, self.edge_length * factor)

    def to_dict(self) -> dict:
        src, dst, _ = self.graph.edges
        ids = self.graph.vertex_ids
        upper = src < dst
        return {
            "recipe": self.recipe.value,
            "edge_lengths": [
                {"u": ids[u], "v": ids[v], "d": float(d)}
                for u, v, d in zip(src[upper], dst[upper], self.edge_length[upper])
            ],
        }


@dataclass(frozen=True)
class IntrinsicCertificate:
    slack: np.ndarray
    is_intrinsic: bool
    worst_vertex: int
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "is_intrinsic": self.is_intrinsic,
            "worst_vertex": self.worst_vertex,
            "min_slack": float(np.min(self.slack)) if self.slack.size else 0.0,
            "relative_tolerance": self.tolerance,
        }


# ─────────────────────────────────────────────────────────────
# Recipes
# ─────────────────────────────────────────────────────────────
def _custom_lengths(graph: WeightedGraph, custom) -> np.ndarray:
    src, dst, _ = graph.edges
    if isinstance(custom, Mapping):
        values = np.empty(src.size)
        for i, (x, y) in enumerate(zip(src, dst)):
            key = (int(x), int(y))
            if key in custom:
                values[i] = custom[key]
            elif key[::-1] in custom:
                values[i] = custom[key[::-1]]
            else:
                raise MetricError(f"no custom length for edge {key}", "metrics")
        # both orientations given must agree
        for (x, y), d in custom.items():
            if (y, x) in custom and custom[(y, x)] != d:
                raise MetricError(f"custom lengths are asymmetric at ({x}, {y})", "metrics")
    elif sparse.issparse(custom) or isinstance(custom, np.ndarray) and custom.ndim == 2:
        matrix = sparse.csr_matrix(custom)
        values = np.asarray(matrix[src, dst]).reshape(-1)
        mirrored = np.asarray(matrix[dst, src]).reshape(-1)
        if np.any(values != mirrored):
            bad = int(np.flatnonzero(values != mirrored)[0])
            raise MetricError(f"custom lengths are asymmetric at ({src[bad]}, {dst[bad]})", "metrics")
    else:
        values = np.asarray(custom, dtype=float).reshape(-1)
        if values.size != src.size:
            raise MetricError(f"expected {src.size} edge lengths, got {values.size}", "metrics")
        # +1 keeps zero lengths stored so the transpose comparison sees them
        shifted = sparse.csr_matrix((values + 1.0, (src, dst)), shape=graph.b.shape)
        if (shifted != shifted.T).nnz:
            raise MetricError("custom edge lengths are asymmetric", "metrics")
    values = np.asarray(values, dtype=float)
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero((values < 0) | ~np.isfinite(values))[0])
        raise MetricError(f"custom length {values[bad]} on edge ({src[bad]}, {dst[bad]}) is not a nonnegative number", "metrics")
    return values


def build_metric(
    graph: WeightedGraph,
    recipe: Union[Recipe, str] = Recipe.CANONICAL,
    custom: Optional[object] = None,
) -> MetricAssignment:
    """
    Edge lengths per recipe, closed under shortest paths.

    natural            1 on every edge
    canonical          ((m/n)(x) ^ (m/n)(y))^(1/2)
    inverse_degree     (n(x) v n(y))^(-1/2)
    potential_adapted  ((m/(n+c))(x) ^ (m/(n+c))(y))^(1/2)
    custom             caller-supplied (mapping, matrix or edge-aligned array)
    """
    recipe = Recipe(recipe)
    src, dst, _ = graph.edges
    n = graph.degree
    if recipe == Recipe.NATURAL:
        lengths = np.ones(src.size)
    elif recipe == Recipe.CANONICAL:
        ratio = graph.m / n
        lengths = np.sqrt(np.minimum(ratio[src], ratio[dst]))
    elif recipe == Recipe.INVERSE_DEGREE:
        lengths = np.maximum(n[src], n[dst]) ** -0.5
    elif recipe == Recipe.POTENTIAL_ADAPTED:
        ratio = graph.m / (n + graph.c)
        lengths = np.sqrt(np.minimum(ratio[src], ratio[dst]))
    else:
        if custom is None:
            raise MetricError("custom recipe needs edge lengths", "metrics")
        lengths = _custom_lengths(graph, custom)
    return MetricAssignment(graph=graph, recipe=recipe, edge_length=np.asarray(lengths, dtype=float))


def metric_from_dict(graph: WeightedGraph, document: dict) -> MetricAssignment:
    """Inverse of `MetricAssignment.to_dict`; lengths are read as a custom assignment."""
    position = {vid: i for i, vid in enumerate(graph.vertex_ids)}
    try:
        custom = {(position[e["u"]], position[e["v"]]): float(e["d"]) for e in document["edge_lengths"]}
        recipe = Recipe(document.get("recipe", "custom"))
    except (KeyError, TypeError, ValueError) as exc:
        raise MetricError(f"malformed metric document: {exc}", "metrics") from exc
    metric = build_metric(graph, Recipe.CUSTOM, custom=custom)
    return MetricAssignment(graph, recipe, metric.edge_length)


def certify_intrinsic(graph: WeightedGraph, metric: MetricAssignment) -> IntrinsicCertificate:
    """
    slack(x) = m(x) - sum_y b(x,y) d(x,y)^2 with d the closed distances on edges;
    intrinsic iff every slack >= -rtol * m(x).
    """
    rtol = get_settings().intrinsic_rtol
    src, _, w = graph.edges
    load = np.bincount(src, weights=w * metric.edge_dist ** 2, minlength=graph.size)
    slack = graph.m - load
    relative = slack / graph.m
    worst = int(np.argmin(relative)) if graph.size else 0
    is_intrinsic = bool(np.all(slack >= -rtol * graph.m))
    return IntrinsicCertificate(
        slack=slack,
        is_intrinsic=is_intrinsic,
        worst_vertex=graph.vertex_ids[worst] if graph.size else -1,
        tolerance=rtol,
    )
