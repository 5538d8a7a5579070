from __future__ import annotations

from dataclasses import dataclass, asdict
from enum import Enum
from typing import Optional

import networkx as nx
import numpy as np

from src.graph.weighted_graph import WeightedGraph
from src.utils.errors import ParameterError, UnsupportedError


class FamilyKind(str, Enum):
    K_REGULAR_TREE = "k_regular_tree"
    ANTITREE = "antitree"
    TREE_WITH_SPHERE_EDGES = "tree_with_sphere_edges"
    PATH = "path"
    RANDOM_WEIGHTED = "random_weighted"


class MeasureConvention(str, Enum):
    UNIT = "unit"
    WEIGHTED_DEGREE = "weighted_degree"
    CUSTOM = "custom"


SPHERICAL_KINDS = {
    FamilyKind.K_REGULAR_TREE,
    FamilyKind.ANTITREE,
    FamilyKind.TREE_WITH_SPHERE_EDGES,
    FamilyKind.PATH,
}


@dataclass(frozen=True)
class GraphFamily:
    """
    A named graph family and the parameters of its radius-R truncation.

    Spherical kinds are rooted at vertex 0 and numbered breadth-first, so the
    radius-R graph is the induced subgraph of any deeper truncation on its
    first |B_R| vertices. `random_weighted` ignores `radius` and uses the
    skeleton parameters instead.
    """

    kind: FamilyKind
    radius: int = 3
    k: int = 2
    sphere_sizes: Optional[tuple] = None
    sphere_exponent: float = 2.0
    measure: MeasureConvention = MeasureConvention.UNIT
    measure_values: Optional[tuple] = None
    vertices: int = 10
    edge_probability: float = 0.3
    weight_range: tuple = (0.5, 2.0)
    measure_range: tuple = (0.5, 2.0)
    potential_range: Optional[tuple] = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        object.__setattr__(self, "measure", MeasureConvention(self.measure))
        for name in ("sphere_sizes", "measure_values", "weight_range", "measure_range", "potential_range"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(value))

    @property
    def root(self) -> int:
        return 0

    @property
    def is_spherical(self) -> bool:
        return self.kind in SPHERICAL_KINDS

    @property
    def depth(self) -> int:
        """Largest combinatorial distance from the root in the truncation."""
        # antitree radius counts the spheres S_0..S_{R-1} of the law #S_{r-1} = r^exponent
        return self.radius - 1 if self.kind == FamilyKind.ANTITREE else self.radius

    def antitree_sphere_sizes(self) -> tuple:
        """#S_j for j = 0..R-1; the default law is #S_{r-1} = r^exponent."""
        if self.sphere_sizes is not None:
            return tuple(int(s) for s in self.sphere_sizes[: self.radius])
        return tuple(int(round((j + 1) ** self.sphere_exponent)) for j in range(self.radius))

    def to_dict(self) -> dict:
        data = asdict(self)
        data["kind"] = self.kind.value
        data["measure"] = self.measure.value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "GraphFamily":
        return cls(**data)

    # ─────────────────────────────────────────────────────────────
    # Parameter checks
    # ─────────────────────────────────────────────────────────────
    def check_parameters(self) -> None:
        if self.is_spherical:
            if int(self.radius) != self.radius or self.radius < 1:
                raise ParameterError("radius", f"must be an integer >= 1, got {self.radius}")
        if self.kind in (FamilyKind.K_REGULAR_TREE, FamilyKind.TREE_WITH_SPHERE_EDGES):
            if int(self.k) != self.k or self.k < 2:
                raise ParameterError("k", f"branching must be an integer >= 2, got {self.k}")
        if self.kind == FamilyKind.ANTITREE:
            if self.radius < 2:
                raise ParameterError("radius", f"an antitree needs at least 2 spheres, got {self.radius}")
            if self.sphere_sizes is not None and len(self.sphere_sizes) < self.radius:
                raise ParameterError("sphere_sizes", f"need {self.radius} sizes for radius {self.radius}")
            sizes = self.antitree_sphere_sizes()
            if any(s < 1 for s in sizes):
                raise ParameterError("sphere_sizes", f"sphere sizes must be >= 1, got {sizes}")
            if sizes[0] != 1:
                raise ParameterError("sphere_sizes", "the root sphere S_0 must contain exactly one vertex")
        if self.kind == FamilyKind.RANDOM_WEIGHTED:
            if self.vertices < 2:
                raise ParameterError("vertices", f"need at least 2 vertices, got {self.vertices}")
            if not 0.0 <= self.edge_probability <= 1.0:
                raise ParameterError("edge_probability", f"must lie in [0, 1], got {self.edge_probability}")
        for name in ("weight_range", "measure_range", "potential_range"):
            bounds = getattr(self, name)
            if bounds is None:
                continue
            low, high = bounds
            if low > high or low < 0 or (name != "potential_range" and low <= 0):
                raise ParameterError(name, f"must be an ordered positive range, got {bounds}")
        if self.measure == MeasureConvention.CUSTOM and self.measure_values is not None:
            if any(v <= 0 for v in self.measure_values):
                raise ParameterError("measure_values", "custom measures must be positive")
        if (self.measure == MeasureConvention.CUSTOM and self.measure_values is None
                and self.kind != FamilyKind.RANDOM_WEIGHTED):
            raise ParameterError("measure_values", "custom measure convention needs explicit values")


# ─────────────────────────────────────────────────────────────
# Edge skeletons (breadth-first numbering from the root)
# ─────────────────────────────────────────────────────────────
def _tree_edges(k: int, radius: int) -> tuple[int, np.ndarray, np.ndarray]:
    size = (k ** (radius + 1) - 1) // (k - 1)
    children = np.arange(1, size, dtype=np.int64)
    return size, (children - 1) // k, children


def _sphere_ranges(sizes) -> list[tuple[int, int]]:
    starts = np.concatenate([[0], np.cumsum(sizes)])
    return [(int(starts[j]), int(starts[j + 1])) for j in range(len(sizes))]


def _clique_edges(start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.triu_indices(stop - start, 1)
    return rows + start, cols + start


def _random_skeleton(family: GraphFamily, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    size = family.vertices
    # random recursive tree keeps every vertex attached
    children = np.arange(1, size)
    parents = np.array([rng.integers(0, i) for i in children], dtype=np.int64)
    pairs = {(int(p), int(q)) for p, q in zip(parents, children)}
    skeleton = nx.gnp_random_graph(size, family.edge_probability, seed=int(rng.integers(0, 2**31 - 1)))
    pairs.update((min(u, v), max(u, v)) for u, v in skeleton.edges())
    ordered = sorted(pairs)
    return np.array([u for u, _ in ordered], dtype=np.int64), np.array([v for _, v in ordered], dtype=np.int64)


def _measure(family: GraphFamily, size: int, degree: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if family.measure == MeasureConvention.UNIT:
        return np.ones(size)
    if family.measure == MeasureConvention.WEIGHTED_DEGREE:
        return np.array(degree, dtype=float)
    if family.measure_values is not None:
        if len(family.measure_values) != size:
            raise ParameterError("measure_values", f"expected {size} values, got {len(family.measure_values)}")
        return np.array(family.measure_values, dtype=float)
    return rng.uniform(*family.measure_range, size=size)


# ─────────────────────────────────────────────────────────────
# Public operations
# ─────────────────────────────────────────────────────────────
def generate(family: GraphFamily) -> WeightedGraph:
    """Return the radius-R truncation of `family` (or the seeded random graph)."""
    family.check_parameters()
    rng = np.random.default_rng(family.seed)

    if family.kind == FamilyKind.K_REGULAR_TREE:
        size, rows, cols = _tree_edges(family.k, family.radius)
        weights = np.ones(rows.size)
    elif family.kind == FamilyKind.TREE_WITH_SPHERE_EDGES:
        size, tree_rows, tree_cols = _tree_edges(family.k, family.radius)
        blocks_r, blocks_c = [tree_rows], [tree_cols]
        sizes = [family.k ** j for j in range(family.radius + 1)]
        for start, stop in _sphere_ranges(sizes)[1:]:
            r, c = _clique_edges(start, stop)
            blocks_r.append(r)
            blocks_c.append(c)
        rows, cols = np.concatenate(blocks_r), np.concatenate(blocks_c)
        weights = np.ones(rows.size)
    elif family.kind == FamilyKind.ANTITREE:
        sizes = family.antitree_sphere_sizes()
        ranges = _sphere_ranges(sizes)
        size = ranges[-1][1]
        blocks_r, blocks_c = [], []
        for (a0, a1), (b0, b1) in zip(ranges[:-1], ranges[1:]):
            r, c = np.meshgrid(np.arange(a0, a1), np.arange(b0, b1), indexing="ij")
            blocks_r.append(r.ravel())
            blocks_c.append(c.ravel())
        rows, cols = np.concatenate(blocks_r), np.concatenate(blocks_c)
        weights = np.ones(rows.size)
    elif family.kind == FamilyKind.PATH:
        size = family.radius + 1
        rows, cols = np.arange(size - 1), np.arange(1, size)
        weights = np.ones(rows.size)
    else:
        size = family.vertices
        rows, cols = _random_skeleton(family, rng)
        weights = rng.uniform(*family.weight_range, size=rows.size)

    graph = WeightedGraph.from_arrays(size, rows, cols, weights, origin=family)
    # m = n is taken from the assembled graph so that it matches `degree` bit for bit
    m = _measure(family, size, graph.degree, rng)
    c = None
    if family.potential_range is not None:
        c = rng.uniform(*family.potential_range, size=size)
    return WeightedGraph(b=graph.b, m=m, c=c, origin=family)


def interior(graph: WeightedGraph, family: GraphFamily) -> np.ndarray:
    """
    Vertices at combinatorial distance below the truncation depth (R, or R-1
    for antitrees): exactly those whose full neighbourhood in the infinite
    family is present in the truncation.
    """
    if graph.origin is None or graph.origin != family:
        raise UnsupportedError("graph was not generated from this family", "graph_core")
    if not family.is_spherical:
        raise UnsupportedError(f"family kind '{family.kind.value}' has no truncation radius", "graph_core")
    hops = graph.hop_distances(family.root)
    return np.flatnonzero(hops < family.depth)


def spheres(graph: WeightedGraph, root: int = 0) -> np.ndarray:
    """Combinatorial sphere index |x| of every vertex (-1 when unreachable)."""
    hops = graph.hop_distances(root)
    index = np.full(graph.size, -1, dtype=np.int64)
    finite = np.isfinite(hops)
    index[finite] = hops[finite].astype(np.int64)
    return index
