from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Optional, Sequence, TYPE_CHECKING

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from src.utils.errors import ArgumentError, InputError

if TYPE_CHECKING:
    from src.graph.families import GraphFamily


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """
    A graph b over a discrete measure space (X, m), optionally with a potential c.

    Vertices are the dense integers 0..N-1; `vertex_ids` keeps the ids a JSON
    document used, `labels` any string metadata. `b` is stored as given (the
    constructor does not symmetrize) so that `validate` can report asymmetry.
    """

    b: sparse.csr_matrix
    m: np.ndarray
    c: Optional[np.ndarray] = None
    labels: Optional[tuple] = None
    vertex_ids: Optional[tuple] = None
    origin: Optional["GraphFamily"] = field(default=None)

    def __post_init__(self):
        b = sparse.csr_matrix(self.b, dtype=float, copy=True)
        b.eliminate_zeros()
        b.sort_indices()
        size = b.shape[0]
        if b.shape != (size, size):
            raise InputError(f"weight matrix must be square, got {b.shape}", "graph_core")

        m = np.array(self.m, dtype=float).reshape(-1)
        if m.shape[0] != size:
            raise InputError(f"measure has {m.shape[0]} entries for {size} vertices", "graph_core")
        c = np.zeros(size) if self.c is None else np.array(self.c, dtype=float).reshape(-1)
        if c.shape[0] != size:
            raise InputError(f"potential has {c.shape[0]} entries for {size} vertices", "graph_core")

        labels = tuple(self.labels) if self.labels is not None else (None,) * size
        vertex_ids = tuple(self.vertex_ids) if self.vertex_ids is not None else tuple(range(size))
        if len(labels) != size or len(vertex_ids) != size:
            raise InputError("labels and vertex ids must have one entry per vertex", "graph_core")

        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", _frozen(m))
        object.__setattr__(self, "c", _frozen(c))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "vertex_ids", vertex_ids)

    # ─────────────────────────────────────────────────────────────
    # Construction
    # ─────────────────────────────────────────────────────────────
    @classmethod
    def from_edges(
        cls,
        size: int,
        edges: Iterable[tuple],
        m: Sequence[float] | float = 1.0,
        c: Optional[Sequence[float]] = None,
        labels: Optional[Sequence[Optional[str]]] = None,
        vertex_ids: Optional[Sequence[int]] = None,
        origin: Optional["GraphFamily"] = None,
    ) -> "WeightedGraph":
        """
        Build a symmetric graph from (u, v, weight) triples listed once per
        unordered pair. A pair listed twice is an input error.
        """
        seen = {}
        for u, v, w in edges:
            u, v = int(u), int(v)
            if not (0 <= u < size and 0 <= v < size):
                raise InputError(f"edge ({u}, {v}) references a missing vertex", "graph_core")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputError(f"edge {key} listed twice", "graph_core")
            seen[key] = float(w)

        rows, cols, vals = [], [], []
        for (u, v), w in seen.items():
            rows.append(u)
            cols.append(v)
            vals.append(w)
            if u != v:
                rows.append(v)
                cols.append(u)
                vals.append(w)
        b = sparse.csr_matrix((vals, (rows, cols)), shape=(size, size))
        measure = np.full(size, float(m)) if np.isscalar(m) else np.asarray(m, dtype=float)
        return cls(b=b, m=measure, c=c, labels=labels, vertex_ids=vertex_ids, origin=origin)

    @classmethod
    def from_arrays(
        cls,
        size: int,
        rows: np.ndarray,
        cols: np.ndarray,
        weights: np.ndarray,
        m: np.ndarray | float = 1.0,
        c: Optional[np.ndarray] = None,
        origin: Optional["GraphFamily"] = None,
    ) -> "WeightedGraph":
        """Vectorized counterpart of `from_edges` for large generated families."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        weights = np.asarray(weights, dtype=float)
        b = sparse.csr_matrix(
            (np.concatenate([weights, weights]), (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
            shape=(size, size),
        )
        measure = np.full(size, float(m)) if np.isscalar(m) else np.asarray(m, dtype=float)
        return cls(b=b, m=measure, c=c, origin=origin)

    # ─────────────────────────────────────────────────────────────
    # Basic structure
    # ─────────────────────────────────────────────────────────────
    @property
    def size(self) -> int:
        return self.b.shape[0]

    @property
    def vertices(self) -> np.ndarray:
        return np.arange(self.size)

    @cached_property
    def degree(self) -> np.ndarray:
        """Weighted degree n(x) = sum_y b(x, y)."""
        return _frozen(np.asarray(self.b.sum(axis=1)).reshape(-1))

    @cached_property
    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Ordered pairs (x, y) with b(x, y) > 0, row-major, plus their weights."""
        coo = self.b.tocoo()
        keep = coo.data > 0
        order = np.lexsort((coo.col[keep], coo.row[keep]))
        src = coo.row[keep][order].astype(np.int64)
        dst = coo.col[keep][order].astype(np.int64)
        w = coo.data[keep][order]
        return _frozen(src), _frozen(dst), _frozen(w)

    @property
    def edge_count(self) -> int:
        """Number of unordered pairs {x, y}, x != y, with b(x, y) > 0."""
        src, dst, _ = self.edges
        return int(np.count_nonzero(src < dst))

    @property
    def has_potential(self) -> bool:
        return bool(np.any(self.c != 0))

    @property
    def root(self) -> int:
        return 0

    def hop_distances(self, root: Optional[int] = None) -> np.ndarray:
        """Combinatorial distance from `root`; unreachable vertices get +inf."""
        source = self.root if root is None else int(root)
        pattern = sparse.csr_matrix((np.ones(self.b.nnz), self.b.indices, self.b.indptr), shape=self.b.shape)
        return csgraph.shortest_path(pattern, directed=False, unweighted=True, indices=source)

    def components(self, subset: Optional[np.ndarray] = None) -> list[np.ndarray]:
        """Connected components of the graph induced on `subset` (all vertices by default)."""
        idx = self.vertices if subset is None else np.asarray(subset, dtype=np.int64)
        if idx.size == 0:
            return []
        induced = self.b[idx][:, idx]
        count, labels = csgraph.connected_components(induced, directed=False)
        return [idx[labels == k] for k in range(count)]

    # ─────────────────────────────────────────────────────────────
    # Derived graphs
    # ─────────────────────────────────────────────────────────────
    def without_potential(self) -> "WeightedGraph":
        return replace(self, c=np.zeros(self.size))

    def induced_subgraph(self, subset: Sequence[int]) -> "WeightedGraph":
        idx = np.asarray(subset, dtype=np.int64)
        return WeightedGraph(
            b=self.b[idx][:, idx],
            m=self.m[idx],
            c=self.c[idx],
            labels=tuple(self.labels[i] for i in idx),
            vertex_ids=tuple(self.vertex_ids[i] for i in idx),
        )

    # ─────────────────────────────────────────────────────────────
    # Subset helpers
    # ─────────────────────────────────────────────────────────────
    def as_subset(self, subset: Iterable[int], allow_empty: bool = False) -> np.ndarray:
        """Normalize a vertex subset to a sorted, duplicate-free index array."""
        idx = np.unique(np.asarray(list(subset) if not isinstance(subset, np.ndarray) else subset, dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= self.size):
            raise ArgumentError(f"subset references vertices outside 0..{self.size - 1}", "graph_core")
        if idx.size == 0 and not allow_empty:
            raise ArgumentError("vertex subset must be nonempty", "graph_core")
        return idx

    def indicator(self, subset: Iterable[int]) -> np.ndarray:
        mask = np.zeros(self.size, dtype=bool)
        mask[self.as_subset(subset, allow_empty=True)] = True
        return mask
