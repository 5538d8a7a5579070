from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import sparse

from src.graph.weighted_graph import WeightedGraph


@dataclass(frozen=True, eq=False)
class FormMatrix:
    """
    Dirichlet restriction of Q(u) = 1/2 sum b(x,y)(u(x)-u(y))^2 + sum c(x)u(x)^2
    to functions supported in `subset`: the diagonal keeps the full degree
    n(x) + c(x), couplings to vertices outside the subset are dropped.
    """

    Q: sparse.csr_matrix
    M_diag: np.ndarray
    subset: np.ndarray
    size: int

    @property
    def dim(self) -> int:
        return self.subset.size

    def evaluate(self, u: np.ndarray) -> float:
        """u^T Q u for u given on the subset."""
        u = np.asarray(u, dtype=float)
        return float(u @ (self.Q @ u))

    def norm_squared(self, u: np.ndarray) -> float:
        u = np.asarray(u, dtype=float)
        return float(np.sum(self.M_diag * u * u))

    def extend(self, u: np.ndarray) -> np.ndarray:
        """Extend a subset vector by zero to the whole vertex set."""
        full = np.zeros(self.size)
        full[self.subset] = u
        return full


def assemble(graph: WeightedGraph, U: Iterable[int]) -> FormMatrix:
    subset = graph.as_subset(U)
    inner = graph.b[subset][:, subset]
    diagonal = graph.degree[subset] + graph.c[subset]
    Q = (sparse.diags(diagonal) - inner).tocsr()
    Q.sort_indices()
    return FormMatrix(Q=Q, M_diag=graph.m[subset].copy(), subset=subset, size=graph.size)


def form_value(graph: WeightedGraph, u: np.ndarray) -> float:
    """Explicit double sum 1/2 sum_{x,y} b(x,y)(u(x)-u(y))^2 + sum_x c(x)u(x)^2 for u on all of X."""
    u = np.asarray(u, dtype=float)
    src, dst, w = graph.edges
    return float(0.5 * np.sum(w * (u[src] - u[dst]) ** 2) + np.sum(graph.c * u * u))


def rayleigh_quotient(form: FormMatrix, u: np.ndarray) -> float:
    return form.evaluate(u) / form.norm_squared(u)
