from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from src.spectral.form import FormMatrix
from src.utils.config import get_settings
from src.utils.errors import ConvergenceError

# Relative shift below the spectrum used by the shift-invert iteration.
SHIFT_RTOL = 1e-6


class SolverMethod(str, Enum):
    DENSE = "dense"
    ITERATIVE = "iterative"


@dataclass(frozen=True)
class SpectralResult:
    lambda0: float
    eigenvector: np.ndarray     # on form.subset, ||u||_m = 1
    residual: float
    method: SolverMethod
    subset: np.ndarray

    def to_dict(self, vertex_ids=None) -> dict:
        ids = (lambda x: int(x)) if vertex_ids is None else (lambda x: vertex_ids[x])
        return {
            "lambda0": self.lambda0,
            "residual": self.residual,
            "method": self.method.value,
            "eigenvector": {str(ids(x)): float(v) for x, v in zip(self.subset, self.eigenvector)},
        }


def _symmetrized(form: FormMatrix) -> tuple[sparse.csr_matrix, np.ndarray]:
    scale = 1.0 / np.sqrt(form.M_diag)
    D = sparse.diags(scale)
    return (D @ form.Q @ D).tocsr(), scale


def _dense_bottom(A: sparse.csr_matrix) -> tuple[float, np.ndarray]:
    values, vectors = scipy.linalg.eigh(A.toarray(), subset_by_index=[0, 0])
    return float(values[0]), vectors[:, 0]


def _iterative_bottom(A: sparse.csr_matrix) -> tuple[float, np.ndarray]:
    spread = float(np.max(np.abs(A.diagonal()))) if A.shape[0] else 1.0
    sigma = -SHIFT_RTOL * max(spread, 1.0)
    # fixed start vector keeps ARPACK deterministic
    values, vectors = eigsh(A, k=1, sigma=sigma, which="LM", v0=np.ones(A.shape[0]))
    return float(values[0]), vectors[:, 0]


def lambda0(
    form: FormMatrix,
    dense_limit: Optional[int] = None,
    residual_rtol: Optional[float] = None,
) -> SpectralResult:
    """
    Smallest eigenvalue of the pencil (Q, M) through M^{-1/2} Q M^{-1/2}.

    Dense `eigh` below `dense_limit`, shift-invert Lanczos above. The
    eigenvector is M-normalized with its largest-magnitude entry positive;
    a residual ||Qu - lambda M u|| above `residual_rtol * ||Mu||` raises.
    """
    settings = get_settings()
    dense_limit = settings.dense_limit if dense_limit is None else dense_limit
    residual_rtol = settings.residual_rtol if residual_rtol is None else residual_rtol

    A, scale = _symmetrized(form)
    method = SolverMethod.DENSE if form.dim < dense_limit else SolverMethod.ITERATIVE
    try:
        if method == SolverMethod.DENSE:
            value, y = _dense_bottom(A)
        else:
            value, y = _iterative_bottom(A)
    except ArpackNoConvergence as exc:
        raise ConvergenceError(f"shift-invert iteration did not converge on {form.dim} vertices", float("inf")) from exc

    # Q is positive semidefinite; negative values are rounding
    value = max(value, 0.0)
    u = scale * y
    u = u / np.sqrt(form.norm_squared(u))
    pivot = int(np.argmax(np.abs(u)))
    if u[pivot] < 0:
        u = -u

    Mu = form.M_diag * u
    residual = float(np.linalg.norm(form.Q @ u - value * Mu))
    if residual > residual_rtol * np.linalg.norm(Mu):
        raise ConvergenceError(
            f"{method.value} solver missed the residual tolerance {residual_rtol:g}", residual
        )
    u.setflags(write=False)
    return SpectralResult(lambda0=value, eigenvector=u, residual=residual, method=method, subset=form.subset)
