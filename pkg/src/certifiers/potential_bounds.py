from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from src.certifiers.records import CertificateRecord, inequality
from src.potentials.doubling import BoundaryConvention, DoubledGraph, alpha_dot
from src.spectral.eigen import lambda0
from src.spectral.form import assemble, form_value

# Allowed relative gap between the two form evaluations.
FORM_RTOL = 1e-12


def _relative_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


def verify_potential_form_identity(
    doubled: DoubledGraph,
    trials: int = 100,
    rng: Optional[np.random.Generator] = None,
) -> CertificateRecord:
    """
    Q_{b,c}(u) (explicit sum with potential, base graph) against
    Q_{b-dot}(u + 0) (assembled matrix on the doubled graph, u extended by
    zero on the copy) for `trials` random u.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    base = doubled.base
    form = assemble(doubled.doubled, doubled.doubled.vertices)
    worst = 0.0
    for _ in range(trials):
        u = rng.normal(size=base.size)
        extended = np.concatenate([u, np.zeros(base.size)])
        worst = max(worst, _relative_gap(form_value(base, u), form.evaluate(extended)))
    return inequality(
        "Q_{b,c}(u) = Q_{b-dot}(u + 0)",
        FORM_RTOL,
        worst,
        {"trials": trials, "max_relative_gap": worst, "vertices": base.size, "cross_edges": doubled.cross_count},
        tol=0.0,
    )


def verify_potential_cheeger(
    doubled: DoubledGraph,
    U: Iterable[int],
    max_size: Optional[int] = None,
    convention: BoundaryConvention | str = BoundaryConvention.DOUBLED,
) -> CertificateRecord:
    """lambda0 of the Dirichlet Q_{b,c} on U against alpha-dot(U)^2 / 2."""
    convention = BoundaryConvention(convention)
    base = doubled.base
    subset = base.as_subset(U)
    cheeger = alpha_dot(doubled, subset, max_size, convention)
    spectral = lambda0(assemble(base, subset))
    return inequality(
        "lambda0(L_{b,c,U}) >= alpha_dot(U)^2/2",
        spectral.lambda0,
        cheeger.alpha ** 2 / 2.0,
        {
            "alpha_dot": cheeger.alpha,
            "lambda0": spectral.lambda0,
            "convention": convention.value,
            "U_size": int(subset.size),
            "optimal_W": [base.vertex_ids[x] for x in cheeger.optimal_W],
            "residual": spectral.residual,
        },
    )
