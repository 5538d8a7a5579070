from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from src.certifiers.records import CertificateRecord, inequality, not_applicable
from src.curvature.field import curvature
from src.curvature.orientation import Orientation
from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cheeger import cheeger_exact, resolve_max_size, subset_flux
from src.isoperimetry.cuts import boundary
from src.isoperimetry.enumeration import min_chain_margin
from src.metrics.intrinsic import MetricAssignment
from src.utils.config import get_settings
from src.utils.errors import CapacityError


def verify_curvature_bound(
    graph: WeightedGraph,
    metric: MetricAssignment,
    orientation: Orientation,
    U: Iterable[int],
    max_size: Optional[int] = None,
) -> CertificateRecord:
    """
    -K >= k >= 0 on U forces alpha(U) >= k. Checks the per-set chain
    |dW|/m(W) >= min_{x in W} -K(x) on every nonempty W in U and then
    alpha(U) >= k_lower(U). K uses full-graph incidence. A negative k_lower
    makes the record not applicable.
    """
    subset = graph.as_subset(U)
    limit = resolve_max_size(max_size)
    if subset.size > limit:
        raise CapacityError(
            f"|U| = {subset.size} exceeds the exact-enumeration limit {limit}", "curvature"
        )
    field = curvature(graph, metric, orientation, subset)
    context = {
        "k_lower": field.k_lower,
        "U_size": int(subset.size),
        "orientation": orientation.origin,
        "recipe": metric.recipe.value,
    }
    if field.k_lower < 0:
        return not_applicable("alpha(U) >= k_lower(U)", 0.0, field.k_lower, context)

    outflow, inner = subset_flux(graph, metric, subset)
    chain = min_chain_margin(outflow, inner, graph.m[subset], -field.K[subset], threads=get_settings().threads)
    alpha = cheeger_exact(graph, metric, subset, limit).alpha
    tol = get_settings().bound_tol
    context.update({
        "alpha": alpha,
        "worst_chain_margin": chain.margin,
        "worst_chain_W": [graph.vertex_ids[x] for x in subset[chain.members]],
        "chains_checked": chain.count,
    })
    record = inequality("alpha(U) >= k_lower(U)", alpha, field.k_lower, context, tol)
    if record.passed and chain.margin < -tol:
        return CertificateRecord(record.claim, record.lhs, record.rhs, record.margin, False, record.context)
    return record


def verify_curvature_chain(
    graph: WeightedGraph,
    metric: MetricAssignment,
    orientation: Orientation,
    W: Iterable[int],
) -> CertificateRecord:
    """Single-set chain min_{x in W}(-K(x)) * m(W) <= |dW|, valid for any orientation."""
    cut = boundary(graph, metric, W)
    field = curvature(graph, metric, orientation)
    lowest = float(np.min(-field.K[cut.W]))
    return inequality(
        "|dW| >= min_W(-K) * m(W)",
        cut.boundary_measure,
        lowest * cut.volume,
        {"W_size": int(cut.W.size), "min_minus_K": lowest, "volume": cut.volume, "orientation": orientation.origin},
    )
