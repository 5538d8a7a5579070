from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np

from src.certifiers.records import CertificateRecord, inequality, not_applicable
from src.curvature.field import curvature
from src.curvature.orientation import sphere_orientation
from src.graph.families import GraphFamily
from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cheeger import cheeger_by_components, cheeger_exact, exhausted_set, resolve_max_size
from src.isoperimetry.cuts import boundary
from src.metrics.intrinsic import MetricAssignment, certify_intrinsic
from src.spectral.eigen import lambda0
from src.spectral.form import assemble, form_value
from src.utils.config import get_settings
from src.utils.errors import PreconditionError

# m >= n is read with this relative slack so that m = n computed in floating point qualifies.
MEASURE_RTOL = 1e-12


def _require_intrinsic(graph: WeightedGraph, metric: MetricAssignment) -> None:
    certificate = certify_intrinsic(graph, metric)
    if not certificate.is_intrinsic:
        raise PreconditionError(
            f"metric '{metric.recipe.value}' is not intrinsic (worst vertex {certificate.worst_vertex}); "
            "the Cheeger bounds do not apply",
            "spectral",
        )


def strong_form_applies(graph: WeightedGraph, metric: MetricAssignment) -> bool:
    """m >= n pointwise and d >= 1 or d <= 1 on every edge."""
    dominates = bool(np.all(graph.m >= graph.degree * (1.0 - MEASURE_RTOL)))
    return dominates and metric.neighbor_side() is not None


def cheeger_rhs(alpha: float, strong: bool) -> tuple[float, Optional[float]]:
    weak = alpha ** 2 / 2.0
    if not strong:
        return weak, None
    return weak, 1.0 - math.sqrt(max(0.0, 1.0 - alpha ** 2))


def verify_cheeger(
    graph: WeightedGraph,
    metric: MetricAssignment,
    U: Iterable[int],
    max_size: Optional[int] = None,
) -> CertificateRecord:
    """
    lambda0(L_U) >= alpha(U)^2 / 2, and additionally
    lambda0(L_U) >= 1 - sqrt(1 - alpha(U)^2) when m >= n and the edge
    distances sit on one side of 1. The record's rhs is the stronger of the
    applicable bounds.
    """
    _require_intrinsic(graph, metric)
    subset = graph.as_subset(U)
    cheeger = cheeger_exact(graph, metric, subset, max_size)
    spectral = lambda0(assemble(graph, subset))
    strong = strong_form_applies(graph, metric)
    weak_rhs, strong_rhs = cheeger_rhs(cheeger.alpha, strong)
    rhs = weak_rhs if strong_rhs is None else max(weak_rhs, strong_rhs)
    return inequality(
        "lambda0(L_U) >= alpha(U)^2/2" + (" and >= 1 - sqrt(1 - alpha(U)^2)" if strong else ""),
        spectral.lambda0,
        rhs,
        {
            "alpha": cheeger.alpha,
            "lambda0": spectral.lambda0,
            "weak_rhs": weak_rhs,
            "strong_rhs": strong_rhs,
            "strong_applicable": strong,
            "U_size": int(subset.size),
            "optimal_W": [graph.vertex_ids[x] for x in cheeger.optimal_W],
            "residual": spectral.residual,
            "method": spectral.method.value,
            "recipe": metric.recipe.value,
        },
    )


def verify_essential(
    graph: WeightedGraph,
    metric: MetricAssignment,
    family: GraphFamily,
    exhaustion_radii: Sequence[int],
    max_size: Optional[int] = None,
) -> list[CertificateRecord]:
    """
    For each k, lambda0 of the Dirichlet restriction to interior minus B_k
    against alpha of the same set. alpha is exact (component-wise
    enumeration) when every component fits under `max_size`; otherwise the
    curvature bound of the sphere orientation serves as a certified lower
    bound. Both sequences are finite-truncation surrogates for the bottom
    of the essential spectrum and alpha at infinity.
    """
    _require_intrinsic(graph, metric)
    limit = resolve_max_size(max_size)
    records = []
    orientation = None
    for k in sorted(exhaustion_radii):
        U = exhausted_set(graph, family, k)
        if U.size == 0:
            continue
        spectral = lambda0(assemble(graph, U))
        context = {
            "radius": k,
            "U_size": int(U.size),
            "lambda0": spectral.lambda0,
            "surrogate": "finite truncation of lambda0_ess and alpha_infinity",
        }
        if max(piece.size for piece in graph.components(U)) <= limit:
            alpha = cheeger_by_components(graph, metric, U, limit).alpha
            context["alpha_source"] = "exact"
        else:
            if orientation is None:
                orientation = sphere_orientation(graph, family.root)
            alpha = curvature(graph, metric, orientation, U).k_lower
            context["alpha_source"] = "curvature lower bound"
            if alpha < 0:
                context["alpha"] = alpha
                records.append(not_applicable("lambda0(L_Uk) >= alpha(U_k)^2/2", spectral.lambda0, 0.0, context))
                continue
        context["alpha"] = alpha
        records.append(inequality("lambda0(L_Uk) >= alpha(U_k)^2/2", spectral.lambda0, alpha ** 2 / 2.0, context))
    return records


def verify_upper_bound(
    graph: WeightedGraph,
    metric: MetricAssignment,
    delta: float,
    subsets: Sequence[Iterable[int]],
    domain: Optional[Iterable[int]] = None,
) -> list[CertificateRecord]:
    """
    Uniformly discrete spaces: with d >= delta on edges every W satisfies
    delta * Q(1_W) <= |dW|, hence lambda0 <= |dW| / (delta * m(W)). The
    spectral side is the full graph, or the Dirichlet restriction to
    `domain` when every W lies inside it. Q is the form without potential.
    """
    if not metric.is_uniformly_discrete(delta):
        src, dst, _ = graph.edges
        short = np.flatnonzero(metric.edge_dist < delta)
        where = "" if not short.size else (
            f": edge ({graph.vertex_ids[src[short[0]]]}, {graph.vertex_ids[dst[short[0]]]}) "
            f"has d = {metric.edge_dist[short[0]]:g}"
        )
        raise PreconditionError(f"metric is not uniformly discrete with delta = {delta:g}{where}", "spectral")

    plain = graph.without_potential()
    support = plain.vertices if domain is None else plain.as_subset(domain)
    bottom = lambda0(assemble(plain, support)).lambda0
    tol = get_settings().bound_tol
    inside = np.zeros(graph.size, dtype=bool)
    inside[support] = True

    records = []
    for W in subsets:
        cut = boundary(plain, metric, W)
        if not np.all(inside[cut.W]):
            raise PreconditionError("test set leaves the spectral domain", "spectral")
        energy = form_value(plain, plain.indicator(cut.W).astype(float))
        implied = cut.boundary_measure / (delta * cut.volume)
        record = inequality(
            "|dW|/m(W) >= delta*Q(1_W)/m(W)",
            cut.ratio,
            delta * energy / cut.volume,
            {
                "delta": delta,
                "W_size": int(cut.W.size),
                "Q_indicator": energy,
                "implied_upper_bound": implied,
                "lambda0": bottom,
                "lambda0_within_bound": bool(bottom <= implied + tol),
            },
        )
        if record.passed and not record.context["lambda0_within_bound"]:
            record = CertificateRecord(record.claim, record.lhs, record.rhs, record.margin, False, record.context)
        records.append(record)
    return records
