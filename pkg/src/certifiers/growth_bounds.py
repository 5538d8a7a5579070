from __future__ import annotations

from typing import Iterable, Optional, Sequence

from src.certifiers.records import CertificateRecord, inequality
from src.graph.families import GraphFamily
from src.graph.weighted_graph import WeightedGraph
from src.growth.volume import dmax_condition, volume_growth
from src.metrics.intrinsic import MetricAssignment
from src.utils.config import get_settings


def verify_growth_bound(
    graph: WeightedGraph,
    metric: MetricAssignment,
    family: Optional[GraphFamily],
    alpha_lower: float,
    radii: Sequence[float],
    centers: Optional[Iterable[int]] = None,
    slack: Optional[float] = None,
) -> CertificateRecord:
    """
    Consistency check 2 * alpha_lower <= mu_hat + slack at truncation scale.
    D = D^max is an assumption carried as a tag, never verified here, and
    the finite-radius mu_hat has no certified error sign, so a passing record
    is evidence, not proof.
    """
    slack = get_settings().growth_slack if slack is None else slack
    estimate = volume_growth(graph, metric, centers, radii)
    return inequality(
        "mu_hat + slack >= 2 * alpha_lower",
        estimate.mu_hat + slack,
        2.0 * alpha_lower,
        {
            "mu_hat": estimate.mu_hat,
            "slack": slack,
            "alpha_lower": alpha_lower,
            "per_radius": [{"r": r, "inf_value": v} for r, v in estimate.per_radius],
            "dmax_condition": dmax_condition(graph, metric),
            "family": None if family is None else family.to_dict(),
            "reading": "consistency check, not a proof",
        },
    )
