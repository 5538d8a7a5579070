from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from src.utils.config import get_settings


@dataclass(frozen=True)
class CertificateRecord:
    """
    One checked inequality lhs >= rhs - tol. `passed` is None when the
    hypothesis of the underlying statement does not hold and the record is
    informational only.
    """

    claim: str
    lhs: float
    rhs: float
    margin: float
    passed: Optional[bool]
    context: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.passed is None:
            return "N/A"
        return "PASS" if self.passed else "FAIL"

    @property
    def failed(self) -> bool:
        return self.passed is False

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "passed": self.passed,
            "status": self.status,
            "context": _plain(self.context),
        }


def _plain(value: Any) -> Any:
    """Convert numpy scalars and arrays inside a context dict to JSON types."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def inequality(claim: str, lhs: float, rhs: float, context: dict, tol: Optional[float] = None) -> CertificateRecord:
    tol = get_settings().bound_tol if tol is None else tol
    lhs, rhs = float(lhs), float(rhs)
    return CertificateRecord(
        claim=claim,
        lhs=lhs,
        rhs=rhs,
        margin=lhs - rhs,
        passed=bool(lhs >= rhs - tol),
        context={**context, "tolerance": tol},
    )


def not_applicable(claim: str, lhs: float, rhs: float, context: dict) -> CertificateRecord:
    return CertificateRecord(
        claim=claim,
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(lhs) - float(rhs),
        passed=None,
        context=context,
    )
