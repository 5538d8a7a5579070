from dataclasses import dataclass, field
from typing import List

import numpy as np

from src.graph.weighted_graph import WeightedGraph

# Relative threshold under which b(x,y) and b(y,x) count as equal.
SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class Violation:
    kind: str           # asymmetry | diagonal | measure | isolated | negative_weight | infinite_weight | negative_potential
    vertices: tuple
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "detail": self.detail}


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def at(self, kind: str) -> list:
        return [v.vertices for v in self.violations if v.kind == kind]

    def to_dict(self) -> dict:
        return {"valid": self.is_valid, "violations": [v.to_dict() for v in self.violations]}


def validate(graph: WeightedGraph) -> ValidationReport:
    """
    Check the standing assumptions on (X, b, m, c) and report every violation
    with the offending vertex ids. Never raises.
    """
    report = ValidationReport()
    ids = graph.vertex_ids
    b = graph.b

    # ── asymmetry, reported once per unordered pair
    diff = (b - b.T).tocoo()
    scale = max(1.0, float(np.max(np.abs(b.data))) if b.nnz else 1.0)
    bad = (np.abs(diff.data) > SYMMETRY_RTOL * scale) & (diff.row < diff.col)
    for x, y in zip(diff.row[bad], diff.col[bad]):
        report.violations.append(Violation(
            "asymmetry", (ids[x], ids[y]),
            f"b({ids[x]},{ids[y]})={b[x, y]:g} but b({ids[y]},{ids[x]})={b[y, x]:g}",
        ))

    diagonal = b.diagonal()
    for x in np.flatnonzero(diagonal != 0):
        report.violations.append(Violation("diagonal", (ids[x],), f"b({ids[x]},{ids[x]})={diagonal[x]:g}"))

    coo = b.tocoo()
    negative = (coo.data < 0) & (coo.row <= coo.col)
    for x, y, w in zip(coo.row[negative], coo.col[negative], coo.data[negative]):
        report.violations.append(Violation("negative_weight", (ids[x], ids[y]), f"b={w:g}"))

    for x, y in zip(coo.row[~np.isfinite(coo.data)], coo.col[~np.isfinite(coo.data)]):
        report.violations.append(Violation("infinite_weight", (ids[x], ids[y]), "row sum n(x) is not finite"))

    for x in np.flatnonzero(~(graph.m > 0)):
        report.violations.append(Violation("measure", (ids[x],), f"m={graph.m[x]:g} is not positive"))

    for x in np.flatnonzero(graph.c < 0):
        report.violations.append(Violation("negative_potential", (ids[x],), f"c={graph.c[x]:g}"))

    # ── no isolated vertices: at least one y != x with b(x,y) > 0
    off_diagonal = coo.row != coo.col
    has_neighbor = np.zeros(graph.size, dtype=bool)
    has_neighbor[coo.row[off_diagonal & (coo.data > 0)]] = True
    for x in np.flatnonzero(~has_neighbor):
        report.violations.append(Violation("isolated", (ids[x],), "vertex has no neighbor"))

    return report
