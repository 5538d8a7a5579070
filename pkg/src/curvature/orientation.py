from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.graph.weighted_graph import WeightedGraph
from src.utils.errors import InputError, OrientationError


def reverse_positions(graph: WeightedGraph) -> np.ndarray:
    """For each ordered edge (x, y) the position of (y, x) in `graph.edges`."""
    src, dst, _ = graph.edges
    keys = src * graph.size + dst
    return np.searchsorted(keys, dst * graph.size + src)


@dataclass(frozen=True, eq=False)
class Orientation:
    """
    Signs sigma on the ordered edges (aligned with `graph.edges`):
    +1 for pairs in E+, -1 for E-, 0 for unoriented edges.
    """

    graph: WeightedGraph
    sign: np.ndarray
    origin: str = ""

    def __post_init__(self):
        sign = np.asarray(self.sign, dtype=np.int8).copy()
        src, _, _ = self.graph.edges
        if sign.shape != src.shape:
            raise OrientationError(f"expected {src.size} edge signs, got {sign.size}", "curvature")
        if np.any(np.abs(sign) > 1) or np.any(sign != -sign[reverse_positions(self.graph)]):
            raise OrientationError("signs must be antisymmetric values in {-1, 0, 1}", "curvature")
        sign.setflags(write=False)
        object.__setattr__(self, "sign", sign)

    @property
    def positive_pairs(self) -> np.ndarray:
        src, dst, _ = self.graph.edges
        keep = self.sign > 0
        return np.column_stack([src[keep], dst[keep]])

    @property
    def oriented_count(self) -> int:
        return int(np.count_nonzero(self.sign > 0))

    def reverse(self) -> "Orientation":
        return Orientation(self.graph, -self.sign, origin=f"reverse of {self.origin}".strip())

    def to_dict(self) -> dict:
        ids = self.graph.vertex_ids
        return {
            "origin": self.origin,
            "E_plus": [{"u": ids[x], "v": ids[y]} for x, y in self.positive_pairs],
        }

    @classmethod
    def from_dict(cls, graph: WeightedGraph, document: dict) -> "Orientation":
        position = {vid: i for i, vid in enumerate(graph.vertex_ids)}
        src, dst, _ = graph.edges
        keys = src * graph.size + dst
        sign = np.zeros(src.size, dtype=np.int8)
        try:
            for pair in document["E_plus"]:
                x, y = position[pair["u"]], position[pair["v"]]
                forward = int(np.searchsorted(keys, x * graph.size + y))
                if forward >= keys.size or keys[forward] != x * graph.size + y:
                    raise OrientationError(f"({pair['u']}, {pair['v']}) is not an edge", "curvature")
                sign[forward] = 1
                sign[int(np.searchsorted(keys, y * graph.size + x))] = -1
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed orientation document: {exc}", "curvature") from exc
        return cls(graph, sign, origin=document.get("origin", "file"))


def sphere_orientation(graph: WeightedGraph, root: int = 0) -> Orientation:
    """Edges from S_{r-1} to S_r point outward (+1); same-sphere edges stay unoriented."""
    hops = graph.hop_distances(root)
    unreachable = np.flatnonzero(~np.isfinite(hops))
    if unreachable.size:
        raise OrientationError(
            f"vertex {graph.vertex_ids[unreachable[0]]} is not reachable from root {graph.vertex_ids[root]}",
            "curvature",
        )
    src, dst, _ = graph.edges
    step = hops[dst] - hops[src]
    sign = np.where(step > 0, 1, np.where(step < 0, -1, 0))
    return Orientation(graph, sign, origin=f"sphere orientation around {graph.vertex_ids[root]}")


def random_orientation(graph: WeightedGraph, rng: np.random.Generator, p: float = 0.8) -> Orientation:
    """Orient each edge with probability p, in a uniformly random direction."""
    src, dst, _ = graph.edges
    forward = src < dst
    count = int(np.count_nonzero(forward))
    chosen = np.where(rng.random(count) < p, rng.choice([-1, 1], size=count), 0)
    sign = np.zeros(src.size, dtype=np.int8)
    sign[forward] = chosen
    partner = reverse_positions(graph)
    sign[partner[forward]] = -chosen
    return Orientation(graph, sign, origin=f"random orientation p={p:g}")


def empty_orientation(graph: WeightedGraph, origin: Optional[str] = None) -> Orientation:
    src, _, _ = graph.edges
    return Orientation(graph, np.zeros(src.size, dtype=np.int8), origin=origin or "empty orientation")
