import json
from pathlib import Path
from typing import Any, Optional

import numpy as np

from src.graph.families import GraphFamily
from src.graph.weighted_graph import WeightedGraph
from src.tools.file_tools import read_json
from src.utils.errors import InputError


def graph_to_dict(graph: WeightedGraph) -> dict:
    """
    Serialize a graph to the standard document
    {"vertices": [{id, m, c, label}], "edges": [{u, v, b}]}; every unordered
    pair appears once. Family metadata, when known, rides along under "family".
    """
    ids = graph.vertex_ids
    vertices = []
    for x in range(graph.size):
        entry = {"id": ids[x], "m": float(graph.m[x]), "c": float(graph.c[x])}
        if graph.labels[x] is not None:
            entry["label"] = graph.labels[x]
        vertices.append(entry)

    coo = graph.b.tocoo()
    upper = coo.row <= coo.col
    order = np.lexsort((coo.col[upper], coo.row[upper]))
    rows, cols, vals = coo.row[upper][order], coo.col[upper][order], coo.data[upper][order]
    edges = [{"u": ids[u], "v": ids[v], "b": float(w)} for u, v, w in zip(rows, cols, vals)]

    document = {"vertices": vertices, "edges": edges}
    if graph.origin is not None:
        document["family"] = graph.origin.to_dict()
    return document


def graph_from_dict(document: Any) -> WeightedGraph:
    """Parse the standard graph document; the loader symmetrizes edges."""
    if not isinstance(document, dict) or "vertices" not in document or "edges" not in document:
        raise InputError("graph document needs 'vertices' and 'edges'", "graph_core")
    try:
        raw_vertices = document["vertices"]
        ids = [int(v.get("id", position)) for position, v in enumerate(raw_vertices)]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate vertex ids", "graph_core")
        position = {vid: i for i, vid in enumerate(ids)}
        m = [float(v.get("m", 1.0)) for v in raw_vertices]
        c = [float(v.get("c", 0.0)) for v in raw_vertices]
        labels = [v.get("label") for v in raw_vertices]
        edges = []
        for e in document["edges"]:
            if e["u"] not in position or e["v"] not in position:
                raise InputError(f"edge ({e['u']}, {e['v']}) references an unknown vertex", "graph_core")
            edges.append((position[e["u"]], position[e["v"]], float(e["b"])))
        origin = GraphFamily.from_dict(document["family"]) if document.get("family") else None
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed graph document: {exc}", "graph_core") from exc
    return WeightedGraph.from_edges(
        len(ids), edges, m=m, c=c, labels=labels, vertex_ids=ids, origin=origin
    )


def load_graph(path: str | Path) -> WeightedGraph:
    return graph_from_dict(read_json(path, "graph_core"))


def format_adjacency(graph: WeightedGraph, limit: int = 50) -> str:
    """
    Readable adjacency listing, one vertex per line: `x (m=..) -> y:b, z:b`.
    """
    lines = []
    ids = graph.vertex_ids
    for x in range(min(graph.size, limit)):
        start, stop = graph.b.indptr[x], graph.b.indptr[x + 1]
        neighbours = graph.b.indices[start:stop]
        weights = graph.b.data[start:stop]
        if neighbours.size:
            values_str = ", ".join(f"{ids[y]}:{w:g}" for y, w in zip(neighbours, weights))
        else:
            values_str = "None"
        lines.append(f"{ids[x]} (m={graph.m[x]:g}) -> {values_str}")
    if graph.size > limit:
        lines.append(f"... {graph.size - limit} more vertices")
    return "\n".join(lines)


def dump_graph(graph: WeightedGraph, path: str | Path, extra: Optional[dict] = None) -> Path:
    """Write the graph document (plus any `extra` top-level keys) as indented JSON."""
    document = graph_to_dict(graph)
    if extra:
        document.update(extra)
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return target
