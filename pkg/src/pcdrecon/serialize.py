"""JSON encodings for graphs and PCD.

Floats are written with ``repr`` precision, so a load after a dump returns
bit-identical weights. Output key order is fixed, making dumps of equal
values byte-identical.
"""
from __future__ import annotations

import json
import math
from typing import Any

from .errors import SchemaError
from .graph import NetworkGraph
from .pcd import PathCorrelationData


def graph_to_dict(graph: NetworkGraph) -> dict:
    bset = graph.boundary_set
    return {
        "vertices": [{"id": v, "boundary": v in bset} for v in graph.vertices],
        "edges": [{"from": u, "to": v, "weight": w} for (u, v), w in graph.edges.items()],
        "routes": [{"src": s, "dst": d, "path": list(p)} for (s, d), p in graph.routes.items()],
    }


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}", field=key)
    value = obj[key]
    if kind is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise SchemaError(f"{where}: field {key!r} has the wrong type", field=key)
    return float(value) if kind is float else value


def graph_from_dict(data: Any) -> NetworkGraph:
    if not isinstance(data, dict):
        raise SchemaError("graph JSON must be an object")
    vertices, boundary = [], []
    for i, item in enumerate(_require(data, "vertices", list, "graph")):
        vid = _require(item, "id", str, f"vertices[{i}]")
        if _require(item, "boundary", bool, f"vertices[{i}]"):
            boundary.append(vid)
        vertices.append(vid)
    edges = []
    for i, item in enumerate(_require(data, "edges", list, "graph")):
        where = f"edges[{i}]"
        edges.append((_require(item, "from", str, where), _require(item, "to", str, where),
                      _require(item, "weight", float, where)))
    routes = {}
    for i, item in enumerate(_require(data, "routes", list, "graph")):
        where = f"routes[{i}]"
        key = (_require(item, "src", str, where), _require(item, "dst", str, where))
        path = _require(item, "path", list, where)
        if not all(isinstance(v, str) for v in path):
            raise SchemaError(f"{where}: path entries must be strings")
        if key in routes:
            raise SchemaError(f"{where}: duplicate route {key}")
        routes[key] = tuple(path)
    try:
        return NetworkGraph(tuple(vertices), tuple(boundary), edges, routes)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def pcd_to_dict(pcd: PathCorrelationData) -> dict:
    B = pcd.boundary
    n = len(B)
    L, S, R = pcd.lengths, pcd.source, pcd.receiver
    lengths = [
        {"src": B[i], "dst": B[j], "len": float(L[i, j])}
        for i in range(n) for j in range(n) if i != j and not math.isnan(L[i, j])
    ]
    src, rcv = [], []
    for r in range(n):
        for i in range(n):
            for j in range(i + 1, n):
                if r in (i, j):
                    continue
                if not math.isnan(S[r, i, j]):
                    src.append({"root": B[r], "b1": B[i], "b2": B[j], "value": float(S[r, i, j])})
                if not math.isnan(R[r, i, j]):
                    rcv.append({"b1": B[i], "b2": B[j], "root": B[r], "value": float(R[r, i, j])})
    return {"boundary": list(B), "path_lengths": lengths, "source_pcd": src, "receiver_pcd": rcv}


def pcd_from_dict(data: Any) -> PathCorrelationData:
    if not isinstance(data, dict):
        raise SchemaError("PCD JSON must be an object")
    boundary = _require(data, "boundary", list, "pcd")
    if not all(isinstance(b, str) for b in boundary) or len(set(boundary)) != len(boundary):
        raise SchemaError("pcd: boundary must be a list of distinct strings")
    known = set(boundary)

    def ids(item, keys, where):
        out = tuple(_require(item, k, str, where) for k in keys)
        for b in out:
            if b not in known:
                raise SchemaError(f"{where}: {b!r} is not a boundary vertex")
        return out

    lengths, src, rcv = {}, {}, {}
    for i, item in enumerate(_require(data, "path_lengths", list, "pcd")):
        lengths[ids(item, ("src", "dst"), f"path_lengths[{i}]")] = _require(item, "len", float, f"path_lengths[{i}]")
    for i, item in enumerate(_require(data, "source_pcd", list, "pcd")):
        src[ids(item, ("root", "b1", "b2"), f"source_pcd[{i}]")] = _require(item, "value", float, f"source_pcd[{i}]")
    for i, item in enumerate(_require(data, "receiver_pcd", list, "pcd")):
        rcv[ids(item, ("b1", "b2", "root"), f"receiver_pcd[{i}]")] = _require(item, "value", float, f"receiver_pcd[{i}]")
    return PathCorrelationData.from_tables(boundary, lengths, src, rcv)


def dumps(obj: Any) -> str:
    """Serialize a graph, PCD, or anything with ``to_dict`` (or plain JSON data)."""
    if isinstance(obj, NetworkGraph):
        obj = graph_to_dict(obj)
    elif isinstance(obj, PathCorrelationData):
        obj = pcd_to_dict(obj)
    elif hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg} at line {exc.lineno}") from exc


def load_graph(text: str) -> NetworkGraph:
    return graph_from_dict(loads(text))


def load_pcd(text: str) -> PathCorrelationData:
    return pcd_from_dict(loads(text))
