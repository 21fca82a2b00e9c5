"""Rebuild a network graph from its Path Correlation Data.

Every ordered boundary pair starts with the two-entry path
``[(b1, 0), (b2, len)]``. For each ordered triple the source junction and
the receiver junction are placed into the relevant paths, and every new
label is propagated to all other paths that must contain the same vertex.
The graph is then read off from consecutive path entries.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .errors import InconsistentPCDError, WeightConflictError
from .graph import DEFAULT_EPS, NetworkGraph
from .pcd import PathCorrelationData, validate_pcd

from . import _propagate as _py_kernel

if os.environ.get("PCDRECON_PURE_PYTHON"):
    _ext_kernel = None
else:
    try:
        from . import _propagate_ext as _ext_kernel
    except ImportError:  # extension not built
        _ext_kernel = None

BACKEND = "cython" if _ext_kernel is not None else "python"
_KERNELS = {"python": _py_kernel.propagate}
if _ext_kernel is not None:
    _KERNELS["cython"] = _ext_kernel.propagate


def available_backends() -> tuple:
    return tuple(_KERNELS)


@dataclass(frozen=True)
class Label:
    id: str
    origin: tuple  # (b1, b2, b3, "source" | "receiver")


@dataclass(frozen=True)
class ReconstructedPath:
    src: object
    dst: object
    entries: tuple  # ((vertex id, cumulative distance), ...)

    @property
    def vertices(self) -> tuple:
        return tuple(v for v, _ in self.entries)


@dataclass(frozen=True)
class ReconstructionStats:
    labels_created: int
    labels_discarded: int
    insertions: int
    toplevel_calls: int
    update_calls: int

    def to_dict(self) -> dict:
        return {
            "labels_created": self.labels_created,
            "insertions": self.insertions,
            "toplevel_calls": self.toplevel_calls,
        }


@dataclass(frozen=True)
class ReconstructionResult:
    graph: NetworkGraph
    paths: Mapping
    labels: Mapping
    stats: ReconstructionStats


def reconstruct(
    pcd: PathCorrelationData,
    symmetric_routing: bool = False,
    *,
    eps: float = DEFAULT_EPS,
    backend: str | None = None,
    check: bool = True,
) -> ReconstructionResult:
    """General reconstruction; ``symmetric_routing`` lets source and
    receiver junctions of one triple share a label."""
    return _run(pcd, symmetric_routing, False, eps, backend, check)


def reconstruct_symmetric(
    pcd: PathCorrelationData,
    *,
    eps: float = DEFAULT_EPS,
    backend: str | None = None,
    check: bool = True,
) -> ReconstructionResult:
    """Specialized variant for symmetric routing.

    One propagation per ordered triple; each insertion into R(u, v) is
    mirrored into R(v, u), and propagation follows source junctions from
    both ends.
    """
    return _run(pcd, True, True, eps, backend, check)


def _run(pcd, symmetric_routing, specialized, eps, backend, check) -> ReconstructionResult:
    if check:
        report = validate_pcd(pcd, eps)
        if not report.valid:
            raise InconsistentPCDError(
                "PCD failed validation: " + ", ".join(sorted(report.codes())),
                violations=[v.description for v in report.violations[:10]],
            )
    kernel = _KERNELS[backend or BACKEND]
    raw_paths, origins, stats = kernel(
        pcd.lengths, pcd.source, pcd.receiver, bool(symmetric_routing), bool(specialized), float(eps)
    )
    B = pcd.boundary
    n = len(B)
    names = _label_names(B, len(origins))
    sides = ("source", "receiver")
    labels = {
        names[k]: Label(names[k], (B[o[0]], B[o[1]], B[o[2]], sides[o[3]]))
        for k, o in enumerate(origins)
    }

    def name(node):
        return B[node] if node < n else names[node - n]

    paths = {}
    for u in range(n):
        for v in range(n):
            if u != v:
                entries = tuple((name(node), d) for node, d in raw_paths[u * n + v])
                paths[(B[u], B[v])] = ReconstructedPath(B[u], B[v], entries)
    graph = read_off_graph(paths.values(), boundary=B, eps=eps)
    return ReconstructionResult(
        graph=graph,
        paths=MappingProxyType(paths),
        labels=MappingProxyType(labels),
        stats=ReconstructionStats(**stats),
    )


def _label_names(boundary, count) -> list:
    taken = set(map(str, boundary))
    prefix = "a"
    while any(f"{prefix}{k + 1}" in taken for k in range(count)):
        prefix = "_" + prefix
    return [f"{prefix}{k + 1}" for k in range(count)]


def read_off_graph(paths, boundary=None, eps: float = DEFAULT_EPS) -> NetworkGraph:
    """Assemble a graph from complete reconstructed paths.

    Consecutive entries become edges weighted by the distance difference;
    an edge emitted by several paths must get the same weight within
    ``eps``.
    """
    paths = list(paths)
    if boundary is None:
        boundary = []
        for p in paths:
            for b in (p.src, p.dst):
                if b not in boundary:
                    boundary.append(b)
    bset = set(boundary)
    vertices = list(boundary)
    seen = set(vertices)
    edges: dict = {}
    routes = {}
    for p in paths:
        entries = p.entries
        if len(entries) < 2 or entries[0][0] != p.src or entries[-1][0] != p.dst or entries[0][1] != 0.0:
            raise InconsistentPCDError(f"reconstructed path ({p.src}, {p.dst}) is malformed", path=(p.src, p.dst))
        ids = [v for v, _ in entries]
        if len(set(ids)) != len(ids) or any(v in bset for v in ids[1:-1]):
            raise InconsistentPCDError(
                f"reconstructed path ({p.src}, {p.dst}) repeats a vertex", path=(p.src, p.dst)
            )
        for (x, dx), (y, dy) in zip(entries, entries[1:]):
            w = dy - dx
            if not w > eps:
                raise InconsistentPCDError(
                    f"non-increasing distances on path ({p.src}, {p.dst})", path=(p.src, p.dst)
                )
            old = edges.get((x, y))
            if old is not None and abs(old - w) > eps:
                raise WeightConflictError(
                    f"edge ({x}, {y}) read off with weights {old} and {w}", edge=(x, y)
                )
            if old is None:
                edges[(x, y)] = w
        for v in ids:
            if v not in seen:
                seen.add(v)
                vertices.append(v)
        routes[(p.src, p.dst)] = tuple(ids)
    return NetworkGraph(tuple(vertices), tuple(boundary), edges, routes)
