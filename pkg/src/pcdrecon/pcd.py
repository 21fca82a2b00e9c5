"""Path Correlation Data: measurement, realizability checks, logical trees.

For boundary vertices ``b, b1, b2`` the data holds the route length
``len(b, b1)``, the shared-prefix length ``src(b; b1, b2)`` of the routes
leaving ``b`` towards ``b1`` and ``b2``, and the shared-suffix length
``rcv(b1, b2; b)`` of the routes from ``b1`` and ``b2`` into ``b``.

Tables are stored densely as numpy arrays indexed by boundary position:
``lengths[i, j]``, ``source[r, i, j]`` and ``receiver[r, i, j]`` (root
first in both 3-d tables). Entries that are not defined (repeated
indices) hold NaN.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import InconsistentPCDError, InvalidGraphError
from .graph import (
    DEFAULT_EPS,
    NetworkGraph,
    ValidationReport,
    Violation,
    validate,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PathCorrelationData:
    boundary: tuple
    lengths: np.ndarray
    source: np.ndarray
    receiver: np.ndarray

    def __post_init__(self):
        boundary = tuple(self.boundary)
        n = len(boundary)
        if len(set(boundary)) != n:
            raise ValueError("duplicate boundary ids")
        lengths, source, receiver = (_frozen(a) for a in (self.lengths, self.source, self.receiver))
        if lengths.shape != (n, n) or source.shape != (n, n, n) or receiver.shape != (n, n, n):
            raise ValueError("table shapes do not match the boundary size")
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "receiver", receiver)

    @classmethod
    def from_tables(cls, boundary, lengths: Mapping, src: Mapping, rcv: Mapping) -> "PathCorrelationData":
        """Build from id-keyed mappings.

        ``lengths[(b, b2)]``, ``src[(root, b1, b2)]`` and ``rcv[(b1, b2, root)]``;
        each unordered pair only needs to be given once.
        """
        boundary = tuple(boundary)
        n = len(boundary)
        index = {b: i for i, b in enumerate(boundary)}
        L = np.full((n, n), np.nan)
        np.fill_diagonal(L, 0.0)
        S = np.full((n, n, n), np.nan)
        R = np.full((n, n, n), np.nan)
        for (b, b2), value in lengths.items():
            L[index[b], index[b2]] = value
        for (r, b1, b2), value in src.items():
            S[index[r], index[b1], index[b2]] = value
            S[index[r], index[b2], index[b1]] = value
        for (b1, b2, r), value in rcv.items():
            R[index[r], index[b1], index[b2]] = value
            R[index[r], index[b2], index[b1]] = value
        return cls(boundary, L, S, R)

    @cached_property
    def index(self) -> Mapping:
        return MappingProxyType({b: i for i, b in enumerate(self.boundary)})

    @property
    def size(self) -> int:
        return len(self.boundary)

    def length(self, b, b2) -> float:
        return float(self.lengths[self.index[b], self.index[b2]])

    def src(self, root, b1, b2) -> float:
        return float(self.source[self.index[root], self.index[b1], self.index[b2]])

    def rcv(self, b1, b2, root) -> float:
        return float(self.receiver[self.index[root], self.index[b1], self.index[b2]])


def measure(graph: NetworkGraph) -> PathCorrelationData:
    """Compute the full PCD of ``graph``.

    Raises :class:`InvalidGraphError` when the graph fails validation at the
    junction scope (the part of tree consistency the measurement needs).
    """
    report = validate(graph, scope="junction")
    if not report.valid:
        raise InvalidGraphError(report)
    boundary = graph.boundary
    n = len(boundary)
    L = np.zeros((n, n))
    S = np.full((n, n, n), np.nan)
    R = np.full((n, n, n), np.nan)
    for i, b in enumerate(boundary):
        for j, b2 in enumerate(boundary):
            if i != j:
                L[i, j] = graph.cumulative(b, b2)[-1]
    for r, b in enumerate(boundary):
        others = [k for k in range(n) if k != r]
        for i, j in combinations(others, 2):
            b1, b2 = boundary[i], boundary[j]
            p, q = graph.route(b, b1), graph.route(b, b2)
            k = _common_prefix_len(p, q)
            S[r, i, j] = S[r, j, i] = graph.cumulative(b, b1)[k - 1]
            p, q = graph.route(b1, b), graph.route(b2, b)
            k = _common_prefix_len(p[::-1], q[::-1])
            R[r, i, j] = R[r, j, i] = graph.remaining(b1, b)[len(p) - k]
    return PathCorrelationData(boundary, L, S, R)


def _common_prefix_len(p, q) -> int:
    k = 0
    for x, y in zip(p, q):
        if x != y:
            break
        k += 1
    return k


def validate_pcd(pcd: PathCorrelationData, eps: float = DEFAULT_EPS) -> ValidationReport:
    """Screen a PCD for realizability before reconstruction.

    Checks completeness, positivity of lengths, symmetry of the pairwise
    tables, the range bounds against route lengths, and the three-point
    condition per root (among any three pairwise values at one root, the
    minimum is attained at least twice).
    """
    out = []
    B = pcd.boundary
    n = pcd.size
    L, S, R = pcd.lengths, pcd.source, pcd.receiver
    for i, j in permutations(range(n), 2):
        if not np.isfinite(L[i, j]):
            out.append(Violation("MISSING_VALUE", f"no length for ({B[i]}, {B[j]})", ((B[i], B[j]),)))
        elif not L[i, j] > 0:
            out.append(Violation("NONPOSITIVE_LENGTH", f"length ({B[i]}, {B[j]}) = {L[i, j]}", ((B[i], B[j]),)))
    if out:
        return ValidationReport(tuple(out))

    for name, table in (("source", S), ("receiver", R)):
        for r in range(n):
            others = [k for k in range(n) if k != r]
            for i, j in combinations(others, 2):
                item = (B[r], B[i], B[j])
                a, b = table[r, i, j], table[r, j, i]
                if not (np.isfinite(a) and np.isfinite(b)):
                    out.append(Violation("MISSING_VALUE", f"{name} value missing at {item}", (item,)))
                    continue
                if abs(a - b) > eps:
                    out.append(Violation("SYMMETRY_VIOLATION", f"{name} value at {item} not symmetric", (item,)))
                if name == "source":
                    bound = min(L[r, i], L[r, j])
                else:
                    bound = min(L[i, r], L[j, r])
                if a < -eps or a > bound + eps:
                    out.append(Violation("RANGE_VIOLATION", f"{name} value {a} at {item} outside [0, {bound}]", (item,)))
            for i, j, k in combinations(others, 3):
                vals = sorted((table[r, i, j], table[r, i, k], table[r, j, k]))
                if np.all(np.isfinite(vals)) and vals[1] - vals[0] > eps:
                    item = (B[r], B[i], B[j], B[k])
                    out.append(Violation(
                        "THREE_POINT_VIOLATION",
                        f"{name} values {vals} at root {B[r]} over {item[1:]} attain their minimum once",
                        (item,),
                    ))
    return ValidationReport(tuple(out))


@dataclass(frozen=True)
class LogicalTree:
    """Rooted weighted tree seen from one source (or into one receiver).

    ``depth`` maps every node (root, junctions, leaves) to its distance from
    the root for source trees, or to the root for receiver trees.
    ``parent`` maps every non-root node to its parent.
    """

    root: object
    kind: str
    depth: Mapping
    parent: Mapping
    leaves: tuple

    @cached_property
    def children(self) -> Mapping:
        out = {v: [] for v in self.depth}
        for child, par in self.parent.items():
            out[par].append(child)
        return MappingProxyType({k: tuple(v) for k, v in out.items()})

    @property
    def junctions(self) -> tuple:
        leaves = set(self.leaves)
        return tuple(v for v in self.depth if v != self.root and v not in leaves)

    def edges(self) -> list:
        return [(par, child, self.depth[child] - self.depth[par]) for child, par in self.parent.items()]

    def ancestors(self, v) -> list:
        out = [v]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        return out

    def junction_depth(self, leaf1, leaf2) -> float:
        """Depth of the deepest common ancestor of two leaves."""
        up = set(self.ancestors(leaf1))
        for v in self.ancestors(leaf2):
            if v in up:
                return self.depth[v]
        raise AssertionError("tree is disconnected")

    def to_dict(self) -> dict:
        leaves = set(self.leaves)
        return {
            "root": self.root,
            "kind": self.kind,
            "nodes": [
                {"id": v, "depth": d, "leaf": v in leaves}
                for v, d in self.depth.items() if v != self.root
            ],
            "edges": [{"from": p, "to": c, "weight": w} for p, c, w in self.edges()],
        }


def build_source_tree(pcd: PathCorrelationData, b, eps: float = DEFAULT_EPS) -> LogicalTree:
    """Logical tree of the routes leaving ``b``, grown by agglomerative merging."""
    r = pcd.index[b]
    n = pcd.size
    leaves = [i for i in range(n) if i != r]
    depths = {i: pcd.lengths[r, i] for i in leaves}
    return _agglomerate(pcd, b, "source", pcd.source[r], depths, eps)


def build_receiver_tree(pcd: PathCorrelationData, b, eps: float = DEFAULT_EPS) -> LogicalTree:
    """Logical tree of the routes into ``b``; depths are distances to ``b``."""
    r = pcd.index[b]
    n = pcd.size
    leaves = [i for i in range(n) if i != r]
    depths = {i: pcd.lengths[i, r] for i in leaves}
    return _agglomerate(pcd, b, "receiver", pcd.receiver[r], depths, eps)


def _agglomerate(pcd, root, kind, table, leaf_depths, eps) -> LogicalTree:
    B = pcd.boundary
    taken = set(B)
    counter = 0

    def fresh():
        nonlocal counter
        while True:
            counter += 1
            name = f"*{counter}"
            if name not in taken:
                taken.add(name)
                return name

    depth = {root: 0.0}
    parent = {}
    for i, d in leaf_depths.items():
        depth[B[i]] = float(d)
    # cluster: (members as boundary indices, top node id)
    clusters = [([i], B[i]) for i in sorted(leaf_depths, key=lambda i: B[i])]

    while len(clusters) > 1:
        best = None
        for x, y in combinations(range(len(clusters)), 2):
            value = table[clusters[x][0][0], clusters[y][0][0]]
            if not np.isfinite(value):
                raise InconsistentPCDError(f"missing {kind} value at root {root}")
            key = (-value, sorted(B[m] for m in clusters[x][0])[0], sorted(B[m] for m in clusters[y][0])[0])
            if best is None or value > best[0] + eps or (abs(value - best[0]) <= eps and key[1:] < best[1][1:]):
                best = (value, key, x, y)
        value, _, x, y = best
        (mx, top_x), (my, top_y) = clusters[x], clusters[y]
        for i in mx:
            for j in my:
                if abs(table[i, j] - value) > eps:
                    raise InconsistentPCDError(
                        f"{kind} tree at {root}: values for ({B[i]}, {B[j]}) disagree with merge depth {value}",
                        root=root,
                    )
        if value <= eps:
            break
        node = None
        for top in (top_x, top_y):
            if top not in pcd.index and abs(depth[top] - value) <= eps:
                node = top
                break
        if node is None:
            node = fresh()
            depth[node] = float(value)
        for top in (top_x, top_y):
            if top == node:
                continue
            if top not in pcd.index and abs(depth[top] - value) <= eps:
                for child in [c for c, p in parent.items() if p == top]:
                    parent[child] = node
                del depth[top]
            else:
                if depth[top] <= value + eps:
                    raise InconsistentPCDError(
                        f"{kind} tree at {root}: node {top} at depth {depth[top]} not below junction depth {value}",
                        root=root,
                    )
                parent[top] = node
        merged = (mx + my, node)
        clusters = [c for k, c in enumerate(clusters) if k not in (x, y)] + [merged]
    for _, top in clusters:
        parent[top] = root
    return LogicalTree(
        root=root,
        kind=kind,
        depth=MappingProxyType(depth),
        parent=MappingProxyType(parent),
        leaves=tuple(B[i] for i in sorted(leaf_depths)),
    )
