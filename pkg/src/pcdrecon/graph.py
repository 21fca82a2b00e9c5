"""Network graphs with fixed boundary-to-boundary routing.

A :class:`NetworkGraph` is a directed, positively weighted graph together
with a distinguished set of boundary vertices and one explicit route for
every ordered pair of distinct boundary vertices. Graphs are immutable;
every transformation in the package returns a new graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping

from .errors import (
    NotInternalError,
    PCDReconError,
    TreeConsistencyError,
    UnknownRouteError,
)

DEFAULT_EPS = 1e-9

Vertex = Hashable
Edge = tuple  # (tail, head)
Pair = tuple  # (source, receiver)


@dataclass(frozen=True, eq=False)
class NetworkGraph:
    """Vertices, boundary subset, weighted directed edges and routes.

    ``edges`` maps ``(tail, head)`` to a weight and ``routes`` maps an
    ordered boundary pair ``(b, b2)`` to its vertex sequence. Edges may be
    given as a mapping or as an iterable of ``(tail, head, weight)``
    triples; repeated pairs in the latter form are kept in
    ``duplicate_edges`` so that :func:`validate` can report them.
    """

    vertices: tuple
    boundary: tuple
    edges: Mapping
    routes: Mapping
    duplicate_edges: tuple = field(default=())

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex ids")
        vset = set(vertices)
        boundary = tuple(self.boundary)
        if len(set(boundary)) != len(boundary):
            raise ValueError("duplicate boundary ids")
        missing = [b for b in boundary if b not in vset]
        if missing:
            raise ValueError(f"boundary vertices not in vertex set: {missing}")

        duplicates = list(self.duplicate_edges)
        if isinstance(self.edges, Mapping):
            edges = {(u, v): float(w) for (u, v), w in self.edges.items()}
        else:
            edges = {}
            for u, v, w in self.edges:
                if (u, v) in edges:
                    duplicates.append((u, v))
                edges[(u, v)] = float(w)
        for u, v in edges:
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u!r}, {v!r}) has an unknown endpoint")

        routes = {(s, d): tuple(p) for (s, d), p in self.routes.items()}

        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "edges", MappingProxyType(edges))
        object.__setattr__(self, "routes", MappingProxyType(routes))
        object.__setattr__(self, "duplicate_edges", tuple(duplicates))

    @classmethod
    def create(cls, boundary, edges, routes, internal: Iterable = ()) -> "NetworkGraph":
        """Build a graph inferring the vertex set from the other arguments."""
        order = list(boundary)
        seen = set(order)

        def add(v):
            if v not in seen:
                seen.add(v)
                order.append(v)

        for v in internal:
            add(v)
        items = edges.items() if isinstance(edges, Mapping) else [((u, v), w) for u, v, w in edges]
        for (u, v), _ in items:
            add(u)
            add(v)
        for path in routes.values():
            for v in path:
                add(v)
        return cls(tuple(order), tuple(boundary), edges, routes)

    def __eq__(self, other):
        if not isinstance(other, NetworkGraph):
            return NotImplemented
        return (
            set(self.vertices) == set(other.vertices)
            and self.boundary == other.boundary
            and dict(self.edges) == dict(other.edges)
            and dict(self.routes) == dict(other.routes)
        )

    __hash__ = None

    def replace(self, **changes) -> "NetworkGraph":
        fields_ = {
            "vertices": self.vertices,
            "boundary": self.boundary,
            "edges": dict(self.edges),
            "routes": dict(self.routes),
        }
        fields_.update(changes)
        return NetworkGraph(**fields_)

    @cached_property
    def boundary_set(self) -> frozenset:
        return frozenset(self.boundary)

    @cached_property
    def internal(self) -> tuple:
        return tuple(v for v in self.vertices if v not in self.boundary_set)

    def is_boundary(self, v) -> bool:
        return v in self.boundary_set

    @cached_property
    def successors(self) -> Mapping:
        out = {v: [] for v in self.vertices}
        for u, v in self.edges:
            out[u].append(v)
        return MappingProxyType({k: tuple(vs) for k, vs in out.items()})

    @cached_property
    def predecessors(self) -> Mapping:
        out = {v: [] for v in self.vertices}
        for u, v in self.edges:
            out[v].append(u)
        return MappingProxyType({k: tuple(vs) for k, vs in out.items()})

    @cached_property
    def neighbors(self) -> Mapping:
        out = {v: set() for v in self.vertices}
        for u, v in self.edges:
            out[u].add(v)
            out[v].add(u)
        return MappingProxyType({k: frozenset(vs) for k, vs in out.items()})

    def route(self, b, b2) -> tuple:
        try:
            return self.routes[(b, b2)]
        except KeyError:
            raise UnknownRouteError(f"no route from {b!r} to {b2!r}", src=b, dst=b2) from None

    @cached_property
    def _prefix_sums(self) -> dict:
        return {}

    @cached_property
    def _suffix_sums(self) -> dict:
        return {}

    def cumulative(self, b, b2) -> tuple:
        """Distances from ``b`` to each vertex along the route to ``b2``."""
        cache = self._prefix_sums
        key = (b, b2)
        if key not in cache:
            path = self.route(b, b2)
            acc = [0.0]
            for u, v in zip(path, path[1:]):
                acc.append(acc[-1] + self._weight(u, v))
            cache[key] = tuple(acc)
        return cache[key]

    def remaining(self, b, b2) -> tuple:
        """Distances from each vertex along the route to its receiver ``b2``.

        Summed from the receiver end so that two routes sharing a suffix
        produce bit-identical values on it.
        """
        cache = self._suffix_sums
        key = (b, b2)
        if key not in cache:
            path = self.route(b, b2)
            acc = [0.0]
            for u, v in zip(reversed(path[:-1]), reversed(path[1:])):
                acc.append(acc[-1] + self._weight(u, v))
            cache[key] = tuple(reversed(acc))
        return cache[key]

    def _weight(self, u, v) -> float:
        try:
            return self.edges[(u, v)]
        except KeyError:
            raise PCDReconError(f"route uses missing edge ({u!r}, {v!r})") from None


@dataclass(frozen=True)
class Violation:
    code: str
    description: str
    items: tuple = ()

    def to_dict(self) -> dict:
        return {"code": self.code, "description": self.description, "items": [list(i) if isinstance(i, tuple) else i for i in self.items]}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def codes(self) -> set:
        return {v.code for v in self.violations}

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations]}


def validate(graph: NetworkGraph, *, scope: str = "full") -> ValidationReport:
    """Check every structural invariant of ``graph``.

    ``scope`` controls the tree-consistency check. ``"full"`` compares every
    pair of routes: whenever two shared vertices are visited in the same
    order by both routes, the routes must agree on the whole stretch between
    them. ``"junction"`` only checks route pairs with a common source
    (shared vertices form a common prefix) or a common receiver (common
    suffix), which is all that PCD measurement relies on.
    """
    if scope not in ("full", "junction"):
        raise ValueError(f"unknown scope {scope!r}")
    out: list[Violation] = []

    for u, v in graph.duplicate_edges:
        out.append(Violation("MULTI_EDGE", f"edge ({u}, {v}) listed more than once", ((u, v),)))
    for (u, v), w in graph.edges.items():
        if u == v:
            out.append(Violation("SELF_LOOP", f"self-loop at {u}", ((u, v),)))
        if not w > 0:
            out.append(Violation("NONPOSITIVE_WEIGHT", f"edge ({u}, {v}) has weight {w}", ((u, v),)))

    vset = set(graph.vertices)
    bset = graph.boundary_set
    well_formed = []
    for b in graph.boundary:
        for b2 in graph.boundary:
            if b == b2:
                continue
            if (b, b2) not in graph.routes:
                out.append(Violation("MISSING_ROUTE", f"no route from {b} to {b2}", ((b, b2),)))
    for (b, b2), path in graph.routes.items():
        ok = True
        if b not in bset or b2 not in bset or b == b2:
            out.append(Violation("NON_SIMPLE_ROUTE", f"route key ({b}, {b2}) is not an ordered boundary pair", ((b, b2),)))
            continue
        if len(path) < 2 or path[0] != b or path[-1] != b2:
            out.append(Violation("NON_SIMPLE_ROUTE", f"route ({b}, {b2}) does not run from {b} to {b2}", ((b, b2),)))
            ok = False
        if len(set(path)) != len(path):
            out.append(Violation("NON_SIMPLE_ROUTE", f"route ({b}, {b2}) repeats a vertex", ((b, b2),)))
            ok = False
        bad = [(p, q) for p, q in zip(path, path[1:]) if (p, q) not in graph.edges or p not in vset or q not in vset]
        if bad:
            out.append(Violation("ROUTE_NOT_ON_EDGES", f"route ({b}, {b2}) uses missing edges {bad}", ((b, b2),)))
            ok = False
        inner = [v for v in path[1:-1] if v in bset]
        if inner:
            out.append(Violation("INTERIOR_BOUNDARY_VERTEX", f"route ({b}, {b2}) passes through boundary {inner}", ((b, b2),)))
        if ok:
            well_formed.append((b, b2))

    if scope == "full":
        pairs = combinations(well_formed, 2)
    else:
        pairs = (
            (k1, k2)
            for k1, k2 in combinations(well_formed, 2)
            if k1[0] == k2[0] or k1[1] == k2[1]
        )
    for k1, k2 in pairs:
        if not _consistent_pair(graph.routes[k1], graph.routes[k2]):
            out.append(Violation(
                "TREE_CONSISTENCY_VIOLATION",
                f"routes {k1} and {k2} share vertices on diverging stretches",
                (k1, k2),
            ))
    return ValidationReport(tuple(out))


def _consistent_pair(p: tuple, q: tuple) -> bool:
    shared = set(p).intersection(q)
    if len(shared) <= 1:
        return True
    pos_p = {v: i for i, v in enumerate(p)}
    pos_q = {v: i for i, v in enumerate(q)}
    idx_p = sorted(pos_p[v] for v in shared)
    idx_q = sorted(pos_q[v] for v in shared)
    k = len(shared)
    block_p = idx_p[-1] - idx_p[0] == k - 1
    block_q = idx_q[-1] - idx_q[0] == k - 1
    if block_p and block_q:
        seg_p = p[idx_p[0]: idx_p[-1] + 1]
        seg_q = q[idx_q[0]: idx_q[-1] + 1]
        if seg_p == seg_q or seg_p == seg_q[::-1]:
            return True
    # General case: any two shared vertices visited in the same order by both
    # routes must be joined by identical stretches.
    order = sorted(shared, key=pos_p.__getitem__)
    for i, s in enumerate(order):
        for t in order[i + 1:]:
            qs, qt = pos_q[s], pos_q[t]
            if qs < qt and p[pos_p[s]: pos_p[t] + 1] != q[qs: qt + 1]:
                return False
    return True


def path_length(graph: NetworkGraph, b, b2) -> float:
    """Sum of edge weights along the route from ``b`` to ``b2``."""
    return graph.cumulative(b, b2)[-1]


def _common_prefix(p: tuple, q: tuple) -> int:
    n = 0
    for x, y in zip(p, q):
        if x != y:
            break
        n += 1
    return n


def source_junction(graph: NetworkGraph, b, b1, b2) -> tuple:
    """Last common vertex of the routes ``b -> b1`` and ``b -> b2``.

    Returns ``(vertex, distance from b)``; ``(b, 0.0)`` when the routes
    split immediately.
    """
    _require_distinct_boundary(graph, b, b1, b2)
    p, q = graph.route(b, b1), graph.route(b, b2)
    n = _common_prefix(p, q)
    if set(p).intersection(q) != set(p[:n]):
        raise TreeConsistencyError(f"routes ({b},{b1}) and ({b},{b2}) meet again after splitting")
    return p[n - 1], graph.cumulative(b, b1)[n - 1]


def receiver_junction(graph: NetworkGraph, b1, b2, b) -> tuple:
    """First common vertex of the routes ``b1 -> b`` and ``b2 -> b``.

    Returns ``(vertex, distance to b)``; ``(b, 0.0)`` when the routes only
    meet at the receiver.
    """
    _require_distinct_boundary(graph, b, b1, b2)
    p, q = graph.route(b1, b), graph.route(b2, b)
    n = _common_prefix(p[::-1], q[::-1])
    if set(p).intersection(q) != set(p[len(p) - n:]):
        raise TreeConsistencyError(f"routes ({b1},{b}) and ({b2},{b}) meet before their common tail")
    i = len(p) - n
    return p[i], graph.remaining(b1, b)[i]


def _require_distinct_boundary(graph, *vs):
    if len(set(vs)) != len(vs):
        raise ValueError(f"boundary vertices must be distinct: {vs}")
    for v in vs:
        if v not in graph.boundary_set:
            raise ValueError(f"{v!r} is not a boundary vertex")


def source_receiver_sets(graph: NetworkGraph, x) -> tuple:
    """Sources and receivers of all routes passing through internal ``x``."""
    if x in graph.boundary_set:
        raise NotInternalError(f"{x!r} is a boundary vertex", vertex=x)
    if x not in set(graph.vertices):
        raise NotInternalError(f"{x!r} is not a vertex of the graph", vertex=x)
    sources, receivers = set(), set()
    for (b, b2), path in graph.routes.items():
        if x in path:
            sources.add(b)
            receivers.add(b2)
    return frozenset(sources), frozenset(receivers)


def routes_through(graph: NetworkGraph, x) -> list:
    return [key for key, path in graph.routes.items() if x in path]


def is_symmetric_routing(graph: NetworkGraph) -> bool:
    """True when every edge has its reverse and every route mirrors its opposite."""
    for u, v in graph.edges:
        if (v, u) not in graph.edges:
            return False
    for (b, b2), path in graph.routes.items():
        back = graph.routes.get((b2, b))
        if back is None or back != path[::-1]:
            return False
    return True


@dataclass(frozen=True)
class DrawOutReport:
    """Boundary vertices moved off routes: ``mapping`` is boundary -> new internal id."""

    mapping: Mapping
    leaf_weight: float

    def to_dict(self) -> dict:
        return {"mapping": dict(self.mapping), "leaf_weight": self.leaf_weight}


def draw_out_boundary(graph: NetworkGraph, leaf_weight: float = 1.0) -> tuple:
    """Detach boundary vertices that sit in the interior of some route.

    Each such boundary vertex ``b`` hands its edges to a fresh internal
    vertex and is re-attached to it as a leaf through a pair of edges of
    weight ``leaf_weight``. Routes that started or ended at ``b`` gain one
    leaf edge at that end. Returns ``(graph, DrawOutReport)``.
    """
    if not leaf_weight > 0:
        raise ValueError("leaf_weight must be positive")
    inner = set()
    for path in graph.routes.values():
        inner.update(v for v in path[1:-1] if v in graph.boundary_set)
    if not inner:
        return graph, DrawOutReport(MappingProxyType({}), leaf_weight)

    taken = set(graph.vertices)
    mapping = {}
    for b in graph.boundary:
        if b in inner:
            new = f"{b}~"
            while new in taken:
                new += "~"
            taken.add(new)
            mapping[b] = new

    def sub(v):
        return mapping.get(v, v)

    edges = {(sub(u), sub(v)): w for (u, v), w in graph.edges.items()}
    for b, new in mapping.items():
        edges[(b, new)] = leaf_weight
        edges[(new, b)] = leaf_weight
    routes = {}
    for (b, b2), path in graph.routes.items():
        mid = [sub(v) for v in path]
        if b in mapping:
            mid = [b] + mid
        if b2 in mapping:
            mid = mid + [b2]
        routes[(b, b2)] = tuple(mid)
    vertices = tuple(graph.vertices) + tuple(mapping.values())
    out = NetworkGraph(vertices, graph.boundary, edges, routes)
    return out, DrawOutReport(MappingProxyType(mapping), leaf_weight)
