"""Compliance predicates and the cleaning pipeline.

A graph is compliant when no edge is unused, no internal vertex is
trivial and no internal vertex is separable. :func:`clean` turns any valid
graph into the compliant graph with the same PCD by removing unused edges,
splitting separable vertices into their finest non-separable parts, and
merging trivial vertices, in that order.

``symmetric_mode`` selects the symmetric-routing forms of the predicates:
a vertex is trivial when it has at most two neighbours, and separability
is judged on a single partition of the boundary vertices whose routes
cross it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .errors import (
    MergeConflictError,
    ModeMismatchError,
    NotInternalError,
    NotOnAnyRouteError,
)
from .graph import DEFAULT_EPS, NetworkGraph, is_symmetric_routing


def unused_edges(graph: NetworkGraph) -> frozenset:
    """Edges that no route traverses."""
    used = set()
    for path in graph.routes.values():
        used.update(zip(path, path[1:]))
    return frozenset(e for e in graph.edges if e not in used)


def _check_mode(graph, symmetric_mode):
    if symmetric_mode and not is_symmetric_routing(graph):
        raise ModeMismatchError("symmetric mode requested on a graph without symmetric routing")


def trivial_vertices(graph: NetworkGraph, symmetric_mode: bool = False) -> frozenset:
    """Internal vertices invisible to the PCD.

    Directed mode: exactly one incoming and one outgoing edge. Symmetric
    mode: at most two adjacent vertices.
    """
    _check_mode(graph, symmetric_mode)
    if symmetric_mode:
        return frozenset(x for x in graph.internal if len(graph.neighbors[x]) <= 2)
    return frozenset(
        x for x in graph.internal
        if len(graph.predecessors[x]) == 1 and len(graph.successors[x]) == 1
    )


@dataclass(frozen=True)
class SeparabilityPartition:
    """Finest split of the routes through ``vertex``.

    Source class ``i`` pairs with receiver class ``i``. In symmetric mode
    both lists hold the same classes. ``route_class`` assigns each route
    through the vertex to its class.
    """

    vertex: object
    source_classes: tuple
    receiver_classes: tuple
    route_class: Mapping
    symmetric_mode: bool = False

    @property
    def pairing(self) -> tuple:
        return tuple((i, i) for i in range(len(self.source_classes)))

    @property
    def separable(self) -> bool:
        return len(self.source_classes) >= 2

    def __len__(self):
        return len(self.source_classes)


class _DisjointSets:
    def __init__(self):
        self.parent = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def separability_classes(graph: NetworkGraph, x, symmetric_mode: bool = False) -> SeparabilityPartition:
    """Equivalence classes of sources and receivers of routes through ``x``.

    Directed mode links two sources that share a receiver through ``x``
    (and dually for receivers) and closes under transitivity; equivalently,
    classes are the connected components of the bipartite source/receiver
    graph with one edge per route through ``x``. Symmetric mode links the
    two endpoints of every route through ``x``.
    """
    if x in graph.boundary_set:
        raise NotInternalError(f"{x!r} is a boundary vertex", vertex=x)
    _check_mode(graph, symmetric_mode)
    keys = [key for key, path in graph.routes.items() if x in path]
    if not keys:
        raise NotOnAnyRouteError(f"no route passes through {x!r}", vertex=x)
    return _partition(graph, x, keys, symmetric_mode)


def _partition(graph, x, keys, symmetric_mode) -> SeparabilityPartition:
    order = {b: i for i, b in enumerate(graph.boundary)}
    ds = _DisjointSets()
    for b, b2 in keys:
        if symmetric_mode:
            ds.union(b, b2)
        else:
            ds.union(("S", b), ("R", b2))
    groups: dict = {}
    for b, b2 in keys:
        root = ds.find(b if symmetric_mode else ("S", b))
        src, rcv = groups.setdefault(root, (set(), set()))
        src.add(b)
        rcv.add(b2)
    ranked = sorted(groups.items(), key=lambda kv: min(order[b] for b in kv[1][0]))
    index = {root: i for i, (root, _) in enumerate(ranked)}
    if symmetric_mode:
        classes = tuple(frozenset(s | r) for _, (s, r) in ranked)
        source_classes = receiver_classes = classes
    else:
        source_classes = tuple(frozenset(s) for _, (s, _r) in ranked)
        receiver_classes = tuple(frozenset(r) for _, (_s, r) in ranked)
    route_class = {
        (b, b2): index[ds.find(b if symmetric_mode else ("S", b))] for b, b2 in keys
    }
    return SeparabilityPartition(
        vertex=x,
        source_classes=source_classes,
        receiver_classes=receiver_classes,
        route_class=MappingProxyType(route_class),
        symmetric_mode=symmetric_mode,
    )


def separable_vertices(graph: NetworkGraph, symmetric_mode: bool = False) -> frozenset:
    _check_mode(graph, symmetric_mode)
    through = _routes_through(graph)
    return frozenset(
        x for x in graph.internal
        if through[x] and len(_partition(graph, x, through[x], symmetric_mode)) >= 2
    )


def _routes_through(graph) -> dict:
    through = {x: [] for x in graph.internal}
    for key, path in graph.routes.items():
        for v in path[1:-1]:
            if v in through:
                through[v].append(key)
    return through


def split_vertex(graph: NetworkGraph, partition: SeparabilityPartition) -> NetworkGraph:
    """Replace the vertex by one copy per class of ``partition``.

    Copies are named ``x#1, x#2, ...`` in class order. Each route through
    the vertex is rewired to the copy of its class; incident edges are
    duplicated (with their weights) onto every copy whose routes use them.
    """
    return _split(graph, partition)[0]


def _split(graph, partition) -> tuple:
    k = len(partition)
    if k < 2:
        raise ValueError("partition has a single class; nothing to split")
    x = partition.vertex
    taken = set(graph.vertices)
    copies = []
    for i in range(k):
        name = f"{x}#{i + 1}"
        while name in taken:
            name += "'"
        taken.add(name)
        copies.append(name)

    edges = {e: w for e, w in graph.edges.items() if x not in e}
    routes = dict(graph.routes)
    used = set()
    for key, c in partition.route_class.items():
        path = routes[key]
        i = path.index(x)
        copy = copies[c]
        prev, nxt = path[i - 1], path[i + 1]
        used.update({(prev, x), (x, nxt)})
        edges[(prev, copy)] = graph.edges[(prev, x)]
        edges[(copy, nxt)] = graph.edges[(x, nxt)]
        routes[key] = path[:i] + (copy,) + path[i + 1:]
    # incident edges no route uses stay with the first copy
    for (u, v), w in graph.edges.items():
        if x in (u, v) and (u, v) not in used:
            edges[(copies[0] if u == x else u, copies[0] if v == x else v)] = w
    pos = graph.vertices.index(x)
    vertices = graph.vertices[:pos] + tuple(copies) + graph.vertices[pos + 1:]
    return NetworkGraph(vertices, graph.boundary, edges, routes), tuple(copies)


def merge_trivial_vertex(
    graph: NetworkGraph, x, symmetric_mode: bool = False, eps: float = DEFAULT_EPS
) -> NetworkGraph:
    """Remove a trivial vertex, fusing its incident edges into one edge per direction."""
    if x not in trivial_vertices(graph, symmetric_mode):
        raise ValueError(f"{x!r} is not a trivial vertex")
    edges = {e: w for e, w in graph.edges.items() if x not in e}
    if symmetric_mode:
        nbrs = sorted(graph.neighbors[x], key=graph.vertices.index)
        through = [(p, q) for p in nbrs for q in nbrs if p != q]
    else:
        through = [(graph.predecessors[x][0], graph.successors[x][0])]
    for p, q in through:
        if (p, x) not in graph.edges or (x, q) not in graph.edges:
            continue
        if p == q:
            raise MergeConflictError(f"merging {x!r} would create a self-loop at {p!r}", vertex=x)
        w = graph.edges[(p, x)] + graph.edges[(x, q)]
        old = edges.get((p, q))
        if old is not None and abs(old - w) > eps:
            raise MergeConflictError(
                f"merging {x!r} would create a parallel edge ({p!r}, {q!r})", vertex=x
            )
        if old is None:
            edges[(p, q)] = w
    routes = {}
    for key, path in graph.routes.items():
        routes[key] = tuple(v for v in path if v != x) if x in path else path
    vertices = tuple(v for v in graph.vertices if v != x)
    return NetworkGraph(vertices, graph.boundary, edges, routes)


@dataclass(frozen=True)
class CleaningReport:
    removed_edges: tuple = ()
    removed_vertices: tuple = ()
    split_vertices: Mapping = field(default_factory=dict)
    merged_vertices: tuple = ()
    phases: tuple = ("unused", "split", "merge")

    @property
    def empty(self) -> bool:
        return not (self.removed_edges or self.removed_vertices or self.split_vertices or self.merged_vertices)

    def to_dict(self) -> dict:
        return {
            "phases": list(self.phases),
            "removed_edges": [list(e) for e in self.removed_edges],
            "removed_vertices": list(self.removed_vertices),
            "split_vertices": {str(k): list(v) for k, v in self.split_vertices.items()},
            "merged_vertices": list(self.merged_vertices),
        }


def remove_unused(graph: NetworkGraph) -> tuple:
    """Drop unused edges and the internal vertices no route visits."""
    unused = unused_edges(graph)
    on_route = set()
    for path in graph.routes.values():
        on_route.update(path)
    dead = tuple(x for x in graph.internal if x not in on_route)
    removed = tuple(e for e in graph.edges if e in unused)
    if not removed and not dead:
        return graph, removed, dead
    edges = {e: w for e, w in graph.edges.items() if e not in unused}
    vertices = tuple(v for v in graph.vertices if v not in set(dead))
    return NetworkGraph(vertices, graph.boundary, edges, graph.routes), removed, dead


def clean(graph: NetworkGraph, symmetric_mode: bool = False, eps: float = DEFAULT_EPS) -> tuple:
    """Produce the compliant graph with the same PCD.

    Returns ``(graph, CleaningReport)``. Trivial vertices are merged in
    vertex order, re-scanning after each merge.
    """
    _check_mode(graph, symmetric_mode)
    g, removed_edges, removed_vertices = remove_unused(graph)

    splits = {}
    through = _routes_through(g)
    for x in list(g.internal):
        if not through[x]:
            continue
        part = _partition(g, x, through[x], symmetric_mode)
        if len(part) >= 2:
            g, splits[x] = _split(g, part)

    merged = []
    while True:
        trivial = trivial_vertices(g, symmetric_mode)
        if not trivial:
            break
        x = next(v for v in g.vertices if v in trivial)
        g = merge_trivial_vertex(g, x, symmetric_mode, eps)
        merged.append(x)

    report = CleaningReport(
        removed_edges=removed_edges,
        removed_vertices=removed_vertices,
        split_vertices=MappingProxyType(splits),
        merged_vertices=tuple(merged),
    )
    return g, report


def is_compliant(graph: NetworkGraph, symmetric_mode: bool = False) -> bool:
    return not (
        unused_edges(graph)
        or trivial_vertices(graph, symmetric_mode)
        or separable_vertices(graph, symmetric_mode)
    )
