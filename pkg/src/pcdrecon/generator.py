"""Seeded random network graphs for property tests and benchmarks.

Internal vertices form a random strongly connected core; every boundary
vertex hangs off one internal vertex as a leaf, so no route can pass
through another boundary vertex. Routes are unique shortest paths, which
makes them tree consistent. Tiny multiplicative jitter on the weights
removes shortest-path ties.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import asdict, dataclass, field

from .compliance import clean
from .errors import UnsatisfiableParamsError
from .graph import NetworkGraph, is_symmetric_routing, validate

JITTER = 1e-12


@dataclass(frozen=True)
class GeneratorParams:
    seed: int = 0
    boundary_count: int = 4
    internal_count: int = 6
    edge_density: float = 0.3
    weight_range: tuple = (1.0, 10.0)
    symmetric_routing: bool = False
    symmetric_weights: bool = False
    ensure_compliant: bool = False
    jitter: bool = True
    integer_weights: bool = False

    def __post_init__(self):
        object.__setattr__(self, "weight_range", tuple(float(w) for w in self.weight_range))
        lo, hi = self.weight_range
        if self.boundary_count < 2:
            raise UnsatisfiableParamsError("boundary_count must be at least 2")
        if self.internal_count < 0:
            raise UnsatisfiableParamsError("internal_count must be non-negative")
        if not 0 < self.edge_density <= 1:
            raise UnsatisfiableParamsError("edge_density must lie in (0, 1]")
        if not 0 < lo <= hi:
            raise UnsatisfiableParamsError("weight_range must satisfy 0 < min <= max")
        if self.integer_weights and int(hi) < max(1, int(-(-lo // 1))):
            raise UnsatisfiableParamsError("weight_range contains no integer")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["weight_range"] = list(self.weight_range)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorParams":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown generator parameters: {sorted(unknown)}")
        return cls(**data)


def random_network(params: GeneratorParams) -> NetworkGraph:
    """Build a valid network graph from ``params``.

    With ``ensure_compliant`` the graph is cleaned (in the routing mode it
    ends up with) and redrawn from a derived seed in the rare case the
    cleaned graph fails full validation.
    """
    for attempt in range(64):
        seed = params.seed if attempt == 0 else hash((params.seed, attempt)) & 0x7FFFFFFF
        g = _draw(params, random.Random(seed))
        if not params.ensure_compliant:
            return g
        g = make_compliant(g)
        if validate(g).valid:
            return g
    raise UnsatisfiableParamsError("could not draw a compliant graph that passes validation")


def make_compliant(g: NetworkGraph) -> NetworkGraph:
    """Clean until the routing mode is stable (cleaning can make routing symmetric)."""
    mode = is_symmetric_routing(g)
    while True:
        g, _ = clean(g, mode)
        now = is_symmetric_routing(g)
        if now == mode:
            return g
        mode = now


def _weight(rng, params) -> float:
    lo, hi = params.weight_range
    if params.integer_weights:
        w = float(rng.randint(max(1, int(-(-lo // 1))), int(hi)))
    else:
        w = rng.uniform(lo, hi)
    if params.jitter:
        w *= 1.0 + rng.random() * JITTER
    return w


def _draw(params: GeneratorParams, rng: random.Random) -> NetworkGraph:
    n, k = params.boundary_count, params.internal_count
    boundary = [f"b{i + 1}" for i in range(n)]
    internal = [f"v{i + 1}" for i in range(k)]
    sym = params.symmetric_routing

    if k == 0:
        pairs = [(a, b) for a in boundary for b in boundary if a != b]
        edges = _weigh(pairs, rng, params)
        routes = {(a, b): (a, b) for a, b in pairs}
        return NetworkGraph(tuple(boundary), tuple(boundary), edges, routes)

    links = set()
    order = internal[:]
    rng.shuffle(order)
    if sym:
        for i in range(1, k):
            x, y = order[i], order[rng.randrange(i)]
            links.update({(x, y), (y, x)})
        for i in range(k):
            for j in range(i + 1, k):
                if rng.random() < params.edge_density:
                    x, y = internal[i], internal[j]
                    links.update({(x, y), (y, x)})
    else:
        if k > 1:
            for i in range(k):
                links.add((order[i], order[(i + 1) % k]))
        for x in internal:
            for y in internal:
                if x != y and rng.random() < params.edge_density:
                    links.add((x, y))
    for b in boundary:
        x = rng.choice(internal)
        links.update({(b, x), (x, b)})

    edges = _weigh(sorted(links, key=lambda e: (_rank(e[0]), _rank(e[1]))), rng, params)
    vertices = tuple(boundary + internal)
    if sym:
        cost = {(x, y): edges[(x, y)] + edges[(y, x)] for x, y in edges}
        routes = {}
        for i, b in enumerate(boundary):
            tree = _shortest_path_tree(vertices, cost, b)
            for b2 in boundary[i + 1:]:
                path = _path_to(tree, b, b2)
                routes[(b, b2)] = path
                routes[(b2, b)] = path[::-1]
    else:
        routes = {}
        for b in boundary:
            tree = _shortest_path_tree(vertices, edges, b)
            for b2 in boundary:
                if b2 != b:
                    routes[(b, b2)] = _path_to(tree, b, b2)
    return NetworkGraph(vertices, tuple(boundary), edges, routes)


def _rank(v: str):
    return (v[0], int(v[1:]))


def _weigh(pairs, rng, params) -> dict:
    edges = {}
    for x, y in pairs:
        if params.symmetric_weights and (y, x) in edges:
            edges[(x, y)] = edges[(y, x)]
        else:
            edges[(x, y)] = _weight(rng, params)
    return edges


def _shortest_path_tree(vertices, weights, source) -> dict:
    """Dijkstra predecessor map; ties resolved by vertex order."""
    rank = {v: i for i, v in enumerate(vertices)}
    succ = {v: [] for v in vertices}
    for (x, y), w in weights.items():
        succ[x].append((y, w))
    dist = {source: 0.0}
    pred = {source: None}
    heap = [(0.0, rank[source], source)]
    done = set()
    while heap:
        d, _, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for y, w in succ[x]:
            nd = d + w
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                pred[y] = x
                heapq.heappush(heap, (nd, rank[y], y))
    return pred


def _path_to(pred, source, target) -> tuple:
    if target not in pred:
        raise UnsatisfiableParamsError(f"{target} unreachable from {source}")
    path = [target]
    while path[-1] != source:
        path.append(pred[path[-1]])
    return tuple(reversed(path))


# --- non-compliance injection -------------------------------------------------


def _fresh(graph_vertices, stem) -> str:
    taken = set(graph_vertices)
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


def inject_unused_edges(graph: NetworkGraph, rng: random.Random, count: int = 1, weight_range=(1.0, 10.0)) -> NetworkGraph:
    """Add edges between internal vertices that no route uses (paired when routing is symmetric)."""
    sym = is_symmetric_routing(graph)
    internal = list(graph.internal)
    candidates = [
        (x, y) for x in internal for y in internal
        if x != y and (x, y) not in graph.edges and (y, x) not in graph.edges
    ]
    if not candidates:
        return graph
    rng.shuffle(candidates)
    edges = dict(graph.edges)
    added = 0
    for x, y in candidates:
        if added >= count:
            break
        if (x, y) in edges:
            continue
        edges[(x, y)] = rng.uniform(*weight_range)
        if sym:
            edges[(y, x)] = rng.uniform(*weight_range)
        added += 1
    return graph.replace(edges=edges)


def inject_trivial_chain(graph: NetworkGraph, rng: random.Random, length: int = 2) -> NetworkGraph:
    """Subdivide one used edge into a chain of ``length`` degree-two vertices."""
    sym = is_symmetric_routing(graph)
    used = sorted({e for p in graph.routes.values() for e in zip(p, p[1:])}, key=str)
    if not used or length < 1:
        return graph
    u, v = rng.choice(used)
    chain = []
    for _ in range(length):
        chain.append(_fresh(list(graph.vertices) + chain, "t"))
    edges = {e: w for e, w in graph.edges.items() if e not in ((u, v), (v, u) if sym else (u, v))}

    def subdivide(a, b, inner):
        w = graph.edges[(a, b)]
        cuts = sorted(rng.uniform(0.2, 0.8) * w for _ in inner)
        stops = [a] + inner + [b]
        marks = [0.0] + cuts + [w]
        for i in range(len(stops) - 1):
            edges[(stops[i], stops[i + 1])] = marks[i + 1] - marks[i] if i + 1 < len(stops) - 1 else w - marks[i]

    subdivide(u, v, chain)
    if sym:
        subdivide(v, u, chain[::-1])
    routes = {}
    for key, p in graph.routes.items():
        out = list(p)
        for a, b, inner in ((u, v, chain), (v, u, chain[::-1])):
            if not sym and (a, b) != (u, v):
                continue
            for i in range(len(out) - 1):
                if out[i] == a and out[i + 1] == b:
                    out[i + 1:i + 1] = inner
                    break
        routes[key] = tuple(out)
    return NetworkGraph(tuple(graph.vertices) + tuple(chain), graph.boundary, edges, routes)


def inject_separable_vertex(graph: NetworkGraph, rng: random.Random, weight_range=(1.0, 10.0)) -> NetworkGraph:
    """Reroute two endpoint-disjoint boundary pairs through one fresh vertex.

    The new vertex carries two route families that never share a source or a
    receiver, so it is separable. Returns the graph unchanged when the
    boundary is too small.
    """
    sym = is_symmetric_routing(graph)
    B = list(graph.boundary)
    if len(B) < (4 if sym else 3):
        return graph
    if sym or len(B) >= 4:
        b1, b2, b3, b4 = rng.sample(B, 4)
    else:
        b1, b2, b3 = rng.sample(B, 3)
        b4 = b1
    z = _fresh(graph.vertices, "z")
    edges = dict(graph.edges)
    routes = dict(graph.routes)
    for a, b in ((b1, b2), (b3, b4)):
        edges[(a, z)] = rng.uniform(*weight_range)
        edges[(z, b)] = rng.uniform(*weight_range)
        routes[(a, b)] = (a, z, b)
        if sym:
            edges[(z, a)] = rng.uniform(*weight_range)
            edges[(b, z)] = rng.uniform(*weight_range)
            routes[(b, a)] = (b, z, a)
    return NetworkGraph(tuple(graph.vertices) + (z,), graph.boundary, edges, routes)
