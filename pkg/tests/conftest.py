import os
import random
from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from pcdrecon import GeneratorParams, NetworkGraph, random_network, source_receiver_sets
from pcdrecon.serialize import load_graph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"


def triangle_graph(weight=1.0) -> NetworkGraph:
    """b_i -> x_i -> x_j -> b_j for every ordered pair; all edges present both ways."""
    B = ["b1", "b2", "b3"]
    X = ["x1", "x2", "x3"]
    edges = {}
    for i in range(3):
        edges[(B[i], X[i])] = weight
        edges[(X[i], B[i])] = weight
        for j in range(3):
            if i != j:
                edges[(X[i], X[j])] = weight
    routes = {(B[i], B[j]): (B[i], X[i], X[j], B[j]) for i in range(3) for j in range(3) if i != j}
    return NetworkGraph.create(B, edges, routes)


def diverge_remeet_graph() -> NetworkGraph:
    """Two routes from b split after x and meet again at z."""
    edges = {
        ("b", "x"): 1.0, ("x", "y"): 1.0, ("y", "z"): 1.0, ("z", "b1"): 1.0,
        ("x", "w"): 2.0, ("w", "z"): 2.0, ("z", "b2"): 1.0,
        ("b1", "b"): 5.0, ("b2", "b"): 5.0, ("b1", "b2"): 5.0, ("b2", "b1"): 5.0,
    }
    routes = {
        ("b", "b1"): ("b", "x", "y", "z", "b1"),
        ("b", "b2"): ("b", "x", "w", "z", "b2"),
        ("b1", "b"): ("b1", "b"), ("b2", "b"): ("b2", "b"),
        ("b1", "b2"): ("b1", "b2"), ("b2", "b1"): ("b2", "b1"),
    }
    return NetworkGraph.create(["b", "b1", "b2"], edges, routes)


def unused_shortcut_graph(with_shortcut=True) -> NetworkGraph:
    """A two-hop-chain between b1 and b2 via u, x, w; optionally a shortcut u<->w no route takes."""
    edges = {
        ("b1", "u"): 1.0, ("u", "x"): 2.0, ("x", "w"): 2.0, ("w", "b2"): 1.0,
        ("b2", "w"): 1.0, ("w", "x"): 2.0, ("x", "u"): 2.0, ("u", "b1"): 1.0,
        ("x", "b3"): 3.0, ("b3", "x"): 3.0,
    }
    if with_shortcut:
        edges[("u", "w")] = 1.5
        edges[("w", "u")] = 1.5
    paths = {
        ("b1", "b2"): ("b1", "u", "x", "w", "b2"),
        ("b1", "b3"): ("b1", "u", "x", "b3"),
        ("b2", "b3"): ("b2", "w", "x", "b3"),
    }
    routes = dict(paths)
    routes.update({(d, s): p[::-1] for (s, d), p in paths.items()})
    return NetworkGraph.create(["b1", "b2", "b3"], edges, routes)


def degree_two_graph(wux=2.0, wxw=3.0) -> NetworkGraph:
    """Boundary u, w; u reaches w through internal x, w reaches u directly."""
    edges = {("u", "x"): wux, ("x", "w"): wxw, ("w", "u"): 4.0}
    routes = {("u", "w"): ("u", "x", "w"), ("w", "u"): ("w", "u")}
    return NetworkGraph.create(["u", "w"], edges, routes)


def square_graph() -> NetworkGraph:
    """Four boundary vertices on a cycle; opposite corners route through a neighbour."""
    B = ["b1", "b2", "b3", "b4"]
    edges = {}
    for i in range(4):
        a, b = B[i], B[(i + 1) % 4]
        edges[(a, b)] = 1.0
        edges[(b, a)] = 1.0
    routes = {}
    for i in range(4):
        a, b = B[i], B[(i + 1) % 4]
        routes[(a, b)] = (a, b)
        routes[(b, a)] = (b, a)
    routes[("b1", "b3")] = ("b1", "b2", "b3")
    routes[("b3", "b1")] = ("b3", "b2", "b1")
    routes[("b2", "b4")] = ("b2", "b3", "b4")
    routes[("b4", "b2")] = ("b4", "b3", "b2")
    return NetworkGraph.create(B, edges, routes)


def hub_separable_graph() -> NetworkGraph:
    """Hub h joins b1..b6 both ways; x carries b1->{b3,b4} and b2->{b5,b6}."""
    B = [f"b{i}" for i in range(1, 7)]
    edges = {}
    for i, b in enumerate(B):
        edges[(b, "h")] = 1.0 + i / 10
        edges[("h", b)] = 1.5 + i / 10
    edges[("b1", "x")] = 2.0
    edges[("b2", "x")] = 2.5
    for i, b in enumerate(B[2:]):
        edges[("x", b)] = 3.0 + i / 4
    through = {("b1", "b3"), ("b1", "b4"), ("b2", "b5"), ("b2", "b6")}
    routes = {}
    for a in B:
        for b in B:
            if a != b:
                routes[(a, b)] = (a, "x", b) if (a, b) in through else (a, "h", b)
    return NetworkGraph.create(B, edges, routes)


def cleaning_example_graph() -> NetworkGraph:
    """Needs every cleaning step: an unused edge, a separable x, then trivial y and one copy of x."""
    edges = {
        ("b1", "x"): 1.0, ("b3", "x"): 2.0, ("x", "b2"): 1.5,
        ("b2", "y"): 0.5, ("y", "x"): 0.75, ("x", "w"): 1.25,
        ("w", "b1"): 1.0, ("w", "b3"): 2.0, ("b1", "w"): 1.0, ("b3", "w"): 2.0,
        ("b2", "b3"): 9.0,
    }
    routes = {
        ("b1", "b2"): ("b1", "x", "b2"),
        ("b3", "b2"): ("b3", "x", "b2"),
        ("b2", "b1"): ("b2", "y", "x", "w", "b1"),
        ("b2", "b3"): ("b2", "y", "x", "w", "b3"),
        ("b1", "b3"): ("b1", "w", "b3"),
        ("b3", "b1"): ("b3", "w", "b1"),
    }
    return NetworkGraph.create(["b1", "b2", "b3"], edges, routes)


def separable_u_graph() -> NetworkGraph:
    return load_graph((DATA / "separable_u.json").read_text())


def mixed_params(rng: random.Random, seed: int, **over) -> GeneratorParams:
    kw = dict(
        seed=seed,
        boundary_count=rng.randint(3, 8),
        internal_count=rng.randint(0, 20),
        edge_density=rng.uniform(0.05, 0.6),
        symmetric_routing=rng.random() < 0.4,
        symmetric_weights=rng.random() < 0.3,
    )
    kw.update(over)
    return GeneratorParams(**kw)


def brute_force_bipartitions(g, x, symmetric):
    """All valid two-way splits of the routes through x, by exhaustive search."""
    through = {k for k, p in g.routes.items() if x in p}
    S, R = source_receiver_sets(g, x)
    found = []

    def subsets(items):
        items = sorted(items)
        for r in range(1, len(items)):
            for c in combinations(items, r):
                yield frozenset(c)

    if symmetric:
        ends = S | R
        for part in subsets(ends):
            rest = ends - part
            if all((a, b) not in through for a in part for b in rest):
                found.append((part, rest))
        return found
    for S1 in subsets(S):
        S2 = S - S1
        for R1 in subsets(R):
            R2 = R - R1
            if all((a, b) not in through for a in S1 for b in R2) and all((a, b) not in through for a in S2 for b in R1):
                found.append((S1, R1))
    return found


# lines reported by the acceptance suite at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def triangle():
    return triangle_graph()


@pytest.fixture
def hub():
    return hub_separable_graph()


@pytest.fixture
def cleaning_example():
    return cleaning_example_graph()


@pytest.fixture
def separable_u():
    return separable_u_graph()


@pytest.fixture
def small_random():
    return random_network(GeneratorParams(seed=3, boundary_count=5, internal_count=8, edge_density=0.3))
