import random

import pytest
from hypothesis import given, strategies as st

from conftest import diverge_remeet_graph, mixed_params, square_graph, triangle_graph
from pcdrecon import (
    NetworkGraph,
    draw_out_boundary,
    is_symmetric_routing,
    path_length,
    random_network,
    receiver_junction,
    source_junction,
    source_receiver_sets,
    validate,
)
from pcdrecon.errors import NotInternalError, UnknownRouteError


def test_minimal_route_is_valid():
    g = NetworkGraph.create(["b", "c"], {("b", "x"): 1, ("x", "c"): 2, ("c", "b"): 3},
                            {("b", "c"): ("b", "x", "c"), ("c", "b"): ("c", "b")})
    assert validate(g).valid


def test_diverge_and_remeet_flags_tree_consistency():
    report = validate(diverge_remeet_graph())
    assert "TREE_CONSISTENCY_VIOLATION" in report.codes()


@pytest.mark.parametrize(
    "edges, routes, code",
    [
        ([("b", "c", 1.0), ("b", "c", 2.0), ("c", "b", 1.0)], {("b", "c"): ("b", "c"), ("c", "b"): ("c", "b")}, "MULTI_EDGE"),
        ([("b", "b", 1.0), ("b", "c", 1.0), ("c", "b", 1.0)], {("b", "c"): ("b", "c"), ("c", "b"): ("c", "b")}, "SELF_LOOP"),
        ([("b", "c", 0.0), ("c", "b", 1.0)], {("b", "c"): ("b", "c"), ("c", "b"): ("c", "b")}, "NONPOSITIVE_WEIGHT"),
        ([("b", "c", 1.0), ("c", "b", 1.0)], {("b", "c"): ("b", "c")}, "MISSING_ROUTE"),
        ([("b", "c", 1.0), ("c", "b", 1.0)], {("b", "c"): ("b", "c", "b", "c"), ("c", "b"): ("c", "b")}, "NON_SIMPLE_ROUTE"),
        ([("b", "c", 1.0)], {("b", "c"): ("b", "c"), ("c", "b"): ("c", "b")}, "ROUTE_NOT_ON_EDGES"),
    ],
)
def test_violation_codes(edges, routes, code):
    g = NetworkGraph(("b", "c"), ("b", "c"), edges, routes)
    assert code in validate(g).codes()


def test_interior_boundary_vertex():
    assert "INTERIOR_BOUNDARY_VERTEX" in validate(square_graph()).codes()


def test_path_length_triangle(triangle):
    assert path_length(triangle, "b1", "b2") == 3.0


def test_path_length_single_edge():
    g = NetworkGraph.create(["b", "c"], {("b", "c"): 2.5, ("c", "b"): 1.0},
                            {("b", "c"): ("b", "c"), ("c", "b"): ("c", "b")})
    assert path_length(g, "b", "c") == 2.5


def test_unknown_route(triangle):
    with pytest.raises(UnknownRouteError):
        path_length(triangle, "b1", "x1")


def test_junctions_triangle(triangle):
    assert source_junction(triangle, "b1", "b2", "b3") == ("x1", 1.0)
    assert receiver_junction(triangle, "b2", "b3", "b1") == ("x1", 1.0)


def test_junction_at_endpoint():
    g = NetworkGraph.create(
        ["b", "c", "d"],
        {(a, z): 1.0 for a in "bcd" for z in "bcd" if a != z},
        {(a, z): (a, z) for a in "bcd" for z in "bcd" if a != z},
    )
    assert source_junction(g, "b", "c", "d") == ("b", 0.0)
    assert receiver_junction(g, "c", "d", "b") == ("b", 0.0)


def test_source_receiver_sets(hub):
    assert source_receiver_sets(hub, "x") == ({"b1", "b2"}, {"b3", "b4", "b5", "b6"})
    with pytest.raises(NotInternalError):
        source_receiver_sets(hub, "b1")


def test_source_receiver_sets_off_route(triangle):
    g = NetworkGraph.create(triangle.boundary, dict(triangle.edges), dict(triangle.routes), internal=["lonely"])
    assert source_receiver_sets(g, "lonely") == (frozenset(), frozenset())


def test_symmetric_routing(triangle, hub):
    assert is_symmetric_routing(triangle)
    g = NetworkGraph.create(["b", "c"], {("b", "x"): 1, ("x", "c"): 1, ("c", "y"): 1, ("y", "b"): 1,
                                        ("x", "b"): 1, ("c", "x"): 1, ("b", "y"): 1, ("y", "c"): 1},
                            {("b", "c"): ("b", "x", "c"), ("c", "b"): ("c", "y", "b")})
    assert not is_symmetric_routing(g)


def test_draw_out_square():
    g, report = draw_out_boundary(square_graph())
    assert set(report.mapping) == {"b2", "b3"}
    assert validate(g).valid
    assert g.route("b1", "b3") == ("b1", "b2~", "b3~", "b3")
    for b in g.boundary:
        assert len(g.neighbors[b]) == 1 or b in ("b1", "b4")


def test_draw_out_fixed_point(triangle):
    g, report = draw_out_boundary(triangle)
    assert g is triangle and not report.mapping


@given(st.integers(0, 10_000))
def test_draw_out_repairs_interior_boundary(seed):
    rng = random.Random(seed)
    g = random_network(mixed_params(rng, seed, internal_count=rng.randint(1, 8)))
    # promote one internal vertex on some route to the boundary
    inner = [v for p in g.routes.values() for v in p[1:-1]]
    if not inner:
        return
    x = rng.choice(sorted(set(inner)))
    promoted = NetworkGraph(g.vertices, g.boundary + (x,), dict(g.edges), dict(g.routes))
    assert "INTERIOR_BOUNDARY_VERTEX" in validate(promoted).codes()
    out, _ = draw_out_boundary(promoted)
    assert "INTERIOR_BOUNDARY_VERTEX" not in validate(out).codes()


def _lcp(p, q):
    n = 0
    while n < min(len(p), len(q)) and p[n] == q[n]:
        n += 1
    return n


@given(st.integers(0, 10_000))
def test_junction_and_length_oracles(seed):
    rng = random.Random(seed)
    g = random_network(mixed_params(rng, seed))
    B = g.boundary
    for b in B:
        for b2 in B:
            if b != b2:
                p = g.routes[(b, b2)]
                assert abs(path_length(g, b, b2) - sum(g.edges[e] for e in zip(p, p[1:]))) < 1e-9
    b, b1, b2 = rng.sample(B, 3)
    p, q = g.routes[(b, b1)], g.routes[(b, b2)]
    n = _lcp(p, q)
    v, d = source_junction(g, b, b1, b2)
    assert v == p[n - 1]
    assert abs(d - sum(g.edges[e] for e in zip(p[:n], p[1:n]))) < 1e-9
    p, q = g.routes[(b1, b)], g.routes[(b2, b)]
    n = _lcp(p[::-1], q[::-1])
    v, d = receiver_junction(g, b1, b2, b)
    assert v == p[-n]
    assert abs(d - sum(g.edges[e] for e in zip(p[len(p) - n:], p[len(p) - n + 1:]))) < 1e-9


@given(st.integers(0, 10_000))
def test_source_receiver_sets_oracle(seed):
    rng = random.Random(seed)
    g = random_network(mixed_params(rng, seed, internal_count=rng.randint(1, 12)))
    for x in g.internal:
        keys = [k for k, p in g.routes.items() if x in p]
        assert source_receiver_sets(g, x) == ({k[0] for k in keys}, {k[1] for k in keys})


def test_graph_equality_ignores_vertex_order(triangle):
    shuffled = NetworkGraph(tuple(reversed(triangle.vertices)), triangle.boundary, dict(triangle.edges), dict(triangle.routes))
    assert shuffled == triangle


def test_immutable(triangle):
    with pytest.raises(TypeError):
        triangle.edges[("b1", "x1")] = 5.0
