"""End-to-end acceptance checks, one test per criterion, all at tolerance 1e-9.

Each test records a one-line verdict that is printed at the end of the
pytest run (and immediately when running with ``-s``).
"""
import random
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, brute_force_bipartitions, separable_u_graph, triangle_graph
from pcdrecon import (
    GeneratorParams,
    boundary_anchored_isomorphic,
    build_receiver_tree,
    build_source_tree,
    clean,
    is_compliant,
    is_symmetric_routing,
    measure,
    pcd_equal,
    random_network,
    reconstruct,
    reconstruct_symmetric,
    separability_classes,
    source_receiver_sets,
)
from pcdrecon.generator import inject_separable_vertex, inject_trivial_chain, inject_unused_edges

EPS = 1e-9


def record(number, title, ok, detail):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _compliant_instance(seed):
    rng = random.Random(seed)
    return random_network(GeneratorParams(
        seed=seed,
        boundary_count=rng.randint(3, 8),
        internal_count=rng.randint(0, 20),
        edge_density=rng.uniform(0.05, 0.6),
        symmetric_routing=rng.random() < 0.4,
        symmetric_weights=rng.random() < 0.3,
        ensure_compliant=True,
    ))


def _noncompliant_instance(seed):
    rng = random.Random(10**6 + seed)
    g = random_network(GeneratorParams(
        seed=seed,
        boundary_count=rng.randint(3, 8),
        internal_count=rng.randint(0, 20),
        edge_density=rng.uniform(0.05, 0.6),
        symmetric_routing=rng.random() < 0.4,
        symmetric_weights=rng.random() < 0.3,
    ))
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice(("unused", "chain", "separable"))
        if kind == "unused":
            g = inject_unused_edges(g, rng, rng.randint(1, 3))
        elif kind == "chain":
            g = inject_trivial_chain(g, rng, rng.randint(1, 3))
        else:
            g = inject_separable_vertex(g, rng)
    return g


@pytest.fixture(scope="module")
def round_trips():
    """Criterion 1 runs, shared with the bound and tree checks."""
    runs = []
    start = time.perf_counter()
    for seed in range(1000):
        g = _compliant_instance(seed)
        s = is_symmetric_routing(g)
        pcd = measure(g)
        runs.append((g, s, pcd, reconstruct(pcd, s, eps=EPS)))
    return runs, time.perf_counter() - start


@pytest.fixture(scope="module")
def canonicalizations():
    runs = []
    seed = 0
    while len(runs) < 1000:
        g = _noncompliant_instance(seed)
        seed += 1
        s = is_symmetric_routing(g)
        if is_compliant(g, s):
            continue
        pcd = measure(g)
        cleaned, _ = clean(g, s, EPS)
        runs.append((g, s, pcd, cleaned, reconstruct(pcd, s, eps=EPS)))
    return runs, seed


def test_criterion_1_round_trip(round_trips):
    runs, elapsed = round_trips
    bad, worst = [], 0.0
    for g, s, _, result in runs:
        w = boundary_anchored_isomorphic(result.graph, g, EPS)
        if w is None:
            bad.append(g)
        else:
            worst = max(worst, w.max_weight_discrepancy)
    sym = sum(s for _, s, _, _ in runs)
    ok = not bad and worst <= EPS and len(runs) >= 1000
    record(1, "round trip on compliant graphs", ok,
           f"{len(runs) - len(bad)}/{len(runs)} isomorphic ({sym} symmetric), "
           f"max weight discrepancy {worst:.3g}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_canonicalization(canonicalizations):
    runs, drawn = canonicalizations
    iso_fail = pcd_fail = 0
    for g, s, pcd, cleaned, result in runs:
        if boundary_anchored_isomorphic(result.graph, cleaned, EPS) is None:
            iso_fail += 1
        if not pcd_equal(pcd, measure(cleaned), EPS):
            pcd_fail += 1
    ok = iso_fail == 0 and pcd_fail == 0 and len(runs) >= 1000
    record(2, "reconstruction equals cleaned graph", ok,
           f"{len(runs)} non-compliant instances (of {drawn} drawn), "
           f"{iso_fail} not isomorphic, {pcd_fail} PCD changed by cleaning")
    assert ok


def test_criterion_3_triangle():
    g = triangle_graph()
    pcd = measure(g)
    general = reconstruct(pcd, False, eps=EPS)
    symmetric = reconstruct(pcd, True, eps=EPS)
    witness = boundary_anchored_isomorphic(symmetric.graph, g, EPS)
    ok = len(general.graph.internal) == 6 and len(symmetric.graph.internal) == 3 and witness is not None
    record(3, "triangle example", ok,
           f"general run {len(general.graph.internal)} internal vertices, "
           f"symmetric run {len(symmetric.graph.internal)} "
           f"({'isomorphic' if witness else 'not isomorphic'} to the original)")
    assert ok


def test_criterion_4_insertion_bound(round_trips, canonicalizations):
    over = 0
    total = 0
    for g, _, _, result in round_trips[0]:
        total += 1
        over += result.stats.insertions > len(g.internal) * len(g.boundary) ** 2
    for _, _, _, cleaned, result in canonicalizations[0]:
        total += 1
        over += result.stats.insertions > len(cleaned.internal) * len(cleaned.boundary) ** 2
    ok = over == 0
    record(4, "insertions <= |internal| * |boundary|^2", ok, f"{total - over}/{total} runs within the bound")
    assert ok


def test_criterion_5_algorithm_equivalence():
    mismatched = calls_off = 0
    n = 0
    for seed in range(200):
        rng = random.Random(5_000 + seed)
        g = random_network(GeneratorParams(
            seed=seed,
            boundary_count=rng.randint(3, 8),
            internal_count=rng.randint(0, 20),
            edge_density=rng.uniform(0.05, 0.6),
            symmetric_routing=True,
            symmetric_weights=rng.random() < 0.5,
            ensure_compliant=rng.random() < 0.5,
        ))
        assert is_symmetric_routing(g)
        pcd = measure(g)
        general = reconstruct(pcd, True, eps=EPS)
        special = reconstruct_symmetric(pcd, eps=EPS)
        n += 1
        if boundary_anchored_isomorphic(general.graph, special.graph, EPS) is None:
            mismatched += 1
        if 2 * special.stats.toplevel_calls != general.stats.toplevel_calls:
            calls_off += 1
    ok = n >= 200 and mismatched == 0 and calls_off == 0
    record(5, "specialized algorithm matches general, half the top-level calls", ok,
           f"{n} symmetric instances, {mismatched} non-isomorphic, {calls_off} with call count != 1/2")
    assert ok


def test_criterion_6_separability_oracle():
    instances = vertices = disagreements = 0
    seed = 0
    while instances < 500:
        rng = random.Random(20_000 + seed)
        g = random_network(GeneratorParams(
            seed=seed,
            boundary_count=rng.randint(3, 6),
            internal_count=rng.randint(1, 12),
            edge_density=rng.uniform(0.05, 0.6),
            symmetric_routing=rng.random() < 0.4,
        ))
        seed += 1
        for _ in range(rng.randint(0, 2)):
            g = inject_separable_vertex(g, rng)
        s = is_symmetric_routing(g)
        checked = False
        for x in g.internal:
            S, R = source_receiver_sets(g, x)
            if not S or len(S) + len(R) > 12:
                continue
            checked = True
            vertices += 1
            part = separability_classes(g, x, s)
            splits = brute_force_bipartitions(g, x, s)
            agree = part.separable == bool(splits)
            for split in splits:
                if s:
                    agree &= all(c <= split[0] or not (c & split[0]) for c in part.source_classes)
                else:
                    S1, R1 = split
                    agree &= all(c <= S1 or not (c & S1) for c in part.source_classes)
                    agree &= all(c <= R1 or not (c & R1) for c in part.receiver_classes)
            disagreements += not agree
        instances += checked
    ok = disagreements == 0
    record(6, "separability classes vs exhaustive bipartitions", ok,
           f"{instances} instances, {vertices} vertices, {disagreements} disagreements")
    assert ok


def test_criterion_7_symmetric_weights_identity():
    worst = 0.0
    count = 0
    for seed in range(200):
        rng = random.Random(30_000 + seed)
        g = random_network(GeneratorParams(
            seed=seed,
            boundary_count=rng.randint(3, 8),
            internal_count=rng.randint(0, 20),
            edge_density=rng.uniform(0.05, 0.6),
            symmetric_routing=True,
            symmetric_weights=True,
            ensure_compliant=rng.random() < 0.5,
        ))
        p = measure(g)
        n = p.size
        mask = np.ones((n, n, n), dtype=bool)
        for r in range(n):
            mask[r, r, :] = mask[r, :, r] = mask[:, r, r] = False
        idx = np.arange(n)
        mask[:, idx, idx] = False
        worst = max(worst, float(np.max(np.abs(p.receiver[mask] - p.source[mask]), initial=0.0)))
        count += 1
    ok = worst <= EPS
    record(7, "rcv(b1,b2;b) = src(b;b1,b2) under symmetric weights", ok,
           f"{count} instances, max difference {worst:.3g}")
    assert ok


def test_criterion_8_separable_vertex_demo():
    g = separable_u_graph()
    result = reconstruct(measure(g), False, eps=EPS)
    cleaned, report = clean(g)
    witness = boundary_anchored_isomorphic(result.graph, cleaned, EPS)
    images = sorted(witness.mapping.values()) if witness else []
    others = sorted(v for v in g.internal if v != "u")
    ok = (
        witness is not None
        and dict(report.split_vertices) == {"u": ("u#1", "u#2")}
        and not report.merged_vertices
        and not report.removed_edges
        and sorted(v for v in images if not v.startswith("u#")) == others
        and images.count("u#1") == 1 and images.count("u#2") == 1
    )
    record(8, "separable vertex u reappears as two copies", ok,
           f"{len(g.internal)} internal vertices in, {len(result.graph.internal)} out; "
           f"u -> {sorted(v for v in images if v.startswith('u#'))}, "
           f"{len([v for v in images if not v.startswith('u#')])}/{len(others)} others recovered")
    assert ok


def test_criterion_9_logical_trees(round_trips):
    mismatches = checked = 0
    for _, _, pcd, _ in round_trips[0]:
        B = pcd.boundary
        for b in B:
            s, r = build_source_tree(pcd, b, EPS), build_receiver_tree(pcd, b, EPS)
            others = [x for x in B if x != b]
            for i, b1 in enumerate(others):
                for b2 in others[i + 1:]:
                    checked += 2
                    mismatches += s.junction_depth(b1, b2) != pcd.src(b, b1, b2)
                    mismatches += r.junction_depth(b1, b2) != pcd.rcv(b1, b2, b)
    ok = mismatches == 0
    record(9, "logical trees reproduce src/rcv exactly", ok, f"{checked} junction depths, {mismatches} mismatches")
    assert ok
