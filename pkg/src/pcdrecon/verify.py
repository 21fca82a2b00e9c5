"""Equivalence checks: PCD comparison, anchored isomorphism, round-trip harness."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

import numpy as np

from .compliance import clean
from .errors import BoundaryMismatchError, PCDReconError
from .graph import DEFAULT_EPS, NetworkGraph, is_symmetric_routing
from .pcd import PathCorrelationData, measure
from .reconstruct import reconstruct


def _aligned(p1: PathCorrelationData, p2: PathCorrelationData):
    if set(p1.boundary) != set(p2.boundary):
        raise BoundaryMismatchError(
            "PCDs are over different boundary sets",
            left=sorted(map(str, p1.boundary)),
            right=sorted(map(str, p2.boundary)),
        )
    perm = np.array([p2.index[b] for b in p1.boundary], dtype=np.intp)
    L2 = p2.lengths[np.ix_(perm, perm)]
    S2 = p2.source[np.ix_(perm, perm, perm)]
    R2 = p2.receiver[np.ix_(perm, perm, perm)]
    return (p1.lengths, L2), (p1.source, S2), (p1.receiver, R2)


def pcd_discrepancy(p1: PathCorrelationData, p2: PathCorrelationData) -> float:
    """Largest absolute difference over all entries (inf if definedness differs)."""
    worst = 0.0
    for a, b in _aligned(p1, p2):
        na, nb = np.isnan(a), np.isnan(b)
        if np.any(na != nb):
            return float("inf")
        if np.any(~na):
            worst = max(worst, float(np.max(np.abs(a[~na] - b[~na]))))
    return worst


def pcd_equal(p1: PathCorrelationData, p2: PathCorrelationData, eps: float = DEFAULT_EPS) -> bool:
    return pcd_discrepancy(p1, p2) <= eps


@dataclass(frozen=True)
class IsomorphismWitness:
    """Internal-vertex bijection from the first graph onto the second."""

    mapping: Mapping
    max_weight_discrepancy: float

    def inverse(self) -> "IsomorphismWitness":
        return IsomorphismWitness(
            MappingProxyType({v: k for k, v in self.mapping.items()}),
            self.max_weight_discrepancy,
        )

    def to_dict(self) -> dict:
        return {
            "mapping": {str(k): v for k, v in self.mapping.items()},
            "max_weight_discrepancy": self.max_weight_discrepancy,
        }


def boundary_anchored_isomorphic(
    g1: NetworkGraph, g2: NetworkGraph, eps: float = DEFAULT_EPS
) -> Optional[IsomorphismWitness]:
    """Find the isomorphism fixing boundary ids and carrying routes onto routes.

    Positions along routes pin down the image of every internal vertex that
    lies on a route; any leftover internal vertices are matched by a small
    backtracking search on edge structure. Returns None when no witness
    exists.
    """
    if set(g1.boundary) != set(g2.boundary) or set(g1.routes) != set(g2.routes):
        return None
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    b1, b2 = g1.boundary_set, g2.boundary_set
    fwd, back = {}, {}
    for key, p in g1.routes.items():
        q = g2.routes[key]
        if len(p) != len(q):
            return None
        for a, b in zip(p, q):
            if a in b1 or b in b2:
                if a != b:
                    return None
                continue
            if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
                return None

    rest1 = [v for v in g1.internal if v not in fwd]
    rest2 = [v for v in g2.internal if v not in back]
    if len(rest1) != len(rest2):
        return None
    if rest1 and not _extend(g1, g2, fwd, back, rest1, rest2, eps):
        return None

    def image(v):
        return v if v in b1 else fwd[v]

    worst = 0.0
    for (u, v), w in g1.edges.items():
        w2 = g2.edges.get((image(u), image(v)))
        if w2 is None:
            return None
        worst = max(worst, abs(w - w2))
        if worst > eps:
            return None
    return IsomorphismWitness(MappingProxyType(dict(fwd)), worst)


def _extend(g1, g2, fwd, back, rest1, rest2, eps) -> bool:
    def image(v):
        return v if v in g1.boundary_set else fwd.get(v)

    def fits(a, b):
        for nbrs, edges2, out in ((g1.successors[a], g2.edges, True), (g1.predecessors[a], g2.edges, False)):
            for c in nbrs:
                ic = b if c == a else image(c)
                if ic is None:
                    continue
                e1 = (a, c) if out else (c, a)
                e2 = (b, ic) if out else (ic, b)
                if e2 not in edges2 or abs(g1.edges[e1] - edges2[e2]) > eps:
                    return False
        return len(g1.successors[a]) == len(g2.successors[b]) and len(g1.predecessors[a]) == len(g2.predecessors[b])

    def search(i):
        if i == len(rest1):
            return True
        a = rest1[i]
        for b in rest2:
            if b in back or not fits(a, b):
                continue
            fwd[a], back[b] = b, a
            if search(i + 1):
                return True
            del fwd[a], back[b]
        return False

    return search(0)


@dataclass(frozen=True)
class TheoremReport:
    symmetric_routing: bool
    reconstruction_isomorphic: bool
    pcd_preserved: bool
    witness: Optional[IsomorphismWitness] = None
    diagnostics: tuple = field(default=())
    counts: Mapping = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.reconstruction_isomorphic and self.pcd_preserved

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "symmetric_routing": self.symmetric_routing,
            "assertions": {
                "reconstruction_isomorphic_to_cleaned": self.reconstruction_isomorphic,
                "pcd_preserved_by_cleaning": self.pcd_preserved,
            },
            "witness": self.witness.to_dict() if self.witness else None,
            "counts": dict(self.counts),
            "diagnostics": list(self.diagnostics),
        }


def check_theorem(g: NetworkGraph, eps: float = DEFAULT_EPS) -> TheoremReport:
    """Reconstruct ``g`` from its PCD and compare with its cleaned form."""
    s = is_symmetric_routing(g)
    notes = []
    pcd = measure(g)
    cleaned, _ = clean(g, s, eps)
    try:
        preserved = pcd_equal(pcd, measure(cleaned), eps)
    except PCDReconError as exc:
        preserved = False
        notes.append(f"measuring the cleaned graph failed: {exc.code}: {exc.message}")
    if not preserved and not notes:
        notes.append("cleaning changed the PCD")
    witness = None
    counts = {"internal_cleaned": len(cleaned.internal), "edges_cleaned": len(cleaned.edges)}
    try:
        result = reconstruct(pcd, s, eps=eps)
    except PCDReconError as exc:
        notes.append(f"reconstruction failed: {exc.code}: {exc.message}")
    else:
        counts.update(internal_reconstructed=len(result.graph.internal), edges_reconstructed=len(result.graph.edges))
        witness = boundary_anchored_isomorphic(result.graph, cleaned, eps)
        if witness is None:
            notes.append("reconstruction is not isomorphic to the cleaned graph")
    return TheoremReport(
        symmetric_routing=s,
        reconstruction_isomorphic=witness is not None,
        pcd_preserved=preserved,
        witness=witness,
        diagnostics=tuple(notes),
        counts=MappingProxyType(counts),
    )
