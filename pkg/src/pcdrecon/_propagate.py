"""Label propagation over reconstructed paths (pure Python backend).

Boundary vertices are the integers ``0..n-1``; a discovered internal vertex
with label ``k`` is encoded as ``n + k``. Each reconstructed path is a list
of ``(node, cumulative distance)`` pairs kept sorted by distance.

The recursive UpdatePath procedure is run with an explicit stack; children
are pushed in reverse so they are visited in exactly the order of the
recursive formulation, and the existence check happens when a frame is
popped, as it would on entry to the recursive call.
"""
from __future__ import annotations

from bisect import bisect_left

import numpy as np


class PathTable:
    """Mutable reconstruction state: every path ``R(u, v)`` plus the label counter."""

    def __init__(self, lengths, source, receiver, eps: float):
        self.L = np.asarray(lengths, dtype=np.float64).tolist()
        self.S = np.asarray(source, dtype=np.float64).tolist()
        self.R = np.asarray(receiver, dtype=np.float64).tolist()
        self.n = n = len(self.L)
        self.eps = eps
        self.dist = [[[0.0, self.L[u][v]] if u != v else [] for v in range(n)] for u in range(n)]
        self.node = [[[u, v] if u != v else [] for v in range(n)] for u in range(n)]
        self.origins: list = []
        self.labels_created = 0
        self.labels_discarded = 0
        self.insertions = 0
        self.update_calls = 0
        self.toplevel_calls = 0

    def find(self, u: int, v: int, delta: float) -> int:
        """Position of an entry within ``eps`` of ``delta`` in R(u, v), or -1."""
        d = self.dist[u][v]
        i = bisect_left(d, delta - self.eps)
        if i < len(d) and d[i] <= delta + self.eps:
            return i
        return -1

    def insert(self, u: int, v: int, node: int, delta: float) -> None:
        d = self.dist[u][v]
        i = bisect_left(d, delta)
        d.insert(i, delta)
        self.node[u][v].insert(i, node)
        self.insertions += 1

    def new_label(self, origin) -> int:
        k = self.labels_created
        self.labels_created += 1
        self.origins.append(origin)
        return self.n + k

    def update_path(self, u: int, v: int, label: int, delta: float, origin=None) -> int:
        """Insert ``label`` at ``delta`` into R(u, v) and propagate it.

        ``label`` may be -1 to create one lazily once the existence check
        fails. Returns the label placed in R(u, v), or -1 if an entry at
        ``delta`` already existed.
        """
        n, eps, L, S, R = self.n, self.eps, self.L, self.S, self.R
        stack = [(u, v, delta)]
        placed = -1
        first = True
        while stack:
            u, v, delta = stack.pop()
            self.update_calls += 1
            if self.find(u, v, delta) >= 0:
                if first:
                    self.labels_discarded += 1
                    return -1
                continue
            if label < 0:
                label = self.new_label(origin)
            if first:
                placed = label
                first = False
            self.insert(u, v, label, delta)
            tail = L[u][v] - delta
            Su, Rv = S[u][v], R[v][u]
            children = []
            for z in range(n):
                if z == u or z == v:
                    continue
                if Su[z] >= delta - eps:
                    children.append((u, z, delta))
                if Rv[z] >= tail - eps:
                    children.append((z, v, L[z][v] - tail))
            children.reverse()
            stack.extend(children)
        return placed

    def update_path_mirrored(self, u: int, v: int, label: int, delta: float, back: float, origin=None) -> int:
        """Symmetric-routing variant: also place the label on the reverse path.

        ``delta`` is the distance from ``u`` along R(u, v) and ``back`` the
        distance from the vertex to ``u`` along R(v, u).
        """
        n, eps, L, S = self.n, self.eps, self.L, self.S
        stack = [(u, v, delta, back)]
        placed = -1
        first = True
        while stack:
            u, v, delta, back = stack.pop()
            self.update_calls += 1
            if self.find(u, v, delta) >= 0:
                if first:
                    self.labels_discarded += 1
                    return -1
                continue
            if label < 0:
                label = self.new_label(origin)
            if first:
                placed = label
                first = False
            self.insert(u, v, label, delta)
            gamma = L[v][u] - back
            if self.find(v, u, gamma) < 0:
                self.insert(v, u, label, gamma)
            Su, Sv = S[u][v], S[v][u]
            fwd = L[u][v] - delta
            children = []
            for z in range(n):
                if z == u or z == v:
                    continue
                if Su[z] >= delta - eps:
                    children.append((u, z, delta, back))
                if Sv[z] >= gamma - eps:
                    children.append((v, z, gamma, fwd))
            children.reverse()
            stack.extend(children)
        return placed

    def paths(self) -> list:
        n = self.n
        return [
            list(zip(self.node[u][v], self.dist[u][v])) if u != v else []
            for u in range(n)
            for v in range(n)
        ]

    def stats(self) -> dict:
        return {
            "labels_created": self.labels_created,
            "labels_discarded": self.labels_discarded,
            "insertions": self.insertions,
            "toplevel_calls": self.toplevel_calls,
            "update_calls": self.update_calls,
        }


def propagate(lengths, source, receiver, symmetric_routing: bool, specialized: bool, eps: float):
    """Run the full main loop over ordered boundary triples.

    Returns ``(paths, origins, stats)`` where ``paths[u * n + v]`` lists the
    ``(node, distance)`` entries of R(u, v) and ``origins[k]`` is the
    ``(b1, b2, b3, side)`` triple that created label ``k`` (side 0 for the
    source junction, 1 for the receiver junction).
    """
    t = PathTable(lengths, source, receiver, eps)
    n, L, S, R = t.n, t.L, t.S, t.R
    for b1 in range(n):
        for b2 in range(n):
            if b2 == b1:
                continue
            for b3 in range(n):
                if b3 == b1 or b3 == b2:
                    continue
                t.toplevel_calls += 1
                if specialized:
                    t.update_path_mirrored(b1, b2, -1, S[b1][b2][b3], R[b1][b2][b3], (b1, b2, b3, 0))
                    continue
                a = t.update_path(b1, b2, -1, S[b1][b2][b3], (b1, b2, b3, 0))
                t.toplevel_calls += 1
                a2 = a if symmetric_routing else -1
                t.update_path(b2, b1, a2, L[b2][b1] - R[b1][b2][b3], (b1, b2, b3, 1))
    return t.paths(), t.origins, t.stats()
