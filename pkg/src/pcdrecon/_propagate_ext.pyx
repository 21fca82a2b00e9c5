# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled label-propagation kernel.

Same contract and visiting order as ``pcdrecon._propagate.propagate``.
"""
from libcpp.vector cimport vector

import numpy as np


cdef struct Frame:
    int u
    int v
    double delta
    double back


cdef class _Table:
    cdef int n
    cdef double eps
    cdef const double[:, ::1] L
    cdef const double[:, :, ::1] S
    cdef const double[:, :, ::1] R
    cdef vector[vector[double]] dist
    cdef vector[vector[int]] node
    cdef list origins
    cdef long labels_created, labels_discarded, insertions, update_calls, toplevel_calls

    def __init__(self, L, S, R, double eps):
        cdef int u, v
        self.L = L
        self.S = S
        self.R = R
        self.n = L.shape[0]
        self.eps = eps
        self.origins = []
        self.labels_created = 0
        self.labels_discarded = 0
        self.insertions = 0
        self.update_calls = 0
        self.toplevel_calls = 0
        self.dist.resize(self.n * self.n)
        self.node.resize(self.n * self.n)
        for u in range(self.n):
            for v in range(self.n):
                if u != v:
                    self.dist[u * self.n + v].push_back(0.0)
                    self.dist[u * self.n + v].push_back(self.L[u, v])
                    self.node[u * self.n + v].push_back(u)
                    self.node[u * self.n + v].push_back(v)

    cdef Py_ssize_t lower(self, int k, double x) nogil:
        cdef vector[double]* d = &self.dist[k]
        cdef Py_ssize_t lo = 0, hi = d.size(), mid
        while lo < hi:
            mid = (lo + hi) // 2
            if d[0][mid] < x:
                lo = mid + 1
            else:
                hi = mid
        return lo

    cdef bint exists(self, int u, int v, double delta) nogil:
        cdef int k = u * self.n + v
        cdef Py_ssize_t i = self.lower(k, delta - self.eps)
        return i < <Py_ssize_t>self.dist[k].size() and self.dist[k][i] <= delta + self.eps

    cdef void insert(self, int u, int v, int label, double delta) nogil:
        cdef int k = u * self.n + v
        cdef Py_ssize_t i = self.lower(k, delta)
        self.dist[k].insert(self.dist[k].begin() + i, delta)
        self.node[k].insert(self.node[k].begin() + i, label)
        self.insertions += 1

    cdef int new_label(self, tuple origin):
        cdef int k = self.labels_created
        self.labels_created += 1
        self.origins.append(origin)
        return self.n + k

    cdef int update_path(self, int u0, int v0, int label, double delta0, tuple origin):
        cdef vector[Frame] stack
        cdef vector[Frame] children
        cdef Frame f, c
        cdef int z, u, v, n = self.n
        cdef int placed = -1
        cdef bint first = True
        cdef double delta, tail, eps = self.eps
        cdef Py_ssize_t i
        f.u = u0
        f.v = v0
        f.delta = delta0
        f.back = 0.0
        stack.push_back(f)
        while stack.size() > 0:
            f = stack.back()
            stack.pop_back()
            u = f.u
            v = f.v
            delta = f.delta
            self.update_calls += 1
            if self.exists(u, v, delta):
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
            tail = self.L[u, v] - delta
            children.clear()
            for z in range(n):
                if z == u or z == v:
                    continue
                if self.S[u, v, z] >= delta - eps:
                    c.u = u
                    c.v = z
                    c.delta = delta
                    c.back = 0.0
                    children.push_back(c)
                if self.R[v, u, z] >= tail - eps:
                    c.u = z
                    c.v = v
                    c.delta = self.L[z, v] - tail
                    c.back = 0.0
                    children.push_back(c)
            for i in range(<Py_ssize_t>children.size() - 1, -1, -1):
                stack.push_back(children[i])
        return placed

    cdef int update_path_mirrored(self, int u0, int v0, int label, double delta0, double back0, tuple origin):
        cdef vector[Frame] stack
        cdef vector[Frame] children
        cdef Frame f, c
        cdef int z, u, v, n = self.n
        cdef int placed = -1
        cdef bint first = True
        cdef double delta, back, gamma, fwd, eps = self.eps
        cdef Py_ssize_t i
        f.u = u0
        f.v = v0
        f.delta = delta0
        f.back = back0
        stack.push_back(f)
        while stack.size() > 0:
            f = stack.back()
            stack.pop_back()
            u = f.u
            v = f.v
            delta = f.delta
            back = f.back
            self.update_calls += 1
            if self.exists(u, v, delta):
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
            gamma = self.L[v, u] - back
            if not self.exists(v, u, gamma):
                self.insert(v, u, label, gamma)
            fwd = self.L[u, v] - delta
            children.clear()
            for z in range(n):
                if z == u or z == v:
                    continue
                if self.S[u, v, z] >= delta - eps:
                    c.u = u
                    c.v = z
                    c.delta = delta
                    c.back = back
                    children.push_back(c)
                if self.S[v, u, z] >= gamma - eps:
                    c.u = v
                    c.v = z
                    c.delta = gamma
                    c.back = fwd
                    children.push_back(c)
            for i in range(<Py_ssize_t>children.size() - 1, -1, -1):
                stack.push_back(children[i])
        return placed

    cdef list paths(self):
        cdef int u, v, n = self.n
        cdef Py_ssize_t i, k
        out = []
        for u in range(n):
            for v in range(n):
                k = u * n + v
                out.append([(self.node[k][i], self.dist[k][i]) for i in range(<Py_ssize_t>self.dist[k].size())])
        return out

    cdef dict stats(self):
        return {
            "labels_created": self.labels_created,
            "labels_discarded": self.labels_discarded,
            "insertions": self.insertions,
            "toplevel_calls": self.toplevel_calls,
            "update_calls": self.update_calls,
        }


def propagate(lengths, source, receiver, bint symmetric_routing, bint specialized, double eps):
    cdef const double[:, ::1] L = np.ascontiguousarray(lengths, dtype=np.float64)
    cdef const double[:, :, ::1] S = np.ascontiguousarray(source, dtype=np.float64)
    cdef const double[:, :, ::1] R = np.ascontiguousarray(receiver, dtype=np.float64)
    cdef _Table t = _Table(L, S, R, eps)
    cdef int n = t.n, b1, b2, b3, a, a2
    for b1 in range(n):
        for b2 in range(n):
            if b2 == b1:
                continue
            for b3 in range(n):
                if b3 == b1 or b3 == b2:
                    continue
                t.toplevel_calls += 1
                if specialized:
                    t.update_path_mirrored(b1, b2, -1, S[b1, b2, b3], R[b1, b2, b3], (b1, b2, b3, 0))
                    continue
                a = t.update_path(b1, b2, -1, S[b1, b2, b3], (b1, b2, b3, 0))
                t.toplevel_calls += 1
                a2 = a if symmetric_routing else -1
                t.update_path(b2, b1, a2, L[b2, b1] - R[b1, b2, b3], (b1, b2, b3, 1))
    return t.paths(), t.origins, t.stats()
