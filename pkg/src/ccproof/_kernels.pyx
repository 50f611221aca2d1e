# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of _pykernels.Searcher; results are identical by construction."""

from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport int64_t

cdef enum:
    UNUSABLE = -1


cdef struct Label:
    int64_t cost
    int64_t hops
    int64_t top
    int64_t v


cdef inline bint less(Label a, Label b) nogil:
    if a.cost != b.cost:
        return a.cost < b.cost
    if a.hops != b.hops:
        return a.hops < b.hops
    if a.top != b.top:
        return a.top < b.top
    return a.v < b.v


cdef class Searcher:
    cdef const int64_t[:] indptr
    cdef const int64_t[:] adj_v
    cdef const int64_t[:] adj_e
    cdef Py_ssize_t n
    cdef int64_t *cost
    cdef int64_t *hops
    cdef int64_t *top
    cdef int64_t *pred_e
    cdef int64_t *pred_v
    cdef char *state          # 0 untouched, 1 labelled, 2 settled
    cdef int64_t *touched
    cdef Py_ssize_t ntouched
    cdef Label *heap
    cdef Py_ssize_t heap_len, heap_cap

    def __cinit__(self, indptr, adj_v, adj_e):
        self.indptr = indptr
        self.adj_v = adj_v
        self.adj_e = adj_e
        self.n = max(len(indptr) - 1, 0)
        cdef Py_ssize_t n = self.n + 1
        self.cost = <int64_t *> malloc(n * sizeof(int64_t))
        self.hops = <int64_t *> malloc(n * sizeof(int64_t))
        self.top = <int64_t *> malloc(n * sizeof(int64_t))
        self.pred_e = <int64_t *> malloc(n * sizeof(int64_t))
        self.pred_v = <int64_t *> malloc(n * sizeof(int64_t))
        self.touched = <int64_t *> malloc(n * sizeof(int64_t))
        self.state = <char *> malloc(n)
        self.heap_cap = 64
        self.heap = <Label *> malloc(self.heap_cap * sizeof(Label))
        if (not self.cost or not self.hops or not self.top or not self.pred_e
                or not self.pred_v or not self.touched or not self.state or not self.heap):
            raise MemoryError()
        cdef Py_ssize_t i
        for i in range(n):
            self.state[i] = 0
        self.ntouched = 0
        self.heap_len = 0

    def __dealloc__(self):
        free(self.cost)
        free(self.hops)
        free(self.top)
        free(self.pred_e)
        free(self.pred_v)
        free(self.touched)
        free(self.state)
        free(self.heap)

    cdef int push(self, Label x) except -1:
        cdef Label *grown
        if self.heap_len == self.heap_cap:
            grown = <Label *> realloc(self.heap, 2 * self.heap_cap * sizeof(Label))
            if not grown:
                raise MemoryError()
            self.heap = grown
            self.heap_cap *= 2
        cdef Py_ssize_t i = self.heap_len
        cdef Py_ssize_t parent
        self.heap_len += 1
        while i > 0:
            parent = (i - 1) >> 1
            if not less(x, self.heap[parent]):
                break
            self.heap[i] = self.heap[parent]
            i = parent
        self.heap[i] = x
        return 0

    cdef Label pop(self) nogil:
        cdef Label out = self.heap[0]
        self.heap_len -= 1
        cdef Label x = self.heap[self.heap_len]
        cdef Py_ssize_t i = 0, child
        while True:
            child = 2 * i + 1
            if child >= self.heap_len:
                break
            if child + 1 < self.heap_len and less(self.heap[child + 1], self.heap[child]):
                child += 1
            if not less(self.heap[child], x):
                break
            self.heap[i] = self.heap[child]
            i = child
        if self.heap_len > 0:
            self.heap[i] = x
        return out

    cdef void touch(self, int64_t v) nogil:
        if self.state[v] == 0:
            self.state[v] = 1
            self.touched[self.ntouched] = v
            self.ntouched += 1

    cdef void reset(self) nogil:
        cdef Py_ssize_t i
        for i in range(self.ntouched):
            self.state[self.touched[i]] = 0
        self.ntouched = 0
        self.heap_len = 0

    def run(self, const int64_t[:] weights, int64_t s, int64_t t):
        """Return (cost, [edge ids from s to t]) or (-1, None)."""
        if s == t:
            return 0, []
        cdef Label cur, nxt
        cdef int64_t k, e, w, u, v
        cdef bint found = False
        self.touch(s)
        self.cost[s] = 0
        self.hops[s] = 0
        self.top[s] = -1
        cur.cost = 0
        cur.hops = 0
        cur.top = -1
        cur.v = s
        self.push(cur)
        while self.heap_len > 0:
            cur = self.pop()
            v = cur.v
            if self.state[v] == 2:
                continue
            self.state[v] = 2
            if v == t:
                found = True
                break
            for k in range(self.indptr[v], self.indptr[v + 1]):
                e = self.adj_e[k]
                w = weights[e]
                if w == UNUSABLE:
                    continue
                u = self.adj_v[k]
                if self.state[u] == 2:
                    continue
                nxt.cost = cur.cost + w
                nxt.hops = cur.hops + 1
                nxt.top = e if e > cur.top else cur.top
                nxt.v = u
                if self.state[u] == 0:
                    self.touch(u)
                elif not (nxt.cost < self.cost[u] or (nxt.cost == self.cost[u] and (
                        nxt.hops < self.hops[u] or (nxt.hops == self.hops[u] and nxt.top < self.top[u])))):
                    continue
                self.cost[u] = nxt.cost
                self.hops[u] = nxt.hops
                self.top[u] = nxt.top
                self.pred_e[u] = e
                self.pred_v[u] = v
                self.push(nxt)
        if not found:
            self.reset()
            return -1, None
        path = []
        v = t
        while v != s:
            path.append(self.pred_e[v])
            v = self.pred_v[v]
        path.reverse()
        total = self.cost[t]
        self.reset()
        return total, path
