"""Pure-Python kernels; the Cython module in _kernels.pyx mirrors these exactly."""

import heapq

UNUSABLE = -1


class Searcher:
    """Label-setting shortest path over a fixed CSR adjacency.

    Labels compare as (cost, edge count, largest edge id on the path), so
    ties resolve the same way in every run and in both kernel builds.
    """

    def __init__(self, indptr, adj_v, adj_e):
        self.indptr = indptr
        self.adj_v = adj_v
        self.adj_e = adj_e

    def run(self, weights, s, t):
        """Return (cost, [edge ids from s to t]) or (-1, None).

        Edges whose weight is UNUSABLE are never crossed.
        """
        if s == t:
            return 0, []
        indptr, adj_v, adj_e = self.indptr, self.adj_v, self.adj_e
        best = {s: (0, 0, -1)}
        pred = {}
        done = set()
        heap = [(0, 0, -1, s)]
        while heap:
            cost, hops, top, v = heapq.heappop(heap)
            if v in done:
                continue
            done.add(v)
            if v == t:
                break
            for k in range(indptr[v], indptr[v + 1]):
                e = adj_e[k]
                w = weights[e]
                if w == UNUSABLE:
                    continue
                u = adj_v[k]
                if u in done:
                    continue
                label = (cost + w, hops + 1, e if e > top else top)
                old = best.get(u)
                if old is None or label < old:
                    best[u] = label
                    pred[u] = (e, v)
                    heapq.heappush(heap, label + (u,))
        if t not in done:
            return -1, None
        path = []
        v = t
        while v != s:
            e, v = pred[v]
            path.append(e)
        path.reverse()
        return best[t][0], path
