"""Greedy tree-size reduction with forest-based size estimates.

Estimates: every congruence edge is charged the tree size of the unique
reduced-forest proof between its children.  Those sizes are accumulated in a
union-find whose `size` entries hold the proof size from a vertex to its
current representative; the forest is absorbed bottom up, recursing into a
congruence justification before its edge is charged.  Distances between two
vertices then follow from size[a] + size[b] - 2 * size[lca(a, b)], with all
LCAs answered by one off-line Tarjan pass.

Extraction: a FIFO of (start, end) obligations, each solved by a shortest
path with those estimates as congruence-edge costs.  Congruence edges on a
chosen path become new obligations while fuel lasts and otherwise fall back
to the forest proof.
"""

from __future__ import annotations

from collections import deque

from . import kernels
from .certificate import ProofCert, cert_from_path, reverse_cert, with_axioms
from .engine import CGraphSnapshot, NotEquivalent
from .extract_basic import forest_subproof

DEFAULT_FUEL = 10


def tarjan_lca(snap: CGraphSnapshot, queries) -> dict:
    """LCA in the reduced forest for each (a, b) in `queries`, one off-line pass."""
    n = snap.n_vertices
    children = [[] for _ in range(n)]
    for v in range(n):
        p = snap.forest_parent[v]
        if p != v:
            children[p].append(v)
    wanted = [[] for _ in range(n)]
    for a, b in queries:
        wanted[a].append(b)
        wanted[b].append(a)
    uf = list(range(n))
    anc = list(range(n))
    black = [False] * n
    out = {}

    def find(x):
        root = x
        while uf[root] != root:
            root = uf[root]
        while uf[x] != root:
            uf[x], x = root, uf[x]
        return root

    for r in range(n):
        if snap.forest_parent[r] != r:
            continue
        stack = [(r, iter(children[r]))]
        while stack:
            u, it = stack[-1]
            c = next(it, None)
            if c is not None:
                stack.append((c, iter(children[c])))
                continue
            stack.pop()
            black[u] = True
            for other in wanted[u]:
                if black[other]:
                    a, b = (u, other) if u <= other else (other, u)
                    out[(a, b)] = anc[find(other)]
            if stack:
                p = stack[-1][0]
                uf[find(u)] = find(p)
                anc[find(p)] = p
    return out


class EstimateTable:
    """Tree-size estimates for every congruence edge of a snapshot."""

    def __init__(self, snap: CGraphSnapshot):
        self.snap = snap
        n = snap.n_vertices
        self.parent = list(range(n))
        self.size = [0] * n
        self.pair_size: dict = {}
        self.estimate: dict = {}
        self.uf_ops = 0
        pairs = []
        for e in snap.edges:
            if e.is_congruence:
                pairs.append(e.just.pair)
        self._lca = tarjan_lca(snap, pairs)

    def find(self, v):
        """Representative of v; leaves size[v] = proof size from v to it."""
        self.uf_ops += 1
        parent, size = self.parent, self.size
        path = []
        while parent[v] != v:
            path.append(v)
            v = parent[v]
        acc = 0
        for x in reversed(path):
            acc += size[x]
            size[x] = acc
            parent[x] = v
        return v

    def _to_rep(self, v):
        return 0 if self.find(v) == v else self.size[v]

    def lca(self, a, b):
        key = (a, b) if a <= b else (b, a)
        hit = self._lca.get(key)
        if hit is None:
            # queries outside the batch fall back to a depth walk
            d, fp = self.snap.depth, self.snap.forest_parent
            while d[a] > d[b]:
                a = fp[a]
            while d[b] > d[a]:
                b = fp[b]
            while a != b:
                a, b = fp[a], fp[b]
            hit = self._lca[key] = a
        return hit

    def pair_tree_size(self, a, b):
        """Tree size of the reduced-forest proof between a and b."""
        snap = self.snap
        if snap.root[a] != snap.root[b]:
            raise NotEquivalent(f"{snap.show(a)} and {snap.show(b)} are not equal")
        memo = self.pair_size
        key = (a, b) if a <= b else (b, a)
        stack = [key]
        active = {key}
        depth, fparent, fedge = snap.depth, snap.forest_parent, snap.forest_edge
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                active.discard(cur)
                continue
            x, y = cur
            top_depth = depth[self.lca(x, y)]
            blocked = None
            for v in (x, y):
                while blocked is None:
                    rep = self.find(v)
                    if depth[rep] <= top_depth:
                        break
                    j = snap.edges[fedge[rep]].just
                    if snap.edges[fedge[rep]].is_congruence:
                        need = j.pair
                        if need not in memo:
                            if need in active:  # pragma: no cover - forest proofs are well founded
                                raise RuntimeError("cyclic congruence justification in the forest")
                            blocked = need
                            break
                        w = memo[need]
                    else:
                        w = 1
                    self.uf_ops += 1
                    self.parent[rep] = fparent[rep]
                    self.size[rep] = w
                if blocked is not None:
                    break
            if blocked is not None:
                stack.append(blocked)
                active.add(blocked)
                continue
            l = self.lca(x, y)
            memo[cur] = self._to_rep(x) + self._to_rep(y) - 2 * self._to_rep(l)
            stack.pop()
            active.discard(cur)
        return memo[key]

    def finish(self):
        """Absorb every forest edge so size[v] becomes the distance to v's root."""
        for v in range(self.snap.n_vertices):
            r = self.snap.root[v]
            self.pair_tree_size(v, r)

    def distance_to_root(self, v):
        self.find(v)
        return self._to_rep(v)


def estimate_sizes(snap: CGraphSnapshot) -> EstimateTable:
    """Forest-proof tree size for every congruence edge (forest edges first)."""
    table = EstimateTable(snap)
    order = [eid for eid in snap.congruence_edges if snap.in_forest[eid]]
    order += [eid for eid in snap.congruence_edges if not snap.in_forest[eid]]
    for eid in order:
        j = snap.edges[eid].just
        table.estimate[eid] = table.pair_tree_size(j.child_left, j.child_right)
    return table


def greedy_extract(snap: CGraphSnapshot, s: int, t: int, est: EstimateTable | None = None,
                   fuel: int = DEFAULT_FUEL, backend=None, stats: dict | None = None) -> ProofCert:
    """Top-down greedy certificate between vertices `s` and `t`.

    Fuel is global: each new obligation costs one unit.  A congruence pair
    that is already an obligation is reused for free unless that would make
    the obligations depend on themselves, in which case the forest proof is
    used instead.
    """
    if snap.root[s] != snap.root[t]:
        raise NotEquivalent(f"{snap.show(s)} and {snap.show(t)} are not equal")
    if fuel < 0:
        raise ValueError("fuel must be nonnegative")
    if est is None:
        est = estimate_sizes(snap)
    w = kernels.as_weights(est.estimate[eid] if e.is_congruence else 1
                           for eid, e in enumerate(snap.edges))
    if backend is None and not kernels.fits_compiled(w):
        backend = "python"
    search = snap.searcher(backend)

    def key(a, b):
        return (a, b) if a <= b else (b, a)

    ends = [(s, t)]
    index = {key(s, t): 0}
    deps: list[set] = [set()]
    plans: list = [None]
    queue = deque([0])
    left = fuel

    def reaches(src, dst):
        seen = {src}
        todo = [src]
        while todo:
            x = todo.pop()
            if x == dst:
                return True
            for y in deps[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return False

    while queue:
        i = queue.popleft()
        a, b = ends[i]
        _, path = search.run(w, a, b)
        hops = snap.orient(a, path)
        choices = []
        for eid, fwd in hops:
            e = snap.edges[eid]
            if not e.is_congruence:
                continue
            j = e.just
            l, r = (j.child_left, j.child_right) if fwd else (j.child_right, j.child_left)
            k = index.get(key(l, r))
            if k is not None:
                if reaches(k, i):
                    choices.append(None)
                else:
                    deps[i].add(k)
                    choices.append(k)
            elif left > 0:
                left -= 1
                k = len(ends)
                ends.append((l, r))
                index[key(l, r)] = k
                deps.append(set())
                plans.append(None)
                deps[i].add(k)
                queue.append(k)
                choices.append(k)
            else:
                choices.append(None)
        plans[i] = (hops, choices)

    built: dict[int, ProofCert] = {}

    def build(i):
        if i in built:
            return built[i]
        hops, choices = plans[i]
        picks = iter(choices)

        def sub_for(l, r):
            k = next(picks)
            if k is None:
                return forest_subproof(snap, l, r)
            c = build(k)
            return c if ends[k] == (l, r) else reverse_cert(c)

        built[i] = cert_from_path(snap, ends[i][0], hops, sub_for)
        return built[i]

    cert = build(0)
    if stats is not None:
        stats["fuel_spent"] = fuel - left
        stats["obligations"] = len(ends)
    return with_axioms(cert, snap.axioms)
