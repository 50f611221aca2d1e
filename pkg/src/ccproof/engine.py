"""Congruence closure that keeps every equality edge it sees.

Unlike a plain e-graph, asserting an equality between terms that are already
equal still records an edge, and congruences discovered between equal terms
are recorded too (up to a cap).  The result is a c-graph: an undirected
multigraph over terms whose edges are justified either by an input equality
or by a single-argument congruence.  Edges that actually merged two classes
form the reduced forest used for unoptimized proofs and size estimates.
"""

from __future__ import annotations

from array import array
from collections import deque
from dataclasses import dataclass, field
from typing import Union

from . import kernels
from .terms import TermBank

CONGRUENCE_CAP_FACTOR = 10


class EngineError(Exception):
    pass


class UnknownTerm(EngineError, KeyError):
    pass


class PendingMerges(EngineError):
    pass


class NotEquivalent(EngineError):
    pass


class NoFinitePath(EngineError):
    pass


@dataclass(frozen=True)
class Axiom:
    axiom_id: int
    forward: bool = True


@dataclass(frozen=True)
class Congruence:
    child_left: int
    child_right: int
    arg_index: int

    @property
    def pair(self):
        a, b = self.child_left, self.child_right
        return (a, b) if a <= b else (b, a)


Justification = Union[Axiom, Congruence]


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    just: Justification

    @property
    def is_congruence(self):
        return isinstance(self.just, Congruence)

    def other(self, x):
        return self.v if x == self.u else self.u


@dataclass
class EngineStats:
    congruence_pairs: int = 0
    dropped_congruence_edges: int = 0
    intermediate_vertices: int = 0
    duplicate_assertions: int = 0


class Engine:
    def __init__(self, bank: TermBank | None = None):
        self.bank = bank if bank is not None else TermBank()
        self.vertex_of: dict[int, int] = {}
        self.term_of: list[int] = []
        self.kids: list[tuple[int, ...]] = []
        self.parent: list[int] = []
        self.size: list[int] = []
        self.uses: list[list[int]] = []
        self.sigs: dict[tuple, int] = {}
        self.edges: list[Edge] = []
        self.in_forest: list[bool] = []
        self.axioms: list[tuple[int, int]] = []
        self.axiom_edge: dict[int, int] = {}
        self._axiom_key: dict[tuple[int, int], int] = {}
        self._seen_pairs: set[tuple[int, int]] = set()
        self.pending: deque = deque()
        self.n_axiom_edges = 0
        self.n_congruence_edges = 0
        # congruence edges between already-equal vertices, in discovery order;
        # the snapshot keeps as many as the cap allows after forest edges
        self.redundant: list[Edge] = []
        self.stats = EngineStats()

    # -- union-find --------------------------------------------------------

    def find(self, v: int) -> int:
        parent = self.parent
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def _signature(self, v):
        find = self.find
        return (self.bank.heads[self.term_of[v]], tuple(find(k) for k in self.kids[v]))

    # -- terms -------------------------------------------------------------

    def add_term(self, tid: int) -> int:
        """Add `tid` and all its subterms; returns the vertex of `tid`."""
        v = self.vertex_of.get(tid)
        if v is not None:
            return v
        self.bank._check(tid)
        stack = [tid]
        while stack:
            top = stack[-1]
            if top in self.vertex_of:
                stack.pop()
                continue
            missing = [c for c in self.bank.children[top] if c not in self.vertex_of]
            if missing:
                stack.extend(reversed(missing))
                continue
            stack.pop()
            self._new_vertex(top, discover=True)
        return self.vertex_of[tid]

    def _new_vertex(self, tid, discover):
        v = len(self.term_of)
        self.vertex_of[tid] = v
        self.term_of.append(tid)
        kids = tuple(self.vertex_of[c] for c in self.bank.children[tid])
        self.kids.append(kids)
        self.parent.append(v)
        self.size.append(1)
        self.uses.append([])
        registered = set()
        for k in kids:
            r = self.find(k)
            if r not in registered:
                registered.add(r)
                self.uses[r].append(v)
        sig = self._signature(v)
        other = self.sigs.get(sig)
        if other is None:
            self.sigs[sig] = v
        elif discover:
            self._discover(v, other)
        return v

    def vertex(self, tid: int) -> int:
        try:
            return self.vertex_of[tid]
        except KeyError:
            raise UnknownTerm(tid) from None

    # -- equalities --------------------------------------------------------

    def assert_equal(self, lhs: int, rhs: int, axiom_id: int | None = None) -> int:
        """Record the input equality lhs = rhs and schedule the merge.

        An exact repeat of an earlier (lhs, rhs) pair adds no edge and
        returns the earlier axiom id.
        """
        vl = self.add_term(lhs)
        vr = self.add_term(rhs)
        if axiom_id is None:
            axiom_id = len(self.axioms)
        if axiom_id < len(self.axioms) and self.axioms[axiom_id] is not None:
            raise EngineError(f"axiom id {axiom_id} already used")
        while len(self.axioms) <= axiom_id:
            self.axioms.append(None)
        self.axioms[axiom_id] = (lhs, rhs)
        first = self._axiom_key.setdefault((lhs, rhs), axiom_id)
        if first != axiom_id:
            self.stats.duplicate_assertions += 1
            return first
        eid = self._record(Edge(vl, vr, Axiom(axiom_id)), forest=False)
        self.axiom_edge[axiom_id] = eid
        self.pending.append(eid)
        return axiom_id

    def _record(self, edge, forest):
        self.edges.append(edge)
        self.in_forest.append(forest)
        if edge.is_congruence:
            self.n_congruence_edges += 1
        else:
            self.n_axiom_edges += 1
        return len(self.edges) - 1

    def _discover(self, a, b):
        key = (a, b) if a < b else (b, a)
        if key in self._seen_pairs:
            return
        self._seen_pairs.add(key)
        self.stats.congruence_pairs += 1
        self.pending.append(key)

    def _merge(self, eid):
        e = self.edges[eid]
        ra, rb = self.find(e.u), self.find(e.v)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        moved = self.uses[rb]
        self.uses[rb] = []
        self.uses[ra].extend(moved)
        self.in_forest[eid] = True
        for x in moved:
            sig = self._signature(x)
            other = self.sigs.get(sig)
            if other is None:
                self.sigs[sig] = x
            elif other != x:
                self._discover(x, other)
        return True

    def _expand_congruence(self, p, q):
        """Link p and q by single-argument congruence edges, left to right."""
        heads = self.bank.heads
        head = heads[self.term_of[p]]
        kp, kq = self.kids[p], self.kids[q]
        cur = p
        cur_kids = list(kp)
        diffs = [i for i in range(len(kp)) if kp[i] != kq[i]]
        for n, i in enumerate(diffs):
            cur_kids[i] = kq[i]
            if n == len(diffs) - 1:
                nxt = q
            else:
                tid = self.bank.make(head, tuple(self.term_of[k] for k in cur_kids))
                nxt = self.vertex_of.get(tid)
                if nxt is None:
                    nxt = self._new_vertex(tid, discover=False)
                    self.stats.intermediate_vertices += 1
            edge = Edge(cur, nxt, Congruence(kp[i], kq[i], i))
            if self.find(cur) != self.find(nxt):
                self._merge(self._record(edge, forest=True))
            else:
                self.redundant.append(edge)
            cur = nxt

    def rebuild(self) -> int:
        """Run merges and congruence discovery to a fixpoint.

        Returns the number of congruence edges recorded by this call.
        """
        before = self.n_congruence_edges + len(self._kept_redundant())
        while self.pending:
            item = self.pending.popleft()
            if isinstance(item, tuple):
                self._expand_congruence(*item)
            else:
                self._merge(item)
        return self.n_congruence_edges + len(self._kept_redundant()) - before

    def _kept_redundant(self):
        room = CONGRUENCE_CAP_FACTOR * self.n_axiom_edges - self.n_congruence_edges
        return self.redundant[:max(0, room)]

    def are_equal(self, a: int, b: int) -> bool:
        va, vb = self.vertex(a), self.vertex(b)
        if self.pending:
            raise PendingMerges("call rebuild() first")
        return self.find(va) == self.find(vb)

    def snapshot(self) -> CGraphSnapshot:
        if self.pending:
            raise PendingMerges("call rebuild() first")
        n = len(self.term_of)
        root = [self.find(v) for v in range(n)]
        kept = self._kept_redundant()
        self.stats.dropped_congruence_edges = len(self.redundant) - len(kept)
        return CGraphSnapshot(
            bank=self.bank,
            term_of=tuple(self.term_of),
            vertex_of=dict(self.vertex_of),
            kids=tuple(self.kids),
            edges=tuple(self.edges) + tuple(kept),
            in_forest=tuple(self.in_forest) + (False,) * len(kept),
            root=tuple(root),
            axioms=tuple(self.axioms),
            dropped_congruence_edges=self.stats.dropped_congruence_edges,
        )


@dataclass(frozen=True, eq=False)
class CGraphSnapshot:
    """Frozen c-graph plus its reduced forest; input to every extractor."""

    bank: TermBank
    term_of: tuple[int, ...]
    vertex_of: dict[int, int]
    kids: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...]
    in_forest: tuple[bool, ...]
    root: tuple[int, ...]
    axioms: tuple[tuple[int, int] | None, ...]
    dropped_congruence_edges: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n = len(self.term_of)
        fparent = list(range(n))
        fedge = [-1] * n
        depth = [0] * n
        adj = [[] for _ in range(n)]
        for eid, e in enumerate(self.edges):
            if self.in_forest[eid]:
                adj[e.u].append((e.v, eid))
                adj[e.v].append((e.u, eid))
        seen = [False] * n
        for r in range(n):
            if self.root[r] != r:
                continue
            seen[r] = True
            queue = deque([r])
            while queue:
                x = queue.popleft()
                for y, eid in adj[x]:
                    if seen[y]:
                        continue
                    seen[y] = True
                    fparent[y] = x
                    fedge[y] = eid
                    depth[y] = depth[x] + 1
                    queue.append(y)
        object.__setattr__(self, "forest_parent", tuple(fparent))
        object.__setattr__(self, "forest_edge", tuple(fedge))
        object.__setattr__(self, "depth", tuple(depth))

        indptr = array("q", [0] * (n + 1))
        for e in self.edges:
            indptr[e.u + 1] += 1
            if e.v != e.u:
                indptr[e.v + 1] += 1
        for i in range(n):
            indptr[i + 1] += indptr[i]
        fill = list(indptr[:-1])
        adj_v = array("q", [0] * indptr[n])
        adj_e = array("q", [0] * indptr[n])
        for eid, e in enumerate(self.edges):
            adj_v[fill[e.u]] = e.v
            adj_e[fill[e.u]] = eid
            fill[e.u] += 1
            if e.v != e.u:
                adj_v[fill[e.v]] = e.u
                adj_e[fill[e.v]] = eid
                fill[e.v] += 1
        object.__setattr__(self, "csr", (indptr, adj_v, adj_e))

    # -- views -------------------------------------------------------------

    @property
    def n_vertices(self):
        return len(self.term_of)

    @property
    def congruence_edges(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.is_congruence]

    @property
    def axiom_edges(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if not e.is_congruence]

    def counts(self):
        c = sum(1 for e in self.edges if e.is_congruence)
        return {"vertices": self.n_vertices, "axiom_edges": len(self.edges) - c,
                "congruence_edges": c}

    def vertex(self, tid: int) -> int:
        try:
            return self.vertex_of[tid]
        except KeyError:
            raise UnknownTerm(tid) from None

    def show(self, v: int) -> str:
        return self.bank.show(self.term_of[v])

    def same_class(self, a: int, b: int) -> bool:
        return self.root[a] == self.root[b]

    def searcher(self, backend=None):
        backend = backend or kernels.BACKEND
        s = self._cache.get(("searcher", backend))
        if s is None:
            s = kernels.make_searcher(*self.csr, backend=backend)
            self._cache[("searcher", backend)] = s
        return s

    def orient(self, s: int, path) -> list[tuple[int, bool]]:
        """Pair each edge id of a walk starting at `s` with its direction."""
        hops = []
        cur = s
        for eid in path:
            e = self.edges[eid]
            fwd = e.u == cur
            hops.append((eid, fwd))
            cur = e.v if fwd else e.u
        return hops


def forest_path(snap: CGraphSnapshot, a: int, b: int) -> list[tuple[int, bool]]:
    """The unique reduced-forest path from `a` to `b`, found through their LCA."""
    if snap.root[a] != snap.root[b]:
        raise NotEquivalent(f"{snap.show(a)} and {snap.show(b)} are not equal")
    up, down = [], []
    x, y = a, b
    depth, fparent, fedge = snap.depth, snap.forest_parent, snap.forest_edge
    while depth[x] > depth[y]:
        up.append(fedge[x])
        x = fparent[x]
    while depth[y] > depth[x]:
        down.append(fedge[y])
        y = fparent[y]
    while x != y:
        up.append(fedge[x])
        x = fparent[x]
        down.append(fedge[y])
        y = fparent[y]
    down.reverse()
    return snap.orient(a, up + down)


def default_weights(snap: CGraphSnapshot):
    return [1] * len(snap.edges)


def weighted_shortest_path(snap: CGraphSnapshot, s: int, t: int, weights=None, backend=None):
    """Cheapest edge path from `s` to `t` in the whole c-graph.

    `weights` gives one nonnegative int per edge, or None for an unusable
    edge; by default every edge costs 1.  Returns (total, [(edge id,
    forward)]).
    """
    if snap.root[s] != snap.root[t]:
        raise NotEquivalent(f"{snap.show(s)} and {snap.show(t)} are not equal")
    if weights is None:
        weights = default_weights(snap)
    packed = kernels.as_weights(weights)
    if backend is None and not kernels.fits_compiled(packed):
        backend = "python"
    total, path = snap.searcher(backend).run(packed, s, t)
    if path is None:
        raise NoFinitePath(f"no finite-weight path from {snap.show(s)} to {snap.show(t)}")
    return total, snap.orient(s, path)


def build_engine(axioms, goal=None, bank=None, axiom_ids=None) -> Engine:
    """Engine over term-id pairs `axioms`, with optional goal terms added."""
    eng = Engine(bank)
    if goal is not None:
        eng.add_term(goal[0])
        eng.add_term(goal[1])
    for i, (lhs, rhs) in enumerate(axioms):
        eng.assert_equal(lhs, rhs, None if axiom_ids is None else axiom_ids[i])
    eng.rebuild()
    return eng
