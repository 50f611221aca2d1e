"""Proofs of minimal tree size.

Congruence-edge costs are computed bottom up in passes: pass k finds, for
every congruence justification pair, the cheapest proof whose congruence
subproofs nest at most k-1 deep.  Values only decrease, and at most |C|
passes reach the fixed point.  The final proof is a shortest path under the
fixed-point costs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .certificate import ProofCert, cert_from_path, with_axioms
from .engine import CGraphSnapshot, NotEquivalent


@dataclass
class DistTable:
    """Tree-size bounds per congruence justification pair (l < r).

    A missing pair is unbounded; dist(i, i) is 0.  `paths` keeps, per pair,
    the edge walk from the smaller vertex found when its value last dropped.
    """

    values: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict)
    passes: int = 0
    history: list | None = None

    def __getitem__(self, pair):
        a, b = pair
        if a == b:
            return 0
        return self.values.get((a, b) if a < b else (b, a))


def _pairs_in_order(snap):
    """Distinct justification pairs of congruence edges, in edge order."""
    by_pair = {}
    for eid, e in enumerate(snap.edges):
        if e.is_congruence:
            by_pair.setdefault(e.just.pair, []).append(eid)
    return by_pair


def _weights(snap, table, by_pair):
    w = kernels.as_weights(
        None if e.is_congruence else 1 for e in snap.edges)
    for pair, eids in by_pair.items():
        d = table.values.get(pair)
        if d is not None:
            for eid in eids:
                w[eid] = d
    return w


def _searcher_for(snap, w, backend):
    if backend is None and not kernels.fits_compiled(w):
        backend = "python"
    return snap.searcher(backend)


def optimal_tree_size_table(snap: CGraphSnapshot, backend=None, record_history=False) -> DistTable:
    """Fixed point of congruence-edge tree sizes.

    Updates are visible within a pass (edges are visited in discovery order);
    a pass that changes nothing ends the loop early.
    """
    cached = snap._cache.get(("treeopt", backend))
    if cached is not None and (cached.history is not None or not record_history):
        return cached
    by_pair = _pairs_in_order(snap)
    n_cong = sum(len(v) for v in by_pair.values())
    table = DistTable(history=[] if record_history else None)
    w = _weights(snap, table, by_pair)
    search = _searcher_for(snap, w, backend)
    for _ in range(n_cong):
        table.passes += 1
        changed = False
        for pair, eids in by_pair.items():
            cost, path = search.run(w, pair[0], pair[1])
            if path is None:
                continue
            old = table.values.get(pair)
            if old is None or cost < old:
                table.values[pair] = cost
                table.paths[pair] = path
                for eid in eids:
                    w[eid] = cost
                changed = True
                if backend is None and cost >= kernels.MAX_COMPILED_WEIGHT:
                    search = snap.searcher("python")
        if record_history:
            table.history.append(dict(table.values))
        if not changed:
            break
    snap._cache[("treeopt", backend)] = table
    return table


def treeopt_extract(snap: CGraphSnapshot, s: int, t: int, table: DistTable | None = None,
                    backend=None) -> ProofCert:
    """Certificate of minimal tree size between vertices `s` and `t`."""
    if snap.root[s] != snap.root[t]:
        raise NotEquivalent(f"{snap.show(s)} and {snap.show(t)} are not equal")
    if table is None:
        table = optimal_tree_size_table(snap, backend)
    by_pair = _pairs_in_order(snap)
    w = _weights(snap, table, by_pair)
    _, path = _searcher_for(snap, w, backend).run(w, s, t)
    if path is None:  # pragma: no cover - same class always has a finite path
        raise NotEquivalent(f"{snap.show(s)} and {snap.show(t)} are not connected")
    memo = {}

    def sub_for(l, r):
        # stored walks only use pairs whose value settled earlier, so this terminates
        if (l, r) in memo:
            return memo[(l, r)]
        a, b = (l, r) if l < r else (r, l)
        hops = snap.orient(a, table.paths[(a, b)])
        if l != a:
            hops = [(eid, not fwd) for eid, fwd in reversed(hops)]
        memo[(l, r)] = cert = cert_from_path(snap, l, hops, sub_for)
        return cert

    cert = cert_from_path(snap, s, snap.orient(s, path), sub_for)
    return with_axioms(cert, snap.axioms)
