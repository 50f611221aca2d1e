"""Baseline proof production: reduced-forest proofs and deletion-based reduction."""

from __future__ import annotations

from .certificate import ProofCert, cert_from_path, cited_axioms, with_axioms
from .engine import Axiom, CGraphSnapshot, NotEquivalent, build_engine, forest_path


def _forest_certs(snap: CGraphSnapshot) -> dict:
    return snap._cache.setdefault("forest_certs", {})


def forest_subproof(snap: CGraphSnapshot, s: int, t: int) -> ProofCert:
    """Unique reduced-forest proof from vertex `s` to `t`, without axiom table.

    Subproofs are memoized per snapshot and shared between callers.  Each
    congruence edge's subproof only uses forest edges older than the edge
    itself, so the expansion is well founded.
    """
    memo = _forest_certs(snap)
    if (s, t) in memo:
        return memo[(s, t)]
    if snap.root[s] != snap.root[t]:
        raise NotEquivalent(f"{snap.show(s)} and {snap.show(t)} are not equal")
    hops_of = {}
    stack = [(s, t)]
    while stack:
        key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        hops = hops_of.get(key)
        if hops is None:
            hops = hops_of[key] = forest_path(snap, *key)
        missing = []
        for eid, fwd in hops:
            j = snap.edges[eid].just
            if isinstance(j, Axiom):
                continue
            sub = (j.child_left, j.child_right) if fwd else (j.child_right, j.child_left)
            if sub not in memo:
                missing.append(sub)
        if missing:
            stack.extend(missing)
            continue
        memo[key] = cert_from_path(snap, key[0], hops, lambda l, r: memo[(l, r)])
        stack.pop()
    return memo[(s, t)]


def unoptimized_proof(snap: CGraphSnapshot, s: int, t: int) -> ProofCert:
    """Traditional proof production along the reduced forest."""
    return with_axioms(forest_subproof(snap, s, t), snap.axioms)


def _provable(snap, goal, axiom_ids):
    eng = build_engine([snap.axioms[i] for i in axiom_ids], goal, bank=snap.bank)
    return eng.are_equal(*goal)


def reduce_proof(snap: CGraphSnapshot, goal, cert: ProofCert) -> ProofCert:
    """Shrink `cert` by deleting input equalities one at a time.

    Each axiom cited by `cert` (ascending id) is dropped for good if the goal
    is still provable by congruence closure over the remaining cited axioms.
    The result is the forest proof of a fresh closure over the survivors.
    """
    used = sorted(cited_axioms(cert))
    keep = list(used)
    for x in used:
        trial = [a for a in keep if a != x]
        if _provable(snap, goal, trial):
            keep = trial
    if keep == used:
        return cert
    eng = build_engine([snap.axioms[i] for i in keep], goal, bank=snap.bank, axiom_ids=keep)
    small = eng.snapshot()
    out = forest_subproof(small, small.vertex(goal[0]), small.vertex(goal[1]))
    return with_axioms(out, snap.axioms)
