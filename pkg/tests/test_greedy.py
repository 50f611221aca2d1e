import itertools

import pytest

from ccproof.certificate import cert_dag_size, cert_tree_size, check_cert, render_cert
from ccproof.engine import NotEquivalent
from ccproof.extract_basic import forest_subproof, unoptimized_proof
from ccproof.greedy import EstimateTable, estimate_sizes, greedy_extract, tarjan_lca
from ccproof.instance import parse_instance

from conftest import small_corpus


def naive_lca(snap, a, b):
    seen = set()
    x = a
    while True:
        seen.add(x)
        if snap.forest_parent[x] == x:
            break
        x = snap.forest_parent[x]
    y = b
    while y not in seen:
        y = snap.forest_parent[y]
    return y


def test_examples(arith, triangle, nested):
    inst, snap, s, t = arith
    cert = greedy_extract(snap, s, t)
    assert (cert_tree_size(cert), cert_dag_size(cert)) == (3, 2)
    inst, snap, s, t = triangle
    assert cert_tree_size(greedy_extract(snap, s, t)) == 1
    inst, snap, s, t = nested
    assert cert_tree_size(greedy_extract(snap, s, t)) == 2


def test_nested_estimate(nested):
    inst, snap, s, t = nested
    est = estimate_sizes(snap)
    assert est.estimate == {snap.congruence_edges[0]: 1}


def test_tarjan_lca_matches_naive():
    for inst, snap, s, t in small_corpus(40, lo=4, hi=20, depth=3, seed=61):
        pairs = [(a, b) for a, b in itertools.combinations(range(snap.n_vertices), 2)
                 if snap.root[a] == snap.root[b]]
        got = tarjan_lca(snap, pairs)
        for a, b in pairs:
            assert got[(a, b)] == naive_lca(snap, a, b)


def test_estimates_equal_forest_proof_sizes():
    for inst, snap, s, t in small_corpus(150, lo=4, hi=30, depth=3, seed=62):
        est = estimate_sizes(snap)
        assert set(est.estimate) == set(snap.congruence_edges)
        for eid, value in est.estimate.items():
            j = snap.edges[eid].just
            want = cert_tree_size(forest_subproof(snap, j.child_left, j.child_right))
            assert value == want
            if snap.in_forest[eid]:
                assert value == cert_tree_size(unoptimized_proof(snap, j.child_left, j.child_right))


def test_size_identity_through_lca():
    for inst, snap, s, t in small_corpus(40, lo=4, hi=20, depth=3, seed=63):
        est = EstimateTable(snap)
        est.finish()
        for a, b in itertools.combinations(range(snap.n_vertices), 2):
            if snap.root[a] != snap.root[b]:
                continue
            l = naive_lca(snap, a, b)
            got = est.distance_to_root(a) + est.distance_to_root(b) - 2 * est.distance_to_root(l)
            assert got == cert_tree_size(forest_subproof(snap, a, b))


def test_greedy_checks_and_beats_unoptimized():
    for inst, snap, s, t in small_corpus(150, lo=4, hi=30, depth=3, seed=64):
        cert = greedy_extract(snap, s, t)
        check_cert(cert, inst.axioms, inst.goal, inst.bank)
        assert cert_tree_size(cert) <= cert_tree_size(unoptimized_proof(snap, s, t))


def test_more_fuel_never_hurts():
    for inst, snap, s, t in small_corpus(80, lo=5, hi=30, depth=3, seed=65):
        est = estimate_sizes(snap)
        sizes = []
        for fuel in range(8):
            stats = {}
            cert = greedy_extract(snap, s, t, est, fuel=fuel, stats=stats)
            assert stats["fuel_spent"] <= fuel
            sizes.append(cert_tree_size(cert))
        assert sizes == sorted(sizes, reverse=True)


def test_zero_fuel_uses_forest_subproofs(arith):
    inst, snap, s, t = arith
    stats = {}
    cert = greedy_extract(snap, s, t, fuel=0, stats=stats)
    assert stats == {"fuel_spent": 0, "obligations": 1}
    check_cert(cert, inst.axioms, inst.goal, inst.bank)


def test_bad_arguments():
    inst = parse_instance("(assert (= a b))\n(prove (= a c))\n")
    snap = inst.snapshot()
    with pytest.raises(NotEquivalent):
        greedy_extract(snap, *inst.goal_vertices(snap))
    s, _ = inst.goal_vertices(snap)
    with pytest.raises(ValueError):
        greedy_extract(snap, s, s, fuel=-1)


def test_deterministic(arith):
    inst, snap, s, t = arith
    a = render_cert(greedy_extract(snap, s, t), inst.bank)
    snap2 = inst.snapshot()
    assert render_cert(greedy_extract(snap2, s, t), inst.bank) == a
