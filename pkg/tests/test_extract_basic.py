import pytest

from ccproof.certificate import (AxiomStep, ProofCert, Step, cert_dag_size, cert_tree_size,
                                 check_cert, cited_axioms, render_cert, with_axioms)
from ccproof.engine import NotEquivalent
from ccproof.extract_basic import forest_subproof, reduce_proof, unoptimized_proof
from ccproof.instance import parse_instance

from conftest import load, small_corpus
from oracles import min_axiom_subset, provable


def test_triangle_unoptimized_has_size_two(triangle):
    inst, snap, s, t = triangle
    cert = unoptimized_proof(snap, s, t)
    assert cert_tree_size(cert) == 2
    assert cited_axioms(cert) == {0, 1}


def test_identity_goal_is_empty(triangle):
    inst, snap, s, t = triangle
    cert = unoptimized_proof(snap, s, s)
    assert cert.steps == () and cert_tree_size(cert) == 0


def test_nested_unoptimized(nested):
    inst, snap, s, t = nested
    cert = unoptimized_proof(snap, s, t)
    assert (cert_tree_size(cert), cert_dag_size(cert)) == (2, 1)
    check_cert(cert, inst.axioms, inst.goal, inst.bank)


def test_not_equivalent():
    inst = parse_instance("(assert (= a b))\n(prove (= a c))\n")
    snap = inst.snapshot()
    with pytest.raises(NotEquivalent):
        unoptimized_proof(snap, *inst.goal_vertices(snap))


def test_reduce_keeps_triangle_at_two(triangle):
    inst, snap, s, t = triangle
    cert = unoptimized_proof(snap, s, t)
    out = reduce_proof(snap, inst.goal, cert)
    assert out is cert
    assert cert_dag_size(out) == 2


def test_reduce_removes_a_redundant_axiom():
    # a=c is cited through the congruence proof of (f a) = (f c) but a=b, b=c suffice
    inst = parse_instance("""
        (assert (= (f a) (f c)))
        (assert (= a b))
        (assert (= b c))
        (prove (= (g (f a) a) (g (f c) c)))
    """)
    snap = inst.snapshot()
    s, t = inst.goal_vertices(snap)
    cert = unoptimized_proof(snap, s, t)
    assert cited_axioms(cert) == {0, 1, 2}
    out = reduce_proof(snap, inst.goal, cert)
    assert cited_axioms(out) == {1, 2}
    assert cert_dag_size(out) == 2
    check_cert(out, inst.axioms, inst.goal, inst.bank)


def test_reduce_when_all_three_are_cited(triangle):
    # a -> b -> c -> a -> c cites a=b, b=c and a=c; ascending deletion drops
    # a=b (b=c, a=c remain), then b=c (a=c alone suffices), keeping only a=c
    inst, snap, s, t = triangle
    a, c = inst.goal
    b = inst.bank.intern_text("b")
    cert = with_axioms(ProofCert(a, (
        Step((), AxiomStep(0, True), b),
        Step((), AxiomStep(1, True), c),
        Step((), AxiomStep(2, False), a),
        Step((), AxiomStep(2, True), c),
    )), snap.axioms)
    check_cert(cert, inst.axioms, inst.goal, inst.bank)
    assert cert_dag_size(cert) == 3
    out = reduce_proof(snap, inst.goal, cert)
    assert cited_axioms(out) == {2}
    assert cert_tree_size(out) == 1
    check_cert(out, inst.axioms, inst.goal, inst.bank)


def test_single_axiom_unchanged(nested):
    inst, snap, s, t = nested
    cert = unoptimized_proof(snap, s, t)
    assert reduce_proof(snap, inst.goal, cert) is cert


def test_reduce_properties():
    for inst, snap, s, t in small_corpus(60, lo=3, hi=10, depth=2, seed=31):
        cert = unoptimized_proof(snap, s, t)
        out = reduce_proof(snap, inst.goal, cert)
        check_cert(out, inst.axioms, inst.goal, inst.bank)
        assert cert_dag_size(out) <= cert_dag_size(cert)
        assert cited_axioms(out) <= cited_axioms(cert)
        bank = inst.bank
        terms = [(bank.term(inst.axioms[i][0]), bank.term(inst.axioms[i][1])) for i in sorted(cited_axioms(out))]
        goal = (bank.term(inst.goal[0]), bank.term(inst.goal[1]))
        # the survivors are locally minimal: each one is needed
        for k in range(len(terms)):
            assert not provable(terms[:k] + terms[k + 1:], goal)
        # and no certificate can beat the instance-level minimum
        everything = [(bank.term(l), bank.term(r)) for l, r in inst.axioms]
        if len(everything) <= 8:
            assert cert_dag_size(out) >= min_axiom_subset(everything, goal)


def test_unoptimized_uses_forest_edges_only():
    for inst, snap, s, t in small_corpus(60, lo=3, hi=14, depth=3, seed=32):
        cert = unoptimized_proof(snap, s, t)
        forest_axioms = {snap.edges[e].just.axiom_id for e, f in enumerate(snap.in_forest)
                         if f and not snap.edges[e].is_congruence}
        assert cited_axioms(cert) <= forest_axioms
        assert cert_dag_size(cert) <= sum(snap.in_forest)


def test_deterministic():
    a = load("arith")
    b = load("arith")
    ca = unoptimized_proof(a[1], a[2], a[3])
    cb = unoptimized_proof(b[1], b[2], b[3])
    assert render_cert(ca, a[0].bank) == render_cert(cb, b[0].bank)


def test_forest_subproofs_are_memoized(arith):
    inst, snap, s, t = arith
    assert forest_subproof(snap, s, t) is forest_subproof(snap, s, t)
