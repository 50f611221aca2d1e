import random
from dataclasses import replace
from pathlib import Path

import pytest

from ccproof.certificate import (AxiomStep, BadSubproofEndpoints, CertSyntaxError, CongStep,
                                 EndMismatch, PositionMismatch, ProofCert, ResultMismatch,
                                 StartMismatch, Step, UnknownAxiom, cert_dag_size, cert_tree_size,
                                 check_cert, parse_cert, render_cert, reverse_cert)
from ccproof.extract_basic import reduce_proof, unoptimized_proof
from ccproof.greedy import greedy_extract
from ccproof.instance import parse_instance
from ccproof.treeopt import treeopt_extract

from conftest import small_corpus
from oracles import mutate, proves, replay

DATA = Path(__file__).parent / "data"


def golden():
    inst = parse_instance((DATA / "arith.smt").read_text())
    text = (DATA / "arith_greedy.cert").read_text()
    return inst, text, parse_cert(text, inst.bank)


def test_arith_sizes(arith):
    inst, snap, s, t = arith
    cert = greedy_extract(snap, s, t)
    assert cert_tree_size(cert) == 3
    assert cert_dag_size(cert) == 2


def test_empty_certificate():
    cert = ProofCert(0)
    assert cert_tree_size(cert) == 0 and cert_dag_size(cert) == 0
    assert cert.end == 0


def test_nested_sizes(nested):
    inst, snap, s, t = nested
    cert = unoptimized_proof(snap, s, t)
    assert (cert_tree_size(cert), cert_dag_size(cert)) == (2, 1)


def test_shared_subproof_counts_with_multiplicity():
    leaf = ProofCert(1, (Step((), AxiomStep(0), 2),))
    outer = ProofCert(10, (Step((0,), CongStep(leaf), 11), Step((1,), CongStep(leaf), 12)))
    assert cert_tree_size(outer) == 2
    assert cert_dag_size(outer) == 1


def test_golden_certificate_checks():
    inst, text, cert = golden()
    check_cert(cert, inst.axioms, inst.goal, inst.bank)


def test_golden_round_trip_is_bit_exact():
    inst, text, cert = golden()
    assert render_cert(cert, inst.bank) == text
    assert render_cert(cert, inst.bank) == render_cert(cert, inst.bank)


def test_truncated_file_is_a_syntax_error():
    inst, text, _ = golden()
    with pytest.raises(CertSyntaxError):
        parse_cert(text[: len(text) // 2], inst.bank)


@pytest.mark.parametrize("bad", [
    "(certificate)",
    "(proof (axioms) (goal (= a a)) (path a))",
    "(certificate (axioms (0 (= a b)) (0 (= a b))) (goal (= a b)) (path a (step (at) (axiom 0 fwd) b)))",
    "(certificate (axioms) (goal (= a b)) (path a))",
    "(certificate (axioms (0 (= a b))) (goal (= a b)) (path a (step (at) (axiom 0 up) b)))",
    "(certificate (axioms (0 (= a b))) (goal (= a b)) (path a (step (at x) (axiom 0 fwd) b)))",
    "(certificate (axioms (0 (= a b))) (goal (= a b)) (path a (step (at) (magic 0) b)))",
])
def test_malformed_certificates(bad):
    inst = parse_instance("(assert (= a b))\n(prove (= a b))\n")
    with pytest.raises(CertSyntaxError):
        parse_cert(bad, inst.bank)


def test_parse_rejects_axiom_missing_from_table():
    inst = parse_instance("(assert (= a b))\n(prove (= a b))\n")
    with pytest.raises(UnknownAxiom):
        parse_cert("(certificate (axioms) (goal (= a b)) (path a (step (at) (axiom 0 fwd) b)))",
                   inst.bank)


def test_corrupted_position_is_caught():
    inst, text, cert = golden()
    bad = text.replace("(step (at 1) (cong", "(step (at 0) (cong", 1)
    assert bad != text
    with pytest.raises((PositionMismatch, BadSubproofEndpoints)):
        check_cert(parse_cert(bad, inst.bank), inst.axioms, inst.goal, inst.bank)


def test_flipped_direction_is_a_position_mismatch():
    inst, text, cert = golden()
    bad = text.replace("fwd", "bwd", 1)
    with pytest.raises(PositionMismatch):
        check_cert(parse_cert(bad, inst.bank), inst.axioms, inst.goal, inst.bank)


def test_wrong_goal_is_an_end_mismatch():
    inst = parse_instance("(assert (= a b))\n(assert (= b c))\n(prove (= a c))\n")
    bank = inst.bank
    cert = parse_cert("(certificate (axioms (0 (= a b)) (1 (= b c))) (goal (= a c)) "
                      "(path a (step (at) (axiom 0 fwd) b) (step (at) (axiom 1 fwd) c)))", bank)
    check_cert(cert, inst.axioms, inst.goal, bank)
    with pytest.raises(EndMismatch):
        check_cert(cert, inst.axioms, (bank.intern_text("a"), bank.intern_text("b")), bank)
    with pytest.raises(StartMismatch):
        check_cert(cert, inst.axioms, (bank.intern_text("b"), bank.intern_text("c")), bank)


def test_foreign_axiom_table_is_unknown_axiom(arith, triangle):
    inst1 = arith[0]
    inst2, snap2, s, t = triangle
    text = render_cert(unoptimized_proof(snap2, s, t), inst2.bank)
    cert = parse_cert(text, inst1.bank)
    with pytest.raises(UnknownAxiom):
        check_cert(cert, inst1.axioms, inst1.goal, inst1.bank)


def test_out_of_range_axiom_is_unknown(triangle):
    inst, snap, s, t = triangle
    cert = ProofCert(inst.goal[0], (Step((), AxiomStep(9), inst.goal[1]),))
    with pytest.raises(UnknownAxiom):
        check_cert(cert, inst.axioms, inst.goal, inst.bank)


def test_bad_subproof_and_result(arith):
    inst, snap, s, t = arith
    cert = greedy_extract(snap, s, t)
    st = cert.steps[0]
    sub = st.just.sub
    moved = replace(cert, steps=(replace(st, just=CongStep(replace(sub, start=sub.end))),) + cert.steps[1:])
    with pytest.raises(BadSubproofEndpoints):
        check_cert(moved, inst.axioms, inst.goal, inst.bank)
    wrong = replace(cert, steps=(replace(st, result=inst.goal[0]),) + cert.steps[1:])
    with pytest.raises(ResultMismatch):
        check_cert(wrong, inst.axioms, inst.goal, inst.bank)


def all_certs(inst, snap, s, t):
    u = unoptimized_proof(snap, s, t)
    return [u, reduce_proof(snap, inst.goal, u), greedy_extract(snap, s, t), treeopt_extract(snap, s, t)]


def test_emitted_certificates_replay_independently():
    for inst, snap, s, t in small_corpus(80, lo=3, hi=16, depth=3, seed=21):
        for cert in all_certs(inst, snap, s, t):
            check_cert(cert, inst.axioms, inst.goal, inst.bank)
            assert proves(cert, inst.axioms, inst.goal, inst.bank)
            text = render_cert(cert, inst.bank)
            back = parse_cert(text, inst.bank)
            assert render_cert(back, inst.bank) == text
            assert cert_tree_size(back) == cert_tree_size(cert)
            dag, tree = cert_dag_size(cert), cert_tree_size(cert)
            assert dag <= tree
            # equal exactly when no axiom is cited twice
            steps = []
            stack = [cert]
            while stack:
                c = stack.pop()
                for x in c.steps:
                    if isinstance(x.just, CongStep):
                        stack.append(x.just.sub)
                    else:
                        steps.append(x.just.axiom_id)
            assert (dag == tree) == (len(set(steps)) == len(steps))


def test_reverse_cert_proves_the_reverse_goal():
    for inst, snap, s, t in small_corpus(30, lo=3, hi=12, depth=3, seed=22):
        cert = treeopt_extract(snap, s, t)
        back = reverse_cert(cert)
        check_cert(back, inst.axioms, inst.goal[::-1], inst.bank)
        assert cert_tree_size(back) == cert_tree_size(cert)


def test_mutations_are_rejected_or_harmless():
    rng = random.Random(5)
    corpus = small_corpus(40, lo=3, hi=12, depth=3, seed=23)
    rejected = 0
    for k in range(300):
        inst, snap, s, t = corpus[k % len(corpus)]
        cert = greedy_extract(snap, s, t)
        bad, _ = mutate(cert, rng, len(inst.bank), len(inst.axioms))
        try:
            check_cert(bad, inst.axioms, inst.goal, inst.bank)
        except Exception:
            rejected += 1
            assert not proves(bad, inst.axioms, inst.goal, inst.bank)
        else:
            # accepted mutants must still be sound proofs of the same goal
            assert proves(bad, inst.axioms, inst.goal, inst.bank)
    assert rejected >= 285


def test_replay_agrees_with_checker_on_golden():
    inst, text, cert = golden()
    start, end = replay(cert, inst.axioms, inst.bank)
    assert (start, end) == (inst.bank.term(inst.goal[0]), inst.bank.term(inst.goal[1]))
