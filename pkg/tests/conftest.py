import pytest

from ccproof.instance import gen_random_instance, parse_instance

ARITH = """\
(assert (= (+ a 0) a))
(assert (= (+ 2 2) 4))
(prove (= (f (+ a 0) (g (+ a 0) (+ 2 2))) (f a (g a 4))))
"""

TRIANGLE = """\
(assert (= a b))
(assert (= b c))
(assert (= a c))
(prove (= a c))
"""

NESTED = """\
; v0 = (+ (+ a 0) 0), v1 = (+ a 0), v2 = a
(assert (= (+ a 0) a))
(prove (= (+ (+ a 0) 0) a))
"""

TEXTS = {"arith": ARITH, "triangle": TRIANGLE, "nested": NESTED}


def load(name):
    inst = parse_instance(TEXTS[name])
    snap = inst.snapshot()
    s, t = inst.goal_vertices(snap)
    return inst, snap, s, t


def small_corpus(count, lo=4, hi=9, depth=2, seed=0, max_vertices=None, max_congruence=None):
    """Seeded random instances, optionally filtered by c-graph size."""
    out = []
    k = 0
    while len(out) < count:
        inst = gen_random_instance(lo + k % (hi - lo + 1), depth, seed * 100_000 + k)
        k += 1
        snap = inst.snapshot()
        c = snap.counts()
        if max_vertices is not None and c["vertices"] > max_vertices:
            continue
        if max_congruence is not None and c["congruence_edges"] > max_congruence:
            continue
        out.append((inst, snap) + inst.goal_vertices(snap))
    return out


@pytest.fixture
def arith():
    return load("arith")


@pytest.fixture
def triangle():
    return load("triangle")


@pytest.fixture
def nested():
    return load("nested")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
