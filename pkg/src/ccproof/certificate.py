"""Proof certificates: rewrite chains with nested congruence subproofs.

A certificate starts at a term and applies steps in order.  An axiom step
rewrites the subterm at `position` with an input equality; a congruence step
rewrites the subterm at `position` using a nested certificate between the old
and new subterm.  Every step carries the full term it produces, so checking a
certificate is a pure replay over hash-consed terms.

Certificates are immutable and may share subcertificates; metrics and the
checker visit each shared object once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .engine import Axiom, CGraphSnapshot
from .terms import ParseError, TermBank, read_sexpr, sexpr_to_term


@dataclass(frozen=True)
class AxiomStep:
    axiom_id: int
    forward: bool = True


@dataclass(frozen=True)
class CongStep:
    sub: ProofCert


@dataclass(frozen=True)
class Step:
    position: tuple[int, ...]
    just: Union[AxiomStep, CongStep]
    result: int


@dataclass(frozen=True)
class ProofCert:
    start: int
    steps: tuple[Step, ...] = ()
    # (axiom id, lhs, rhs) for every cited axiom; filled on top-level certificates only
    axioms: tuple[tuple[int, int, int], ...] = ()

    @property
    def end(self) -> int:
        return self.steps[-1].result if self.steps else self.start


def _subcerts(cert):
    """Yield every distinct certificate object reachable from `cert`, root first."""
    seen = {id(cert)}
    stack = [cert]
    while stack:
        c = stack.pop()
        yield c
        for st in c.steps:
            if isinstance(st.just, CongStep) and id(st.just.sub) not in seen:
                seen.add(id(st.just.sub))
                stack.append(st.just.sub)


def cert_tree_size(cert: ProofCert) -> int:
    """Axiom steps counted with multiplicity through every nested subproof."""
    sizes: dict[int, int] = {}
    stack = [(cert, False)]
    while stack:
        c, ready = stack.pop()
        if id(c) in sizes:
            continue
        if ready:
            total = 0
            for st in c.steps:
                total += sizes[id(st.just.sub)] if isinstance(st.just, CongStep) else 1
            sizes[id(c)] = total
            continue
        stack.append((c, True))
        for st in c.steps:
            if isinstance(st.just, CongStep) and id(st.just.sub) not in sizes:
                stack.append((st.just.sub, False))
    return sizes[id(cert)]


def cited_axioms(cert: ProofCert) -> set[int]:
    out = set()
    for c in _subcerts(cert):
        for st in c.steps:
            if isinstance(st.just, AxiomStep):
                out.add(st.just.axiom_id)
    return out


def cert_dag_size(cert: ProofCert) -> int:
    """Number of distinct input equalities used anywhere in the certificate."""
    return len(cited_axioms(cert))


def cert_from_path(snap: CGraphSnapshot, s: int, hops, sub_for) -> ProofCert:
    """Turn an oriented edge walk from vertex `s` into a certificate.

    `sub_for(l, r)` supplies the subcertificate for a congruence edge whose
    children are l (on the side we come from) and r.
    """
    steps = []
    for eid, fwd in hops:
        e = snap.edges[eid]
        nxt = e.v if fwd else e.u
        j = e.just
        if isinstance(j, Axiom):
            steps.append(Step((), AxiomStep(j.axiom_id, fwd == j.forward), snap.term_of[nxt]))
        else:
            l, r = (j.child_left, j.child_right) if fwd else (j.child_right, j.child_left)
            steps.append(Step((j.arg_index,), CongStep(sub_for(l, r)), snap.term_of[nxt]))
    return ProofCert(snap.term_of[s], tuple(steps))


def with_axioms(cert: ProofCert, axioms) -> ProofCert:
    """Attach the cited entries of the axiom table `axioms` (id -> (lhs, rhs))."""
    table = tuple((i,) + tuple(axioms[i]) for i in sorted(cited_axioms(cert)))
    return ProofCert(cert.start, cert.steps, table)


def reverse_cert(cert: ProofCert) -> ProofCert:
    done: dict[int, ProofCert] = {}

    def rev(c):
        hit = done.get(id(c))
        if hit is not None:
            return hit
        terms = [c.start] + [st.result for st in c.steps]
        steps = []
        for k in range(len(c.steps) - 1, -1, -1):
            st = c.steps[k]
            if isinstance(st.just, AxiomStep):
                just = AxiomStep(st.just.axiom_id, not st.just.forward)
            else:
                just = CongStep(rev(st.just.sub))
            steps.append(Step(st.position, just, terms[k]))
        out = ProofCert(terms[-1], tuple(steps))
        done[id(c)] = out
        return out

    out = rev(cert)
    return ProofCert(out.start, out.steps, cert.axioms)


# -- checking ---------------------------------------------------------------


class CheckError(Exception):
    pass


class StartMismatch(CheckError):
    pass


class EndMismatch(CheckError):
    pass


class PositionMismatch(CheckError):
    pass


class UnknownAxiom(CheckError):
    pass


class BadSubproofEndpoints(CheckError):
    pass


class ResultMismatch(CheckError):
    pass


def check_cert(cert: ProofCert, instance, goal, bank: TermBank) -> None:
    """Replay `cert` against the input equalities; raise CheckError on failure.

    `instance` maps axiom ids to (lhs, rhs) term ids; `goal` is (lhs, rhs).
    Only structural term operations are used: no closure, no c-graph.
    """
    def axiom(i):
        if not (isinstance(i, int) and 0 <= i < len(instance)) or instance[i] is None:
            raise UnknownAxiom(f"axiom {i} is not an input equality")
        return instance[i]

    for i, lhs, rhs in cert.axioms:
        if axiom(i) != (lhs, rhs):
            raise UnknownAxiom(f"axiom {i} does not match input equality {i}")
    if cert.start != goal[0]:
        raise StartMismatch(f"starts at {bank.show(cert.start)}, goal starts at {bank.show(goal[0])}")
    ends: dict[int, int] = {}

    def replay(c):
        hit = ends.get(id(c))
        if hit is not None:
            return hit
        cur = c.start
        for n, st in enumerate(c.steps):
            try:
                here = bank.subterm(cur, st.position)
            except IndexError:
                raise PositionMismatch(f"step {n}: position {st.position} is not in the term") from None
            if isinstance(st.just, AxiomStep):
                lhs, rhs = axiom(st.just.axiom_id)
                src, dst = (lhs, rhs) if st.just.forward else (rhs, lhs)
                if here != src:
                    raise PositionMismatch(
                        f"step {n}: {bank.show(here)} is not {bank.show(src)}")
                new = dst
            else:
                sub = st.just.sub
                if sub.start != here:
                    raise BadSubproofEndpoints(
                        f"step {n}: subproof starts at {bank.show(sub.start)}, not {bank.show(here)}")
                new = replay(sub)
            expected = bank.replace(cur, st.position, new)
            if st.result != expected:
                raise ResultMismatch(f"step {n}: result is not {bank.show(expected)}")
            cur = expected
        ends[id(c)] = cur
        return cur

    if replay(cert) != goal[1]:
        raise EndMismatch(f"ends at {bank.show(cert.end)}, goal ends at {bank.show(goal[1])}")


# -- file format ------------------------------------------------------------


class CertSyntaxError(ParseError):
    pass


def _path_tree(c, bank):
    out = ["path", bank.show(c.start)]
    for st in c.steps:
        at = ["at"] + [str(i) for i in st.position]
        if isinstance(st.just, AxiomStep):
            just = ["axiom", str(st.just.axiom_id), "fwd" if st.just.forward else "bwd"]
        else:
            just = ["cong", ["sub", _path_tree(st.just.sub, bank)]]
        out.append(["step", at, just, bank.show(st.result)])
    return out


def _fmt(x, ind):
    if isinstance(x, str):
        return x
    head = x[0]
    if head in ("certificate", "axioms"):
        body = x[1:]
    elif head == "path":
        head, body = "path " + x[1], x[2:]
    else:
        return "(" + " ".join(_fmt(c, ind) for c in x) + ")"
    pad = "\n" + " " * (ind + 2)
    return "(" + head + "".join(pad + _fmt(c, ind + 2) for c in body) + ")"


def render_cert(cert: ProofCert, bank: TermBank) -> str:
    tree = [
        "certificate",
        ["axioms"] + [[str(i), ["=", bank.show(l), bank.show(r)]] for i, l, r in cert.axioms],
        ["goal", ["=", bank.show(cert.start), bank.show(cert.end)]],
        _path_tree(cert, bank),
    ]
    return _fmt(tree, 0) + "\n"


def _expect(cond, msg):
    if not cond:
        raise CertSyntaxError(msg)


def _index(tok):
    _expect(isinstance(tok, str) and tok.isdigit(), f"expected an index, got {tok!r}")
    return int(tok)


def parse_cert(text: str, bank: TermBank) -> ProofCert:
    """Read a certificate file, interning its terms into `bank`."""
    try:
        sx = read_sexpr(text)
    except ParseError as exc:
        raise CertSyntaxError(str(exc)) from exc
    _expect(isinstance(sx, list) and len(sx) == 4 and sx[0] == "certificate", "not a certificate")
    arities = dict(bank.arity)

    def term(x):
        return bank.intern(sexpr_to_term(x, arities))

    def equation(x):
        _expect(isinstance(x, list) and len(x) == 3 and x[0] == "=", "expected (= LHS RHS)")
        return term(x[1]), term(x[2])

    axioms_sx, goal_sx, path_sx = sx[1:]
    _expect(isinstance(axioms_sx, list) and axioms_sx[:1] == ["axioms"], "expected (axioms ...)")
    table = {}
    for entry in axioms_sx[1:]:
        _expect(isinstance(entry, list) and len(entry) == 2, "expected (ID (= LHS RHS))")
        i = _index(entry[0])
        _expect(i not in table, f"axiom {i} listed twice")
        table[i] = equation(entry[1])
    _expect(isinstance(goal_sx, list) and len(goal_sx) == 2 and goal_sx[0] == "goal",
            "expected (goal (= S T))")
    goal = equation(goal_sx[1])

    def path(x):
        _expect(isinstance(x, list) and len(x) >= 2 and x[0] == "path", "expected (path TERM ...)")
        start = term(x[1])
        steps = []
        for st in x[2:]:
            _expect(isinstance(st, list) and len(st) == 4 and st[0] == "step",
                    "expected (step (at ...) JUST TERM)")
            at, just, result = st[1:]
            _expect(isinstance(at, list) and at[:1] == ["at"], "expected (at IDX*)")
            position = tuple(_index(i) for i in at[1:])
            _expect(isinstance(just, list) and just, "expected a justification")
            if just[0] == "axiom":
                _expect(len(just) == 3 and just[2] in ("fwd", "bwd"), "expected (axiom I fwd|bwd)")
                i = _index(just[1])
                if i not in table:
                    raise UnknownAxiom(f"axiom {i} is not in the certificate's table")
                j = AxiomStep(i, just[2] == "fwd")
            elif just[0] == "cong":
                _expect(len(just) == 2 and isinstance(just[1], list) and len(just[1]) == 2
                        and just[1][0] == "sub", "expected (cong (sub PATH))")
                j = CongStep(path(just[1][1]))
            else:
                raise CertSyntaxError(f"unknown justification {just[0]!r}")
            steps.append(Step(position, j, term(result)))
        return ProofCert(start, tuple(steps))

    body = path(path_sx)
    _expect((body.start, body.end) == goal, "goal does not match the path endpoints")
    return ProofCert(body.start, body.steps, tuple((i,) + table[i] for i in sorted(table)))
