"""Instance files and the seeded random instance generator.

An instance file holds `(assert (= L R))` lines, in axiom-id order, followed
by exactly one `(prove (= S T))`.  `;` starts a comment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .engine import CGraphSnapshot, Engine, build_engine
from .terms import ParseError, TermBank, read_sexprs, sexpr_to_term

BINARY = ("g", "h")
UNARY = ("f",)
CONSTANTS = ("a", "b", "c", "d", "e", "k")
MAX_RETRIES = 1000


class GenerationFailed(Exception):
    pass


@dataclass
class Instance:
    bank: TermBank
    axioms: list  # (lhs, rhs) term ids; the index is the axiom id
    goal: tuple
    meta: dict = field(default_factory=dict)

    def engine(self) -> Engine:
        return build_engine(self.axioms, self.goal, bank=self.bank)

    def snapshot(self) -> CGraphSnapshot:
        return self.engine().snapshot()

    def goal_vertices(self, snap: CGraphSnapshot):
        return snap.vertex(self.goal[0]), snap.vertex(self.goal[1])


def _equation(sx, bank, arities, what):
    if not (isinstance(sx, list) and len(sx) == 2 and sx[0] == what):
        raise ParseError(f"expected ({what} (= LHS RHS))")
    eq = sx[1]
    if not (isinstance(eq, list) and len(eq) == 3 and eq[0] == "="):
        raise ParseError(f"expected (= LHS RHS) inside {what}")
    return (bank.intern(sexpr_to_term(eq[1], arities)),
            bank.intern(sexpr_to_term(eq[2], arities)))


def parse_instance(text: str, bank: TermBank | None = None) -> Instance:
    bank = bank if bank is not None else TermBank()
    arities = dict(bank.arity)
    forms = read_sexprs(text)
    if not forms:
        raise ParseError("empty instance")
    *asserts, last = forms
    axioms = [_equation(sx, bank, arities, "assert") for sx in asserts]
    goal = _equation(last, bank, arities, "prove")
    return Instance(bank, axioms, goal)


def render_instance(inst: Instance) -> str:
    show = inst.bank.show
    lines = []
    if inst.meta:
        lines.append("; " + " ".join(f"{k}={v}" for k, v in sorted(inst.meta.items())))
    lines += [f"(assert (= {show(l)} {show(r)}))" for l, r in inst.axioms]
    lines.append(f"(prove (= {show(inst.goal[0])} {show(inst.goal[1])}))")
    return "\n".join(lines) + "\n"


def _random_term(rng, bank, depth, pool):
    """Random term of depth <= depth; earlier terms are reused to create sharing."""
    fits = pool[depth][0]
    if fits and rng.random() < 0.3:
        return rng.choice(fits)
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        tid = bank.make(rng.choice(CONSTANTS), ())
    elif roll < 0.55:
        tid = bank.make(rng.choice(UNARY), (_random_term(rng, bank, depth - 1, pool),))
    else:
        head = rng.choice(BINARY)
        tid = bank.make(head, (_random_term(rng, bank, depth - 1, pool),
                               _random_term(rng, bank, depth - 1, pool)))
    for d in range(depth, len(pool)):
        terms, seen = pool[d]
        if tid not in seen:
            seen.add(tid)
            terms.append(tid)
    return tid


def gen_random_instance(n: int, depth: int = 2, seed: int = 0) -> Instance:
    """n random ground equalities over g/2, h/2, f/1 and six constants.

    The goal is a random pair of distinct input terms that the closure
    proves equal.  Everything is drawn from one seeded generator, so the
    result depends only on (n, depth, seed).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(f"ccproof:{n}:{depth}:{seed}")
    for _ in range(MAX_RETRIES):
        bank = TermBank()
        pool = [([], set()) for _ in range(depth + 1)]
        axioms = []
        for _ in range(n):
            lhs = _random_term(rng, bank, rng.randint(0, depth), pool)
            rhs = _random_term(rng, bank, rng.randint(0, depth), pool)
            axioms.append((lhs, rhs))
        n_input = len(bank)
        eng = build_engine(axioms, bank=bank)
        # candidate goal terms: input terms and their subterms, in id order
        classes = {}
        for tid in range(n_input):
            v = eng.vertex_of.get(tid)
            if v is not None:
                classes.setdefault(eng.find(v), []).append(tid)
        groups = [g for g in classes.values() if len(g) > 1]
        if not groups:
            continue
        # a random term with a partner, so larger classes are picked more often
        s = rng.choice([tid for g in groups for tid in g])
        group = next(g for g in groups if s in g)
        t = rng.choice([tid for tid in group if tid != s])
        meta = {"n": n, "depth": depth, "seed": seed}
        return Instance(bank, axioms, (s, t), meta)
    raise GenerationFailed(f"no provable goal after {MAX_RETRIES} tries (n={n}, depth={depth}, seed={seed})")
