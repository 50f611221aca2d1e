"""Ground terms, s-expression syntax and hash-consed interning."""

from __future__ import annotations

import re
from dataclasses import dataclass

TOKEN_RE = re.compile(r"[A-Za-z0-9_+*/.<>=!?-]+")
_LEX_RE = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")


class TermError(Exception):
    pass


class ParseError(TermError):
    pass


class UnbalancedParens(ParseError):
    pass


class EmptyExpression(ParseError):
    pass


class ArityMismatch(ParseError):
    pass


class UnknownId(TermError, KeyError):
    pass


@dataclass(frozen=True)
class Term:
    head: str
    args: tuple[Term, ...] = ()

    def __str__(self):
        if not self.args:
            return self.head
        return "(" + " ".join([self.head] + [str(a) for a in self.args]) + ")"


def tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _LEX_RE.match(text, pos)
        if m is None:  # pragma: no cover - the lexer regex matches any non-space run
            raise ParseError(f"cannot tokenize at offset {pos}")
        tok = m.group(1) or m.group(2) or m.group(3)
        if m.group(3) and not TOKEN_RE.fullmatch(tok):
            raise ParseError(f"bad token {tok!r}")
        tokens.append(tok)
        pos = m.end()
    return tokens


def read_sexprs(text: str) -> list:
    """Read every s-expression in `text` as nested lists of string atoms.

    `;` starts a comment running to the end of the line.
    """
    text = "\n".join(line.split(";", 1)[0] for line in text.splitlines())
    stack: list[list] = [[]]
    for tok in tokenize(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise UnbalancedParens("unexpected ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise UnbalancedParens(f"{len(stack) - 1} unclosed '('")
    return stack[0]


def read_sexpr(text: str):
    exprs = read_sexprs(text)
    if not exprs:
        raise EmptyExpression("no expression")
    if len(exprs) > 1:
        raise ParseError("trailing input after expression")
    return exprs[0]


def sexpr_to_term(sx, arities: dict[str, int] | None = None) -> Term:
    """Convert a nested-list s-expression into a Term, enforcing fixed arities."""
    if arities is None:
        arities = {}
    if isinstance(sx, str):
        head, args = sx, ()
    else:
        if not sx:
            raise EmptyExpression("empty application ()")
        if not isinstance(sx[0], str):
            raise ParseError("application head must be a symbol")
        head = sx[0]
        args = tuple(sexpr_to_term(a, arities) for a in sx[1:])
    seen = arities.setdefault(head, len(args))
    if seen != len(args):
        raise ArityMismatch(f"{head} used with arity {len(args)} and {seen}")
    return Term(head, args)


def parse_term(text: str) -> Term:
    return sexpr_to_term(read_sexpr(text))


class TermBank:
    """Append-only hash-consing table; equal structures get equal ids."""

    def __init__(self):
        self.heads: list[str] = []
        self.children: list[tuple[int, ...]] = []
        self.arity: dict[str, int] = {}
        self._ids: dict[tuple[str, tuple[int, ...]], int] = {}

    def __len__(self):
        return len(self.heads)

    def make(self, head: str, children: tuple[int, ...]) -> int:
        """Intern one node whose children are already interned."""
        key = (head, children)
        tid = self._ids.get(key)
        if tid is not None:
            return tid
        seen = self.arity.setdefault(head, len(children))
        if seen != len(children):
            raise ArityMismatch(f"{head} used with arity {len(children)} and {seen}")
        for c in children:
            self._check(c)
        tid = len(self.heads)
        self.heads.append(head)
        self.children.append(children)
        self._ids[key] = tid
        return tid

    def intern(self, t: Term) -> int:
        # explicit stack: terms from random generators can be deep
        out: dict[int, int] = {}
        stack = [(t, False)]
        while stack:
            node, ready = stack.pop()
            if ready:
                out[id(node)] = self.make(node.head, tuple(out[id(a)] for a in node.args))
            elif id(node) not in out:
                stack.append((node, True))
                stack.extend((a, False) for a in reversed(node.args))
        return out[id(t)]

    def intern_text(self, text: str) -> int:
        return self.intern(parse_term(text))

    def lookup(self, head: str, children: tuple[int, ...]) -> int | None:
        return self._ids.get((head, children))

    def _check(self, tid: int):
        if not (isinstance(tid, int) and 0 <= tid < len(self.heads)):
            raise UnknownId(tid)

    def term(self, tid: int) -> Term:
        self._check(tid)
        return Term(self.heads[tid], tuple(self.term(c) for c in self.children[tid]))

    def show(self, tid: int) -> str:
        self._check(tid)
        kids = self.children[tid]
        if not kids:
            return self.heads[tid]
        return "(" + " ".join([self.heads[tid]] + [self.show(c) for c in kids]) + ")"

    def subterm(self, tid: int, position) -> int:
        """Follow child indices from `tid`; raises IndexError on a bad path."""
        for i in position:
            kids = self.children[tid]
            if not 0 <= i < len(kids):
                raise IndexError(f"position {tuple(position)} leaves the term")
            tid = kids[i]
        return tid

    def replace(self, tid: int, position, new: int) -> int:
        """Return `tid` with the subterm at `position` replaced by `new`."""
        position = tuple(position)
        if not position:
            return new
        i = position[0]
        kids = self.children[tid]
        if not 0 <= i < len(kids):
            raise IndexError(f"position {position} leaves the term")
        repl = self.replace(kids[i], position[1:], new)
        return self.make(self.heads[tid], kids[:i] + (repl,) + kids[i + 1:])


def intern_term(bank: TermBank, t: Term) -> int:
    return bank.intern(t)


def print_term(bank: TermBank, tid: int) -> str:
    return bank.show(tid)
