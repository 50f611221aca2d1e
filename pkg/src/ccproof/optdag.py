"""Minimal DAG size: validity fixpoint, exhaustive oracles and the ILP model.

The oracles are exponential and meant for tiny instances only; they are the
ground truth the polynomial extractors are tested against.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .engine import CGraphSnapshot

DEFAULT_DAG_LIMIT = 20
DEFAULT_MAX_VERTICES = 14
DEFAULT_MAX_CONGRUENCE = 4
MAX_BOUND = 10 ** 6


class TooLarge(Exception):
    pass


class BoundOverflow(TooLarge):
    pass


def fixpoint_e_connected(snap: CGraphSnapshot, edges, s: int, t: int) -> bool:
    """Are s and t e-connected using only the edge ids in `edges`?

    Non-congruence edges are valid outright; a congruence edge becomes valid
    once its children are connected through edges already known valid (it
    is never used to justify itself).  Iterates to the least fixpoint.
    """
    uf = {}

    def find(x):
        root = x
        while uf.get(root, root) != root:
            root = uf[root]
        while uf.get(x, x) != root:
            uf[x], x = root, uf[x]
        return root

    waiting = []
    for eid in edges:
        e = snap.edges[eid]
        if e.is_congruence:
            waiting.append(e)
        else:
            uf[find(e.u)] = find(e.v)
    changed = True
    while changed and waiting:
        changed = False
        still = []
        for e in waiting:
            if find(e.just.child_left) == find(e.just.child_right):
                uf[find(e.u)] = find(e.v)
                changed = True
            else:
                still.append(e)
        waiting = still
    return find(s) == find(t)


def brute_min_dag(snap: CGraphSnapshot, s: int, t: int, limit: int = DEFAULT_DAG_LIMIT):
    """Smallest set of input-equality edges keeping s and t e-connected.

    All congruence edges stay available.  Subsets are tried by size and then
    lexicographically, so the witness is the lexicographically least one.
    Returns (size, witness edge ids).
    """
    if s == t:
        return 0, ()
    plain = [eid for eid, e in enumerate(snap.edges) if not e.is_congruence and e.u != e.v]
    if len(plain) > limit:
        raise TooLarge(f"{len(plain)} input-equality edges exceed the limit of {limit}")
    cong = snap.congruence_edges
    for k in range(len(plain) + 1):
        for combo in itertools.combinations(plain, k):
            if fixpoint_e_connected(snap, list(combo) + cong, s, t):
                return k, combo
    raise TooLarge("goal is not provable")  # pragma: no cover - callers check equality first


def brute_min_tree(snap: CGraphSnapshot, s: int, t: int, max_vertices: int = DEFAULT_MAX_VERTICES,
                   max_congruence: int = DEFAULT_MAX_CONGRUENCE):
    """Minimal tree size by enumerating simple paths.

    A congruence edge's subproof may not use that edge or any congruence
    edge it is nested under.  Returns None when s and t are not connected.
    """
    if s == t:
        return 0
    if snap.n_vertices > max_vertices:
        raise TooLarge(f"{snap.n_vertices} vertices exceed the limit of {max_vertices}")
    if len(snap.congruence_edges) > max_congruence:
        raise TooLarge(f"{len(snap.congruence_edges)} congruence edges exceed the limit of {max_congruence}")
    adj = [[] for _ in range(snap.n_vertices)]
    for eid, e in enumerate(snap.edges):
        if e.u != e.v:
            adj[e.u].append((eid, e.v))
            adj[e.v].append((eid, e.u))
    memo = {}

    def best(a, b, banned):
        key = (min(a, b), max(a, b), banned)
        if key in memo:
            return memo[key]
        found = None
        visited = {a}

        def walk(v, cost):
            nonlocal found
            if v == b:
                if found is None or cost < found:
                    found = cost
                return
            for eid, u in adj[v]:
                if u in visited or eid in banned:
                    continue
                e = snap.edges[eid]
                if e.is_congruence:
                    sub = best(e.just.child_left, e.just.child_right, banned | {eid})
                    if sub is None:
                        continue
                    step = sub
                else:
                    step = 1
                if found is not None and cost + step >= found:
                    continue
                visited.add(u)
                walk(u, cost + step)
                visited.discard(u)

        walk(a, 0)
        memo[key] = found
        return found

    return best(s, t, frozenset())


# -- ILP model ----------------------------------------------------------------


def path_bound(n_edges: int, n_congruence: int) -> int:
    """Upper bound on proof-path lengths used by the no-cycle constraints."""
    return max(n_edges, n_congruence ** (n_congruence + 1) * n_edges)


@dataclass
class IlpSummary:
    variables: int
    constraints: int
    bound: int
    families: dict = field(default_factory=dict)

    def line(self):
        fam = " ".join(f"{k}={v}" for k, v in self.families.items())
        return f"variables={self.variables} constraints={self.constraints} ell={self.bound} {fam}"


def _name(prefix, *idx):
    return prefix + "_" + "_".join(str(i) for i in idx)


def _expr(terms):
    out = []
    for coef, var in terms:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        out.append(f"{sign} {body}")
    text = " ".join(out)
    return text[2:] if text.startswith("+ ") else text


def _wrap(head, terms, tail):
    # keep lines short for strict LP readers
    chunks = [terms[i:i + 8] for i in range(0, len(terms), 8)] or [[]]
    lines = [head + _expr(chunks[0])]
    for ch in chunks[1:]:
        e = _expr(ch)
        lines.append("   " + (e if e.startswith("-") else "+ " + e))
    lines[-1] += tail
    return lines


def emit_ilp(snap: CGraphSnapshot, s: int, t: int, sink) -> IlpSummary:
    """Write the minimum-DAG-size ILP for proving s = t as LP text to `sink`.

    Variables (i, j, k, l, r are vertex ids):
      S_i_j      input-equality edge between i and j selected (both orders)
      M_i_j_l_r  congruence edge i-j justified by l = r selected (both orders)
      V_i_j      edge i-j usable (i < j)
      P_i_k_j    i reaches j with first hop i-k (only for adjacent i, k)
      C_i_j      i e-connected to j (i != j; C_i_i is 1)
      D_i_j      no-cycle distance in [1, ell] (i != j; D_i_i is 0)
    Variables the full model would force to zero (S and M for
    absent edges, P through a non-edge) are not emitted.
    """
    n_edges = len(snap.edges)
    n_cong = len(snap.congruence_edges)
    ell = path_bound(n_edges, n_cong)
    if ell > MAX_BOUND:
        raise BoundOverflow(f"path bound {ell} exceeds {MAX_BOUND}")

    plain_pairs = set()
    cong_keys = set()
    adjacent = set()
    for e in snap.edges:
        if e.u == e.v:
            continue
        adjacent.add((e.u, e.v))
        adjacent.add((e.v, e.u))
        if e.is_congruence:
            j = e.just
            cong_keys.add((e.u, e.v, j.child_left, j.child_right))
            cong_keys.add((e.v, e.u, j.child_right, j.child_left))
        else:
            plain_pairs.add((e.u, e.v))
            plain_pairs.add((e.v, e.u))
    verts = sorted({v for p in adjacent for v in p} | {s, t}
                   | {x for k in cong_keys for x in k[2:]})

    def V(i, j):
        return _name("V", min(i, j), max(i, j))

    def C(i, j):
        return _name("C", i, j)

    def D(i, j):
        return _name("D", i, j)

    rows = []
    fam = {"S": 0, "M": 0, "P": 0, "C": 0, "V": 0, "D": 0}
    binaries, generals, bounds = [], [], []

    for i, j in sorted(plain_pairs):
        binaries.append(_name("S", i, j))
        fam["S"] += 1
        if i < j:
            rows.append(("edges_sym", (i, j), [(1, _name("S", i, j)), (-1, _name("S", j, i))], "=", 0))
    for key in sorted(cong_keys):
        i, j, l, r = key
        binaries.append(_name("M", *key))
        fam["M"] += 1
        if i < j:
            rows.append(("cong_sym", key, [(1, _name("M", *key)), (-1, _name("M", j, i, r, l))], "=", 0))
    undirected = sorted((i, j) for i, j in adjacent if i < j)
    for i, j in undirected:
        binaries.append(V(i, j))
        fam["V"] += 1
        lhs = [(1, V(i, j))]
        if (i, j) in plain_pairs:
            lhs.append((-1, _name("S", i, j)))
        lhs += [(-1, _name("M", *k)) for k in sorted(cong_keys) if k[:2] == (i, j)]
        rows.append(("valid", (i, j), lhs, "<=", 0))
    for key in sorted(cong_keys):
        i, j, l, r = key
        if l != r:
            rows.append(("valid_cong", key, [(1, _name("M", *key)), (-1, C(l, r))], "<=", 0))
            rows.append(("nocycle_cong", key, [(-ell, _name("M", *key)), (1, D(i, j)), (-1, D(l, r))],
                         ">=", -ell))
    for i in verts:
        for j in verts:
            if i == j:
                continue
            binaries.append(C(i, j))
            generals.append(D(i, j))
            bounds.append(f" 1 <= {D(i, j)} <= {ell}")
            fam["C"] += 1
            fam["D"] += 1
            firsts = sorted(k for k in verts if k != i and (i, k) in adjacent)
            total = [(1, C(i, j))]
            for k in firsts:
                p = _name("P", i, k, j)
                binaries.append(p)
                fam["P"] += 1
                total.append((-1, p))
                rows.append(("path_valid", (i, k, j), [(1, p), (-1, V(i, k))], "<=", 0))
                if k != j:
                    rows.append(("path_conn", (i, k, j), [(1, p), (-1, C(k, j))], "<=", 0))
                nc = [(-ell, p), (1, D(i, j)), (-1, D(i, k))]
                if k != j:
                    nc.append((-1, D(k, j)))
                rows.append(("nocycle_path", (i, k, j), nc, ">=", -ell))
            rows.append(("paths", (i, j), total, "=", 0))
    if s != t:
        rows.append(("goal", (s, t), [(1, C(s, t))], "=", 1))

    objective = [(1, _name("S", i, j)) for i, j in sorted(plain_pairs) if i < j]
    out = ["\\ minimum DAG size proof of "
           f"{snap.show(s)} = {snap.show(t)}", "Minimize"]
    out += _wrap(" dag_size: ", objective, "") if objective else [" dag_size: 0 S_dummy"]
    out.append("Subject To")
    for family, idx, terms, op, rhs in rows:
        out += _wrap(f" {_name(family, *idx)}: ", terms, f" {op} {rhs}")
    out.append("Bounds")
    out += bounds
    if not objective:
        out.append(" S_dummy = 0")
    out.append("Binary")
    out += [" " + b for b in binaries]
    out.append("General")
    out += [" " + g for g in generals]
    out.append("End")
    sink.write("\n".join(out) + "\n")
    n_vars = len(binaries) + len(generals) + (0 if objective else 1)
    return IlpSummary(n_vars, len(rows), ell, fam)


# -- LP reader ----------------------------------------------------------------

_TERM_RE = re.compile(r"([+-])?\s*(\d+(?:\.\d+)?)?\s*([A-Za-z_][A-Za-z0-9_]*)")


@dataclass
class LpModel:
    sense: str
    objective: dict
    constraints: dict
    bounds: dict
    binaries: list
    generals: list

    @property
    def variables(self):
        names = set(self.objective) | set(self.bounds) | set(self.binaries) | set(self.generals)
        for coefs, _, _ in self.constraints.values():
            names |= set(coefs)
        return names


class LpSyntaxError(ValueError):
    pass


def _linear(text):
    coefs = {}
    text = text.strip()
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if m is None:
            raise LpSyntaxError(f"bad linear expression near {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = float(m.group(2)) if m.group(2) else 1.0
        coefs[m.group(3)] = coefs.get(m.group(3), 0) + sign * (int(mag) if mag.is_integer() else mag)
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return coefs


def read_lp(text: str) -> LpModel:
    """Parse the LP subset written by emit_ilp."""
    section = None
    statements: dict[str, list[str]] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("minimize", "maximize", "subject to", "bounds", "binary", "general", "end"):
            section = low
            statements.setdefault(section, [])
            continue
        if section is None:
            raise LpSyntaxError(f"text outside a section: {line!r}")
        rows = statements[section]
        if section in ("minimize", "maximize", "subject to") and ":" not in line:
            if not rows:
                raise LpSyntaxError(f"continuation without a row: {line!r}")
            rows[-1] += " " + line
        else:
            rows.append(line)
    if "end" not in statements:
        raise LpSyntaxError("missing End")
    sense = "minimize" if "minimize" in statements else "maximize"
    objective = {}
    for row in statements.get(sense, []):
        _, expr = row.split(":", 1)
        objective.update(_linear(expr))
    constraints = {}
    for row in statements.get("subject to", []):
        name, body = row.split(":", 1)
        m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", body)
        if m is None:
            raise LpSyntaxError(f"bad constraint {row!r}")
        constraints[name.strip()] = (_linear(m.group(1)), m.group(2), int(m.group(3)))
    bounds = {}
    for row in statements.get("bounds", []):
        m = re.fullmatch(r"(-?\d+)\s*<=\s*(\w+)\s*<=\s*(-?\d+)", row)
        if m:
            bounds[m.group(2)] = (int(m.group(1)), int(m.group(3)))
            continue
        m = re.fullmatch(r"(\w+)\s*=\s*(-?\d+)", row)
        if m is None:
            raise LpSyntaxError(f"bad bound {row!r}")
        bounds[m.group(1)] = (int(m.group(2)), int(m.group(2)))
    binaries = [n for row in statements.get("binary", []) for n in row.split()]
    generals = [n for row in statements.get("general", []) for n in row.split()]
    return LpModel(sense, objective, constraints, bounds, binaries, generals)
