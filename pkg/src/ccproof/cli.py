"""Command-line interface: prove, check, ilp and bench."""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .certificate import (CheckError, cert_dag_size, cert_tree_size, check_cert, parse_cert,
                          render_cert)
from .engine import NotEquivalent
from .extract_basic import reduce_proof, unoptimized_proof
from .greedy import DEFAULT_FUEL, estimate_sizes, greedy_extract
from .instance import GenerationFailed, gen_random_instance, parse_instance
from .optdag import (DEFAULT_DAG_LIMIT, BoundOverflow, TooLarge, brute_min_dag, brute_min_tree,
                     emit_ilp)
from .terms import ParseError
from .treeopt import optimal_tree_size_table, treeopt_extract

EXIT_PARSE = 1
EXIT_CHECK = 2
EXIT_NOT_EQUAL = 2
EXIT_TOO_LARGE = 3
EXIT_USAGE = 64

ALGORITHMS = ("unopt", "reduce", "greedy", "treeopt", "brute-dag", "brute-tree")
CERT_ALGORITHMS = ("unopt", "reduce", "greedy", "treeopt")
CGRAPH_ALGORITHMS = ("unopt", "greedy", "treeopt")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


@dataclass
class RunReport:
    algorithm: str
    tree_size: int | None
    dag_size: int | None
    time: float
    passes: int | None
    fuel_spent: int | None
    vertices: int
    axiom_edges: int
    congruence_edges: int


def run_algorithm(inst, snap, algo, fuel=DEFAULT_FUEL):
    """Run one algorithm; returns (cert or None, extras dict)."""
    s, t = inst.goal_vertices(snap)
    if snap.root[s] != snap.root[t]:
        raise NotEquivalent("goal is not provable from the assertions")
    extra = {}
    if algo == "unopt":
        cert = unoptimized_proof(snap, s, t)
    elif algo == "reduce":
        cert = reduce_proof(snap, inst.goal, unoptimized_proof(snap, s, t))
    elif algo == "greedy":
        stats = {}
        cert = greedy_extract(snap, s, t, estimate_sizes(snap), fuel=fuel, stats=stats)
        extra["fuel_spent"] = stats["fuel_spent"]
    elif algo == "treeopt":
        table = optimal_tree_size_table(snap)
        cert = treeopt_extract(snap, s, t, table)
        extra["passes"] = table.passes
    elif algo == "brute-dag":
        size, witness = brute_min_dag(snap, s, t)
        extra["dag_size"] = size
        extra["witness"] = sorted(snap.edges[e].just.axiom_id for e in witness)
        return None, extra
    elif algo == "brute-tree":
        extra["tree_size"] = brute_min_tree(snap, s, t)
        return None, extra
    else:
        raise UsageError(f"unknown algorithm {algo!r}")
    return cert, extra


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_prove(args):
    try:
        inst = parse_instance(_read(args.file))
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    snap = inst.snapshot()
    started = time.perf_counter()
    try:
        cert, extra = run_algorithm(inst, snap, args.algo, args.fuel)
    except NotEquivalent as exc:
        print(f"NotEquivalent: {exc}", file=sys.stderr)
        return EXIT_NOT_EQUAL
    except TooLarge as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    elapsed = time.perf_counter() - started
    counts = snap.counts()
    report = RunReport(
        algorithm=args.algo,
        tree_size=cert_tree_size(cert) if cert is not None else extra.get("tree_size"),
        dag_size=cert_dag_size(cert) if cert is not None else extra.get("dag_size"),
        time=round(elapsed, 6),
        passes=extra.get("passes"),
        fuel_spent=extra.get("fuel_spent"),
        vertices=counts["vertices"],
        axiom_edges=counts["axiom_edges"],
        congruence_edges=counts["congruence_edges"],
    )
    out = asdict(report)
    if "witness" in extra:
        out["witness"] = extra["witness"]
    if cert is not None:
        path = args.out or args.file + ".cert"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_cert(cert, inst.bank))
        out["certificate"] = path
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_check(args):
    try:
        inst = parse_instance(_read(args.file))
        cert = parse_cert(_read(args.cert), inst.bank)
        check_cert(cert, inst.axioms, inst.goal, inst.bank)
    except CheckError as exc:
        print(f"{type(exc).__name__}: {exc}")
        return EXIT_CHECK
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print("ok")
    return 0


def cmd_ilp(args):
    try:
        inst = parse_instance(_read(args.file))
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    snap = inst.snapshot()
    s, t = inst.goal_vertices(snap)
    buf = io.StringIO()
    try:
        summary = emit_ilp(snap, s, t, buf)
    except BoundOverflow as exc:
        print(f"BoundOverflow: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())
    print(summary.line())
    return 0


# -- bench --------------------------------------------------------------------

BRUTE_TREE_LIMITS = (14, 4)


def _parse_range(text):
    lo, sep, hi = text.partition("..")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return lo, hi


def bench_trial(trial, lo, hi, seed, depth, fuel):
    """One bench row, as a dict with only deterministic fields."""
    n = lo + trial % (hi - lo + 1)
    inst_seed = seed * 1_000_003 + trial
    row = {"trial": trial, "n": n, "seed": inst_seed}
    try:
        inst = gen_random_instance(n, depth, inst_seed)
    except GenerationFailed:
        row["skipped"] = "generation failed"
        return row
    snap = inst.snapshot()
    s, t = inst.goal_vertices(snap)
    counts = snap.counts()
    row.update(vertices=counts["vertices"], axiom_edges=counts["axiom_edges"],
               congruence_edges=counts["congruence_edges"])
    checked = True
    for algo in CERT_ALGORITHMS:
        cert, extra = run_algorithm(inst, snap, algo, fuel)
        row[algo] = {"tree": cert_tree_size(cert), "dag": cert_dag_size(cert)}
        if "passes" in extra:
            row[algo]["passes"] = extra["passes"]
        if "fuel_spent" in extra:
            row[algo]["fuel_spent"] = extra["fuel_spent"]
        try:
            check_cert(cert, inst.axioms, inst.goal, inst.bank)
        except CheckError:
            checked = False
    row["checked"] = checked
    if counts["axiom_edges"] <= DEFAULT_DAG_LIMIT:
        row["brute_dag"] = brute_min_dag(snap, s, t)[0]
    max_v, max_c = BRUTE_TREE_LIMITS
    if counts["vertices"] <= max_v and counts["congruence_edges"] <= max_c:
        row["brute_tree"] = brute_min_tree(snap, s, t, max_v, max_c)
    row["violations"] = row_violations(row)
    return row


def row_violations(row):
    """Names of the cross-algorithm invariants a bench row breaks."""
    if "skipped" in row:
        return []
    bad = []
    u, r, g, o = (row[a] for a in CERT_ALGORITHMS)
    if not o["tree"] <= g["tree"] <= u["tree"]:
        bad.append("tree-order")
    for a in CERT_ALGORITHMS:
        if row[a]["dag"] > row[a]["tree"]:
            bad.append(f"dag>tree:{a}")
    if r["dag"] > u["dag"]:
        bad.append("reduce-dag")
    if "brute_tree" in row and row["brute_tree"] != o["tree"]:
        bad.append("treeopt-not-minimal")
    # reduce re-runs closure from scratch and may use congruences the c-graph
    # never recorded, so the c-graph oracle only bounds the other three
    if "brute_dag" in row and any(row["brute_dag"] > row[a]["dag"] for a in CGRAPH_ALGORITHMS):
        bad.append("brute-dag")
    if not row["checked"]:
        bad.append("check")
    return bad


def bench_aggregate(rows):
    done = [r for r in rows if "skipped" not in r]
    agg = {"instances": len(done), "skipped": len(rows) - len(done)}
    if done:
        for a in ("unopt", "reduce", "greedy"):
            ratios = [r[a]["tree"] / r["treeopt"]["tree"] for r in done if r["treeopt"]["tree"]]
            agg[f"{a}_tree_ratio"] = round(sum(ratios) / len(ratios), 6) if ratios else None
        agg["greedy_eq_treeopt"] = round(
            sum(r["greedy"]["tree"] == r["treeopt"]["tree"] for r in done) / len(done), 6)
        agg["violations"] = sum(len(r["violations"]) for r in done)
    return agg


def _threads():
    cap = os.environ.get("CCPROOF_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def run_bench(lo, hi, trials, seed, fuel=DEFAULT_FUEL, depth=2, workers=None):
    workers = _threads() if workers is None else workers
    args = [(i, lo, hi, seed, depth, fuel) for i in range(trials)]
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(bench_trial, *zip(*args)))
    else:
        rows = [bench_trial(*a) for a in args]
    return rows, bench_aggregate(rows)


def format_table(rows, agg):
    plain = "E\\C"
    head = (f"{'trial':>5} {'n':>4} {'V':>5} {plain:>5} {'C':>5}  "
            f"{'unopt':>6} {'reduce':>6} {'greedy':>6} {'treeopt':>7} {'b-tree':>6} {'b-dag':>5}  ok")
    lines = [head]
    for r in rows:
        if "skipped" in r:
            lines.append(f"{r['trial']:>5} {r['n']:>4}  skipped: {r['skipped']}")
            continue

        def cell(a):
            return f"{r[a]['tree']}/{r[a]['dag']}"

        bt = r.get("brute_tree", "-")
        bd = r.get("brute_dag", "-")
        ok = "yes" if not r["violations"] else ",".join(r["violations"])
        lines.append(
            f"{r['trial']:>5} {r['n']:>4} {r['vertices']:>5} {r['axiom_edges']:>5} "
            f"{r['congruence_edges']:>5}  {cell('unopt'):>6} {cell('reduce'):>6} "
            f"{cell('greedy'):>6} {cell('treeopt'):>7} {bt!s:>6} {bd!s:>5}  {ok}")
    lines.append("cells are tree/dag sizes")
    lines.append("summary " + " ".join(f"{k}={v}" for k, v in agg.items()))
    return "\n".join(lines) + "\n"


def cmd_bench(args):
    lo, hi = args.n
    rows, agg = run_bench(lo, hi, args.trials, args.seed, args.fuel, args.depth)
    sys.stdout.write(format_table(rows, agg))
    if args.jsonl:
        with open(args.jsonl, "w", encoding="utf-8") as fh:
            for r in rows:
                fh.write(json.dumps(r, sort_keys=True) + "\n")
            fh.write(json.dumps({"aggregate": agg}, sort_keys=True) + "\n")
    return 0


def build_parser():
    p = _Parser(prog="ccproof", description="Congruence closure with small proof certificates.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("prove", help="extract a certificate for an instance's goal")
    sp.add_argument("file")
    sp.add_argument("--algo", required=True, choices=ALGORITHMS)
    sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    sp.add_argument("--out", help="certificate path (default FILE.cert)")
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("check", help="replay a certificate against an instance")
    sp.add_argument("file")
    sp.add_argument("cert")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("ilp", help="write the minimum DAG size ILP in LP format")
    sp.add_argument("file")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_ilp)

    sp = sub.add_parser("bench", help="compare all algorithms on random instances")
    sp.add_argument("--n", type=_parse_range, required=True, metavar="LO..HI")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--jsonl", help="also write JSON lines to this path")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "fuel", 0) < 0 or getattr(args, "trials", 0) < 0:
        print("ccproof: error: counts must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
