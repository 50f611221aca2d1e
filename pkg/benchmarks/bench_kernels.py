"""Compare the compiled and pure-Python shortest-path kernels.

    python3 benchmarks/bench_kernels.py --n 200 400 800 --queries 200

Reports, per instance size, the time for a batch of random searches and for
a full treeopt table, with each backend, plus the speedup.
"""

import argparse
import random
import statistics
import time

from ccproof import kernels
from ccproof.instance import gen_random_instance
from ccproof.treeopt import optimal_tree_size_table


def median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_size(n, queries, repeat, seed):
    inst = gen_random_instance(n, 3, seed)
    snap = inst.snapshot()
    rng = random.Random(seed)
    weights = kernels.as_weights(rng.randint(1, 9) for _ in snap.edges)
    pairs = []
    while len(pairs) < queries:
        a = rng.randrange(snap.n_vertices)
        members = [v for v in range(snap.n_vertices) if snap.root[v] == snap.root[a]]
        pairs.append((a, rng.choice(members)))
    row = {"n": n, "vertices": snap.n_vertices, "edges": len(snap.edges)}
    results = {}
    for backend in ("python", "cython"):
        search = kernels.make_searcher(*snap.csr, backend=backend)
        results[backend] = [search.run(weights, a, b) for a, b in pairs]
        row[f"search_{backend}"] = median_time(lambda: [search.run(weights, a, b) for a, b in pairs], repeat)

        def table():
            optimal_tree_size_table(inst.snapshot(), backend=backend)

        row[f"treeopt_{backend}"] = median_time(table, repeat)
    assert results["python"] == results["cython"], "backends disagree"
    return row


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[200, 400, 800])
    p.add_argument("--queries", type=int, default=200)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args(argv)
    if kernels._compiled is None:
        p.error("compiled kernels are not built (pip install -e . --no-build-isolation)")
    print(f"{'n':>5} {'V':>6} {'E':>6}  {'search py':>10} {'search cy':>10} {'x':>5}  "
          f"{'treeopt py':>10} {'treeopt cy':>10} {'x':>5}")
    for n in args.n:
        r = bench_size(n, args.queries, args.repeat, args.seed)
        sp = r["search_python"] / r["search_cython"]
        tp = r["treeopt_python"] / r["treeopt_cython"]
        print(f"{n:>5} {r['vertices']:>6} {r['edges']:>6}  "
              f"{r['search_python'] * 1e3:>8.1f}ms {r['search_cython'] * 1e3:>8.1f}ms {sp:>5.1f}  "
              f"{r['treeopt_python'] * 1e3:>8.1f}ms {r['treeopt_cython'] * 1e3:>8.1f}ms {tp:>5.1f}")


if __name__ == "__main__":
    main()
