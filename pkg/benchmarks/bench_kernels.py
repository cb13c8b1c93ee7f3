"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--nodes 60] [--repeat 3]

Both backends produce identical outputs; the script checks that too.
"""

import argparse
import time

import numpy as np

from discdiv.embedding import TrainParams, WalkParams, generate_walks, precompute_transitions, train_sgns
from discdiv.embedding import _backend
from discdiv.graph import DisciplineGraph


def random_graph(n, density, seed):
    rng = np.random.default_rng(seed)
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                edges[(str(i + 1), str(j + 1))] = int(rng.integers(1, 100))
    return DisciplineGraph.from_edges("meso", [str(i + 1) for i in range(n)], edges)


def best_of(repeat, fn):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=60)
    ap.add_argument("--density", type=float, default=0.2)
    ap.add_argument("--walk-length", type=int, default=40)
    ap.add_argument("--walks-per-node", type=int, default=5)
    ap.add_argument("--dims", type=int, default=32)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _backend.compiled_kernels is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e .` first")
    g = random_graph(args.nodes, args.density, 0)
    wp = WalkParams(p=0.5, q=2.0, walk_length=args.walk_length, walks_per_node=args.walks_per_node, seed=1)
    tp = TrainParams(dimensions=args.dims, window=5, negative_samples=5, epochs=1, seed=1)
    backends = {"cython": _backend.compiled_kernels, "python": _backend.python_kernels}

    results = {}
    for name, kern in backends.items():
        t_tab, tables = best_of(args.repeat, lambda: precompute_transitions(g, wp, kernels=kern))
        t_walk, walks = best_of(args.repeat, lambda: generate_walks(g, wp, tables=tables, kernels=kern))
        t_sgns, emb = best_of(1 if name == "python" else args.repeat, lambda: train_sgns(walks, tp, kernels=kern))
        results[name] = {"transitions": t_tab, "walks": t_walk, "sgns": t_sgns, "_out": (walks.tokens, emb.vectors)}

    same = all(np.array_equal(a, b) for a, b in zip(results["cython"]["_out"], results["python"]["_out"]))
    print(f"graph: {args.nodes} nodes, {len(g.edges)} edges; walks: {args.nodes * args.walks_per_node} x {args.walk_length}")
    print(f"{'kernel':<12}{'cython (s)':>12}{'python (s)':>12}{'speedup':>10}")
    for k in ("transitions", "walks", "sgns"):
        c, p = results["cython"][k], results["python"][k]
        print(f"{k:<12}{c:>12.4f}{p:>12.4f}{p / c:>9.0f}x")
    print(f"outputs identical: {same}")


if __name__ == "__main__":
    main()
