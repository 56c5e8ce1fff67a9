"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the three hot paths (Monte-Carlo cascades, 2-hop set objective, and a
Metropolis chain) on a synthetic graph with both backends, verifies they agree
bit-for-bit, and prints the speedup.

Usage: python benchmarks/bench_backends.py [--n 1200] [--avg-degree 9] [--seed 1]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bimsa._kernels import _pure
from bimsa.graph import generate_powerlaw_graph
from bimsa.indicators import CostModel, _qpow, sigma2_all

try:
    from bimsa._kernels import _ckern
except ImportError:
    _ckern = None


def timed(fn, *args, repeat=1, **kwargs):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        best = min(best, time.perf_counter() - start)
    return result, best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1200)
    parser.add_argument("--avg-degree", type=float, default=9.0)
    parser.add_argument("--max-degree", type=int, default=60)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--mc-reps", type=int, default=2000)
    parser.add_argument("--chain-steps", type=int, default=300)
    args = parser.parse_args()

    if _ckern is None:
        print("compiled backend not built; run `pip install -e . --no-build-isolation`")
        return 1

    g = generate_powerlaw_graph(args.n, args.avg_degree, args.max_degree, 2.0, args.seed)
    cm = CostModel(g, 0.1)
    sig2 = sigma2_all(g, 0.1)
    qpow = _qpow(g, 0.1)
    seeds = np.arange(0, args.n, max(1, args.n // 40), dtype=np.int32)
    cand = np.arange(0, args.n, 3, dtype=np.int32)
    members = cand[:20].copy()

    print(f"graph: n={g.node_count} m={g.edge_count}  (seed {args.seed})")
    print(f"{'kernel':<18}{'pure':>12}{'cython':>12}{'speedup':>10}  agree")

    cases = [
        (
            "ic_counts",
            lambda impl: impl.ic_counts(
                g.out_indptr, g.out_indices, seeds, g.node_count, 0.1, None, args.mc_reps, 7
            ),
            lambda a, b: np.array_equal(a, b),
        ),
        (
            "sigma2_nodes",
            lambda impl: impl.sigma2_nodes(g.out_indptr, g.out_indices, g.node_count, 0.1),
            lambda a, b: np.array_equal(a, b),
        ),
        (
            "sigma2_set_value",
            lambda impl: impl.sigma2_set_value(g.out_indptr, g.out_indices, seeds, sig2, 0.1),
            lambda a, b: a == b,
        ),
        (
            "sa_chain",
            lambda impl: impl.sa_chain(
                g.out_indptr, g.out_indices, cm.costs, cand, members,
                40.0, 1e5, args.chain_steps, 0.1, 0, 0, sig2, qpow, 99,
            ),
            lambda a, b: np.array_equal(a[0], b[0]) and a[1:] == b[1:],
        ),
    ]

    for name, run, same in cases:
        pure_result, pure_time = timed(run, _pure)
        cy_result, cy_time = timed(run, _ckern, repeat=3)
        agree = same(pure_result, cy_result)
        print(
            f"{name:<18}{pure_time:>11.4f}s{cy_time:>11.4f}s{pure_time / cy_time:>9.1f}x  {agree}"
        )
        if not agree:
            print(f"  MISMATCH in {name}!")
            return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
