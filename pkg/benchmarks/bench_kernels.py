"""Benchmark the hull kernels: numba backend vs the pure-numpy fallback.

Generates a batch of coupled Brownian paths once, then times the full
hull pipeline (support scan, octagon prefilter, chain, calipers) and the
direction-grid range scan under both backends on identical inputs.  The
two backends must agree bit for bit on every output; the run aborts if
they ever differ.

Usage:
    python3 benchmarks/bench_kernels.py [--paths N] [--steps CSV] [--grid K]
"""

import argparse
import math
import time

import numpy as np

from bmdiam import _kernels
from bmdiam.paths import _levels_arrays


def make_inputs(n_paths, levels, seed):
    batches = []
    for rep in range(n_paths):
        arrays = _levels_arrays(seed, rep, list(levels))
        for lvl in levels:
            batches.append(arrays[lvl])
    return batches


def time_backend(backend, batches, cs, sn, repeats):
    # warm-up: trigger JIT compilation outside the timed region
    _kernels.hull_stats_xy(*batches[0], backend=backend)
    _kernels.IMPLS[backend]["range_grid"](*batches[0], cs, sn)

    best_stats = math.inf
    stats_out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = [_kernels.hull_stats_xy(xs, ys, backend=backend) for xs, ys in batches]
        best_stats = min(best_stats, time.perf_counter() - t0)
        stats_out = out

    best_grid = math.inf
    grid_out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = [
            _kernels.IMPLS[backend]["range_grid"](xs, ys, cs, sn) for xs, ys in batches
        ]
        best_grid = min(best_grid, time.perf_counter() - t0)
        grid_out = out
    return best_stats, best_grid, stats_out, grid_out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=500)
    ap.add_argument("--steps", default="1024,4096")
    ap.add_argument("--grid", type=int, default=32, help="direction count for the range scan")
    ap.add_argument("--seed", type=int, default=1905)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    levels = tuple(int(s) for s in args.steps.split(","))
    batches = make_inputs(args.paths, levels, args.seed)
    thetas = np.arange(args.grid) * (math.pi / args.grid)
    cs = np.cos(thetas)
    sn = np.sin(thetas)

    backends = [b for b in ("numba", "numpy") if b in _kernels.IMPLS]
    if "numba" not in backends:
        print("numba unavailable; benchmarking the numpy backend alone")

    results = {}
    for backend in backends:
        ts, tg, stats, grid = time_backend(backend, batches, cs, sn, args.repeats)
        results[backend] = (ts, tg, stats, grid)
        per = 1e6 * ts / len(batches)
        perg = 1e6 * tg / len(batches)
        print(
            f"{backend:>6}: hull pipeline {ts:8.3f}s ({per:8.1f} us/set)   "
            f"range grid {tg:8.3f}s ({perg:8.1f} us/set)"
        )

    if len(backends) == 2:
        a, b = (results[n] for n in backends)
        assert a[2] == b[2], "backend mismatch in hull stats"
        assert a[3] == b[3], "backend mismatch in range grid"
        print(
            f"agreement: bit-identical on {len(batches)} point sets; "
            f"speedup numba/numpy: hull {b[0] / a[0]:.1f}x, grid {b[1] / a[1]:.1f}x"
        )


if __name__ == "__main__":
    main()
