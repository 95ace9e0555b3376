#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy/Python fallback.

Usage: python scripts/bench_kernels.py [--n-paths N] [--lam L]

Times the three hot loops on one synthetic bank: the two threshold-sweep
transition builders and the per-path policy evaluator (plus the vectorized
first-crossing scan, which both backends implement with NumPy).
"""

import argparse
import time

import numpy as np

from jumpctl import _kernels_py

try:
    from jumpctl import _kernels as compiled
except ImportError:
    compiled = None


def make_arrays(n_paths: int, lam_horizon: float, seed: int = 0):
    rng = np.random.default_rng(seed)
    counts = rng.poisson(lam_horizon, n_paths)
    offsets = np.zeros(n_paths + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    total = int(offsets[-1])
    y = np.where(rng.random(total) < 0.5, rng.normal(-3, 2, total), rng.normal(6, 2, total))
    s = np.cumsum(y)
    starts = offsets[:-1]
    bases = np.zeros(n_paths)
    mask = starts > 0
    bases[mask] = s[starts[mask] - 1]
    s = s - np.repeat(bases, counts)
    t = np.sort(rng.random(total)) * 18.4
    disc = np.exp(-t)
    det = (np.abs(y) >= 3.0).astype(np.float64)
    return offsets, s, disc, det


def bench(fn, *args, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--n-paths", type=int, default=100_000)
    parser.add_argument("--lam", type=float, default=9.2, help="mean events per path")
    args = parser.parse_args()

    offsets, s, disc, det = make_arrays(args.n_paths, args.lam)
    total = len(s)
    print(f"bank: {args.n_paths} paths, {total} events")
    rng = np.random.default_rng(1)
    lat = rng.normal(-5, 3, total)
    lrt = lat + np.abs(rng.normal(0, 1, total))
    pa, pr = rng.normal(size=total), rng.normal(size=total)

    workloads = [
        ("gamma0_transitions", (offsets, s, disc, det)),
        ("gamma1_transitions", (offsets, s, disc, det)),
        ("hitting_samples", (offsets, s, disc, det, 0.5, -1.0)),
        ("runsup_weights", (offsets, s, disc)),
        ("path_values", (offsets, disc, lat, lrt, pa, pr, -20.0, -12.0, -10.0)),
    ]
    header = f"{'kernel':24s} {'python':>10s} {'cython':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, work in workloads:
        t_py = bench(getattr(_kernels_py, name), *work)
        if compiled is None:
            print(f"{name:24s} {t_py*1e3:9.1f}ms {'n/a':>10s}")
            continue
        t_cy = bench(getattr(compiled, name), *work)
        print(f"{name:24s} {t_py*1e3:9.1f}ms {t_cy*1e3:9.1f}ms {t_py/t_cy:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
