#!/usr/bin/env python3
"""Timing comparison of the Monte Carlo kernel backends.

Runs the counter-based gain sampler through the numba kernel and the pure
numpy fallback on identical (seed, trial) inputs, reports draw rates, and
checks that the two backends produce the same stream.

Select a backend for library use with RISBRT_BACKEND=numba|numpy|auto.
"""

import time

import numpy as np

from risbrt._kernels import _build_numba, _gains_numpy


def bench(fn, n_elem, trials, seed, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(n_elem, 0, trials, seed)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    trials = 1_000_000
    seed = 12345
    print(f"{'N':>5} {'numpy':>12} {'numba':>12} {'speedup':>8}  stream")
    try:
        numba_fn = _build_numba()
        numba_fn(8, 0, 1000, np.uint64(seed))  # compile outside the timing
    except ImportError:
        numba_fn = None
        print("numba not importable; timing the numpy path only")
    for n_elem in (1, 8, 50, 128):
        ref, t_np = bench(_gains_numpy, n_elem, trials, seed)
        rate_np = trials * 2 * n_elem / t_np / 1e6
        if numba_fn is None:
            print(f"{n_elem:>5} {t_np:>10.3f}s {'-':>12} {'-':>8}")
            continue
        out, t_nb = bench(numba_fn, n_elem, trials, seed)
        rate_nb = trials * 2 * n_elem / t_nb / 1e6
        same = "bit-identical" if np.array_equal(ref, out) else \
            f"max rel diff {np.max(np.abs(ref - out) / ref):.2e}"
        print(f"{n_elem:>5} {t_np:>10.3f}s {t_nb:>10.3f}s {t_np / t_nb:>7.1f}x  {same}"
              f"  ({rate_np:.0f} vs {rate_nb:.0f} Mdraw/s)")


if __name__ == "__main__":
    main()
