"""Counter-based sampling kernels: the hot loop of the Monte Carlo engine.

Every uniform draw is a pure hash of (seed, counter) through two rounds of
the splitmix64 finalizer, so trial t of a run is reproducible in isolation
and the results cannot depend on how trials are scheduled across threads.
Counter layout for an N-element link: trial*2N + i addresses hop-1 envelope
i, trial*2N + N + i addresses hop-2 envelope i.

Two implementations of the per-trial gain sum are provided: a numba
``@njit(parallel=True)`` kernel and a pure-numpy fallback.  They use the
same counter-to-uniform mapping and the same element summation order.  The
backend is chosen by the ``RISBRT_BACKEND`` environment variable: ``numba``,
``numpy``, or ``auto`` (default; numba when importable).  See
``benchmarks/bench_backends.py`` for a timing comparison.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = ["active_backend", "gain_sums", "BACKEND_ENV"]

BACKEND_ENV = "RISBRT_BACKEND"

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV53 = 2.0 ** -53

_CHUNK = 131072  # trials per numpy block: keeps the (chunk x 2N) buffers small


def _numpy_uniforms(seed: np.uint64, counters: np.ndarray) -> np.ndarray:
    """splitmix64(splitmix64(seed + counter*golden)) -> (0, 1) doubles."""
    with np.errstate(over="ignore"):
        x = (np.uint64(seed) + counters * _GOLDEN) & _MASK
        for _ in range(2):
            x = (x ^ (x >> np.uint64(30))) * _MIX1 & _MASK
            x = (x ^ (x >> np.uint64(27))) * _MIX2 & _MASK
            x = x ^ (x >> np.uint64(31))
    return ((x >> np.uint64(11)) | np.uint64(1)).astype(np.float64) * _INV53


def _gains_numpy(n_elem: int, start: int, stop: int, seed: int) -> np.ndarray:
    out = np.empty(stop - start)
    stride = np.uint64(2 * n_elem)
    seed_u = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        base = np.arange(lo, hi, dtype=np.uint64) * stride
        acc = np.zeros(hi - lo)
        # per-element accumulation keeps the summation order identical to
        # the scalar kernel
        for i in range(n_elem):
            u1 = _numpy_uniforms(seed_u, base + np.uint64(i))
            u2 = _numpy_uniforms(seed_u, base + np.uint64(n_elem + i))
            acc += np.sqrt(-2.0 * np.log(u1)) * np.sqrt(-2.0 * np.log(u2))
        out[lo - start:hi - start] = acc
    return out


def _build_numba():
    from numba import njit, prange

    @njit(cache=True, inline="always")
    def _u01(seed, counter):
        x = (seed + counter * np.uint64(0x9E3779B97F4A7C15))
        for _ in range(2):
            x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            x = x ^ (x >> np.uint64(31))
        return float((x >> np.uint64(11)) | np.uint64(1)) * 2.0 ** -53

    @njit(cache=True, parallel=True)
    def _gains(n_elem, start, stop, seed, out):
        for t in prange(stop - start):
            base = np.uint64(start + t) * np.uint64(2 * n_elem)
            acc = 0.0
            for i in range(n_elem):
                u1 = _u01(seed, base + np.uint64(i))
                u2 = _u01(seed, base + np.uint64(n_elem + i))
                acc += math.sqrt(-2.0 * math.log(u1)) * math.sqrt(-2.0 * math.log(u2))
            out[t] = acc
        return out

    def runner(n_elem, start, stop, seed):
        out = np.empty(stop - start)
        _gains(np.int64(n_elem), np.int64(start), np.int64(stop),
               np.uint64(seed & 0xFFFFFFFFFFFFFFFF), out)
        return out

    return runner


_ACTIVE = None
_RUNNER = None


def _resolve():
    global _ACTIVE, _RUNNER
    if _ACTIVE is not None:
        return
    choice = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"{BACKEND_ENV} must be 'auto', 'numba', or 'numpy', got {choice!r}")
    if choice in ("auto", "numba"):
        try:
            _RUNNER = _build_numba()
            _ACTIVE = "numba"
            return
        except ImportError:
            if choice == "numba":
                raise
    _RUNNER = _gains_numpy
    _ACTIVE = "numpy"


def active_backend() -> str:
    """Name of the kernel backend in use ('numba' or 'numpy')."""
    _resolve()
    return _ACTIVE


def gain_sums(n_elem: int, trials: int, seed: int, start: int = 0) -> np.ndarray:
    """Gains of trials [start, start+trials): sum_i |h_i||g_i| per trial.

    A pure function of (n_elem, trial index, seed); thread and worker count
    never change the values.
    """
    if n_elem < 1:
        raise ValueError(f"n_elem must be >= 1, got {n_elem}")
    if trials < 0:
        raise ValueError(f"trials must be >= 0, got {trials}")
    _resolve()
    return _RUNNER(n_elem, start, start + trials, seed)
