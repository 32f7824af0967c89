"""Ground-truth fading simulator and goodness-of-fit utilities.

Per trial: draw the 2N Rayleigh envelopes (unit scale, E|h|^2 = 2), form the
gain B with ideal phase alignment (summing magnitudes), then P_r = Pbar*B^2
and T_r = alpha/P_r.  Draws are keyed by (seed, trial, element, hop) through
the counter-based kernel, so results are independent of worker count and any
single trial can be reproduced in isolation.

Heads-up on heavy tails: for small element counts the recharge-time moments
diverge (the N=1 mean does not exist), so empirical moment estimates of
those orders never stabilize; the standard errors reported alongside the
estimates are the way to see that happening.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .brt import BatteryProfile, conversion_coefficient
from .channel import ChannelConfig
from .power import ScenarioConfig, avg_received_power

__all__ = [
    "EmpiricalSample",
    "sample_gain",
    "sample_gain_batch",
    "simulate",
    "ks_distance",
    "empirical_moments",
    "active_backend",
]

active_backend = _kernels.active_backend


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted Monte Carlo draws of one quantity."""

    values: np.ndarray
    trials: int
    seed: int
    quantity: str  # 'gain' | 'power' | 'brt'

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size != self.trials:
            raise ValueError("values must be a 1-d array of length `trials`")
        if np.any(np.diff(v) < 0):
            raise ValueError("values must be sorted ascending")
        if self.quantity not in ("gain", "power", "brt"):
            raise ValueError(f"unknown quantity {self.quantity!r}")
        object.__setattr__(self, "values", v)


def sample_gain(cfg: ChannelConfig, trial_index: int, seed: int) -> float:
    """Gain draw of a single trial; depends only on (seed, trial_index)."""
    if trial_index < 0:
        raise ValueError(f"trial_index must be >= 0, got {trial_index}")
    return float(_kernels.gain_sums(cfg.n_elements, 1, seed, start=trial_index)[0])


def sample_gain_batch(cfg: ChannelConfig, trials: int, seed: int) -> np.ndarray:
    """Gains of trials 0..trials-1, in trial order (unsorted)."""
    return _kernels.gain_sums(cfg.n_elements, trials, seed)


def simulate(cfg: ScenarioConfig, battery: BatteryProfile, trials: int,
             seed: int):
    """Run the fading simulation; returns sorted (power, brt) samples.

    Per trial: B -> P_r = Pbar B^2 -> T_r = alpha / P_r.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    gains = sample_gain_batch(cfg.channel, trials, seed)
    pbar = avg_received_power(cfg)
    alpha = conversion_coefficient(battery)
    power = pbar * gains ** 2
    brt = alpha / power
    return (
        EmpiricalSample(np.sort(power), trials, seed, "power"),
        EmpiricalSample(np.sort(brt), trials, seed, "brt"),
    )


def ks_distance(sample: EmpiricalSample, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance against an analytic CDF.

    ``cdf`` must map an ascending ndarray of sample points to probabilities.
    """
    n = sample.trials
    if n == 0:
        raise ValueError("sample is empty")
    fx = np.asarray(cdf(sample.values), dtype=float)
    steps = np.arange(1, n + 1) / n
    return float(max(np.max(steps - fx), np.max(fx - (steps - 1.0 / n))))


def empirical_moments(sample: EmpiricalSample, n_max: int):
    """Raw moments 1..n_max with standard errors: list of (moment, se)."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    out = []
    v = sample.values
    n = sample.trials
    for k in range(1, n_max + 1):
        p = v ** k
        m = float(np.mean(p))
        se = float(np.std(p) / math.sqrt(n))
        out.append((m, se))
    return out
