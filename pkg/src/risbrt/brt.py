"""Battery recharging time: T_r = alpha / P_r.

alpha = Cb * Dd * Vb / eta converts battery demand and harvesting efficiency
into an energy requirement.  Units are fixed throughout the package: alpha
in watt-hours, powers in watts, recharge times in hours.

The general-N law is the received-power law pushed through tau = alpha/p.
Closed-form moments exist only while the defining integral converges; the
criterion is min(Re a4, Re a5) + 1 - 2n > 0 (tail-exponent analysis of the
integrand), and the moment routine refuses to return a number outside it --
the Gamma-ratio expression stays finite there while the true moment
diverges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammasgn as _gammasgn
from scipy.special import loggamma as _loggamma

from .channel import ApproximantParams
from .power import (
    ScenarioConfig,
    avg_received_power,
    clt_gain_params,
    power_cdf,
    power_cdf_clt,
    power_cdf_n1,
    power_pdf_n1,
)
from .specfun import MeijerGSpec, log_exp_bessel, meijer_g_log

__all__ = [
    "BatteryProfile",
    "BrtSummary",
    "MomentUndefinedError",
    "conversion_coefficient",
    "brt_pdf",
    "brt_pdf_n1",
    "brt_cdf",
    "brt_cdf_n1",
    "brt_cdf_clt",
    "brt_moment",
    "brt_summary",
    "brt_pdf_clt",
    "brt_mean_clt",
]

PI = math.pi


class MomentUndefinedError(ArithmeticError):
    """The requested recharge-time moment diverges (heavy-tailed regime)."""

    def __init__(self, n, gate):
        super().__init__(
            f"moment of order {n} diverges: min(Re a4, Re a5) + 1 - 2n = {gate:.6g} <= 0")
        self.n = n
        self.gate = gate


@dataclass(frozen=True)
class BatteryProfile:
    """Battery and harvesting-circuit parameters."""

    capacity_ah: float        # battery capacity, ampere-hours
    discharge_depth: float    # fraction of capacity cycled per recharge
    voltage_v: float          # charging voltage
    rfeh_efficiency: float    # RF-to-DC conversion efficiency

    def __post_init__(self):
        if not (math.isfinite(self.capacity_ah) and self.capacity_ah > 0):
            raise ValueError(f"capacity_ah must be positive, got {self.capacity_ah}")
        if not 0.0 < self.discharge_depth <= 1.0:
            raise ValueError(f"discharge_depth must be in (0, 1], got {self.discharge_depth}")
        if not (math.isfinite(self.voltage_v) and self.voltage_v > 0):
            raise ValueError(f"voltage_v must be positive, got {self.voltage_v}")
        if not 0.0 < self.rfeh_efficiency <= 1.0:
            raise ValueError(f"rfeh_efficiency must be in (0, 1], got {self.rfeh_efficiency}")


@dataclass(frozen=True)
class BrtSummary:
    """Recharge-time summary statistics; None marks a divergent entry.

    skewness and kurtosis are the raw-moment ratios mu(3)/mu(2)^(3/2) and
    mu(4)/mu(2)^2 - 3 (not the central-moment standardized forms), matching
    the closed-form toolchain this summary feeds.
    """

    mean: float | None
    variance: float | None
    skewness: float | None
    kurtosis: float | None
    aof: float | None


def conversion_coefficient(b: BatteryProfile) -> float:
    """alpha = Cb * Dd * Vb / eta, in watt-hours."""
    return b.capacity_ah * b.discharge_depth * b.voltage_v / b.rfeh_efficiency


# ---------------------------------------------------------------------------
# densities / distributions
# ---------------------------------------------------------------------------

def brt_pdf(tau, cfg: ScenarioConfig, params: ApproximantParams, alpha: float):
    """General-N recharge-time density (per hour), tau > 0.

    Transcribes the closed form (a1 a2 / 2 tau) G2012((1/a2) sqrt(alpha /
    (Pbar tau)) | a3+1; a5+1, a4+1); identical to (alpha/tau^2) *
    power_pdf(alpha/tau) by the change of variables.
    """
    pbar = avg_received_power(cfg)
    if np.ndim(tau) == 0:
        tf = float(tau)
        if tf <= 0:
            raise ValueError(f"brt_pdf requires tau > 0, got {tf}")
        spec = MeijerGSpec("G2012", (params.a3 + 1.0,),
                           (params.a5 + 1.0, params.a4 + 1.0))
        w = math.sqrt(alpha / (pbar * tf)) / params.a2
        lg, sign = meijer_g_log(spec, w)
        if sign <= 0.0:
            return 0.0
        lv = params.log_a1 + math.log(params.a2) - math.log(2.0 * tf) + lg
        return math.exp(lv) if lv > -745.0 else 0.0
    taus = np.asarray(tau, dtype=float)
    if np.any(taus <= 0):
        raise ValueError("brt_pdf requires tau > 0")
    return np.array([brt_pdf(float(t), cfg, params, alpha) for t in taus])


def brt_pdf_n1(tau, cfg: ScenarioConfig, alpha: float):
    """Exact single-element recharge-time density:
    (alpha / (2 Pbar tau^2)) K0(sqrt(alpha/(Pbar tau)))."""
    taus = np.asarray(tau, dtype=float)
    if np.any(taus <= 0):
        raise ValueError("brt_pdf_n1 requires tau > 0")
    out = (alpha / taus ** 2) * power_pdf_n1(alpha / taus, cfg)
    return float(out) if np.ndim(tau) == 0 else out


def brt_cdf(tau_th, cfg: ScenarioConfig, params: ApproximantParams, alpha: float):
    """P(T_r <= tau_th) = 1 - power_cdf(alpha / tau_th)."""
    taus = np.asarray(tau_th, dtype=float)
    if np.any(taus <= 0):
        raise ValueError("brt_cdf requires tau_th > 0")
    out = 1.0 - power_cdf(alpha / taus, cfg, params)
    return float(out) if np.ndim(tau_th) == 0 else out


def brt_cdf_n1(tau_th, cfg: ScenarioConfig, alpha: float):
    """Exact single-element recharge-time distribution."""
    taus = np.asarray(tau_th, dtype=float)
    if np.any(taus <= 0):
        raise ValueError("brt_cdf_n1 requires tau_th > 0")
    out = 1.0 - power_cdf_n1(alpha / taus, cfg)
    return float(out) if np.ndim(tau_th) == 0 else out


def brt_cdf_clt(tau_th, cfg: ScenarioConfig, alpha: float):
    """Distribution implied by the large-N recharge-time law."""
    taus = np.asarray(tau_th, dtype=float)
    if np.any(taus <= 0):
        raise ValueError("brt_cdf_clt requires tau_th > 0")
    out = 1.0 - power_cdf_clt(alpha / taus, cfg)
    return float(out) if np.ndim(tau_th) == 0 else out


def brt_pdf_clt(tau, cfg: ScenarioConfig, alpha: float):
    """Large-N recharge-time density via the fused log-safe Bessel path.

    Direct transcription of the closed form; equals
    (alpha/tau^2) * power_pdf_clt(alpha/tau) by the same change of variables
    as the general law.
    """
    pbar = avg_received_power(cfg)
    n = cfg.channel.n_elements
    taus = np.asarray(tau, dtype=float)
    if np.any(taus <= 0):
        raise ValueError("brt_pdf_clt requires tau > 0")
    scalar = np.ndim(tau) == 0
    taus = np.atleast_1d(taus)
    c = 16.0 - PI ** 2
    log_pref = (np.log(2.0 * alpha / (taus ** 2 * n * c * pbar))
                + 0.25 * np.log(taus * n ** 2 * PI ** 2 * pbar / (4.0 * alpha)))
    a_arg = (4.0 * alpha / taus + n ** 2 * PI ** 2 * pbar) / (2.0 * n * c * pbar)
    b_arg = (2.0 * PI / (c * pbar)) * np.sqrt(pbar * alpha / taus)
    fused = np.array([log_exp_bessel(float(a), float(b))
                      for a, b in zip(a_arg, b_arg)])
    out = np.exp(log_pref + fused)
    return float(out[0]) if scalar else out


def brt_mean_clt(cfg: ScenarioConfig, alpha: float) -> float:
    """Large-N mean recharge time: 4 alpha / ((N^2 pi^2 + N (16-pi^2)) Pbar)."""
    n = cfg.channel.n_elements
    pbar = avg_received_power(cfg)
    return 4.0 * alpha / ((n ** 2 * PI ** 2 + n * (16.0 - PI ** 2)) * pbar)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def moment_gate(params: ApproximantParams, n: int) -> float:
    """Convergence margin of the order-n moment; positive means defined."""
    return params.min_re_lower + 1.0 - 2.0 * n


def brt_moment(n: int, cfg: ScenarioConfig, params: ApproximantParams,
               alpha: float) -> float:
    """Closed-form n-th recharge-time moment (hours^n).

    a1 a2^(1-2n) (alpha/Pbar)^n Gamma(a4+1-2n) Gamma(a5+1-2n) / Gamma(a3+1-2n),
    returned only when the defining integral converges; raises
    :class:`MomentUndefinedError` otherwise (and on a Gamma pole of the
    denominator, where the expression degenerates).
    """
    if n < 1 or n != int(n):
        raise ValueError(f"moment order must be a positive integer, got {n}")
    gate = moment_gate(params, n)
    if gate <= 0.0:
        raise MomentUndefinedError(n, gate)
    d = params.a3 + 1.0 - 2.0 * n
    if d <= 0.0 and abs(d - round(d)) < 1e-12:
        raise MomentUndefinedError(n, gate)
    pbar = avg_received_power(cfg)
    num = float(np.real(_loggamma(params.a4 + 1.0 - 2.0 * n)
                        + _loggamma(params.a5 + 1.0 - 2.0 * n)))
    den = float(np.real(_loggamma(complex(d))))
    lv = (params.log_a1 + (1.0 - 2.0 * n) * math.log(params.a2)
          + n * math.log(alpha / pbar) + num - den)
    return float(_gammasgn(d)) * math.exp(lv)


def brt_summary(cfg: ScenarioConfig, params: ApproximantParams,
                alpha: float) -> BrtSummary:
    """Mean, variance, skewness, kurtosis, and amount-of-fading of T_r.

    Each statistic needing a divergent moment comes back as None.
    """
    mus = {}
    for k in (1, 2, 3, 4):
        try:
            mus[k] = brt_moment(k, cfg, params, alpha)
        except MomentUndefinedError:
            mus[k] = None
    mean = mus[1]
    variance = None
    aof = None
    if mean is not None and mus[2] is not None:
        variance = mus[2] - mean ** 2
        aof = variance / mean ** 2
    skewness = None
    if mus[2] is not None and mus[3] is not None:
        skewness = mus[3] / mus[2] ** 1.5
    kurtosis = None
    if mus[2] is not None and mus[4] is not None:
        kurtosis = mus[4] / mus[2] ** 2 - 3.0
    return BrtSummary(mean=mean, variance=variance, skewness=skewness,
                      kurtosis=kurtosis, aof=aof)
