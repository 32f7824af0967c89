"""Distribution of the instantaneous received power P_r = Pbar * B^2.

Pbar = Ps / (d1^delta * d2^delta) is the average received power of the
two-hop link.  The general-N law composes the gain distribution with the
square-and-scale map; dedicated forms cover the exact single-element
(double-Rayleigh) case and the large-N regime, where B is Gaussian and P_r
follows a noncentral-chi-square-style law with one degree of freedom.

dBm/watt conversion lives here: the formulas work in watts, operating points
are usually quoted in dBm.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import k0e as _k0e
from scipy.special import k1e as _k1e
from scipy.special import ndtr as _ndtr

from .channel import ApproximantParams, ChannelConfig, gain_cdf
from .specfun import MeijerGSpec, log_exp_bessel, meijer_g_log

__all__ = [
    "ScenarioConfig",
    "dbm_to_watts",
    "watts_to_dbm",
    "avg_received_power",
    "power_cdf",
    "power_pdf",
    "power_pdf_n1",
    "power_cdf_n1",
    "power_pdf_clt",
    "power_pdf_clt_folded",
    "power_cdf_clt",
    "clt_gain_params",
]

PI = math.pi


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_watts: float) -> float:
    if p_watts <= 0:
        raise ValueError(f"power must be positive, got {p_watts} W")
    return 10.0 * math.log10(p_watts) + 30.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Transmit power and link geometry; everything Pbar needs."""

    ps_watts: float
    d1_m: float
    d2_m: float
    delta: float
    channel: ChannelConfig

    def __post_init__(self):
        for name in ("ps_watts", "d1_m", "d2_m", "delta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if not 2.0 <= self.delta <= 4.0:
            warnings.warn(
                f"path-loss exponent {self.delta} is outside the usual [2, 4] range",
                stacklevel=2)


def avg_received_power(cfg: ScenarioConfig) -> float:
    """Pbar = Ps / (d1^delta * d2^delta), in watts."""
    return cfg.ps_watts / (cfg.d1_m ** cfg.delta * cfg.d2_m ** cfg.delta)


def power_cdf(x, cfg: ScenarioConfig, params: ApproximantParams):
    """P(P_r <= x): the gain CDF evaluated at sqrt(x / Pbar)."""
    pbar = avg_received_power(cfg)
    if np.ndim(x) == 0:
        xf = float(x)
        if xf < 0:
            raise ValueError(f"power_cdf requires x >= 0, got {xf}")
        return gain_cdf(math.sqrt(xf / pbar), params)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("power_cdf requires x >= 0")
    return gain_cdf(np.sqrt(xs / pbar), params)


def _power_logpdf_scalar(x: float, pbar: float, p: ApproximantParams) -> float:
    # (a1 a2 / 2x) G2012( sqrt(x/Pbar)/a2 | a3+1; a5+1, a4+1 )
    spec = MeijerGSpec("G2012", (p.a3 + 1.0,), (p.a5 + 1.0, p.a4 + 1.0))
    w = math.sqrt(x / pbar) / p.a2
    lg, sign = meijer_g_log(spec, w)
    if sign <= 0.0:
        return -math.inf
    return p.log_a1 + math.log(p.a2) - math.log(2.0 * x) + lg


def power_pdf(x, cfg: ScenarioConfig, params: ApproximantParams):
    """Density of P_r (per watt) for the general-N law, x > 0."""
    pbar = avg_received_power(cfg)
    if np.ndim(x) == 0:
        xf = float(x)
        if xf <= 0:
            raise ValueError(f"power_pdf requires x > 0, got {xf}")
        lg = _power_logpdf_scalar(xf, pbar, params)
        return math.exp(lg) if lg > -745.0 else 0.0
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("power_pdf requires x > 0")
    return np.array([power_pdf(float(v), cfg, params) for v in xs])


# ---------------------------------------------------------------------------
# exact single-element law (double-Rayleigh power)
# ---------------------------------------------------------------------------

def _require_n1(cfg: ScenarioConfig):
    if cfg.channel.n_elements != 1:
        raise ValueError(
            f"single-element law requested with N = {cfg.channel.n_elements}")


def power_pdf_n1(x, cfg: ScenarioConfig):
    """Exact density of P_r for one element: K0(sqrt(x/Pbar)) / (2 Pbar).

    This is the power law of B = |h||g| with unit-scale Rayleigh hops
    (E|h|^2 = 2), the normalization the moment formulas use; its mean is
    4 Pbar.
    """
    _require_n1(cfg)
    pbar = avg_received_power(cfg)
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("power_pdf_n1 requires x > 0")
    y = np.sqrt(xs / pbar)
    out = np.exp(np.log(_k0e(y)) - y) / (2.0 * pbar)
    return float(out) if np.ndim(x) == 0 else out


def power_cdf_n1(x, cfg: ScenarioConfig):
    """Exact distribution of P_r for one element: 1 - y K1(y), y = sqrt(x/Pbar)."""
    _require_n1(cfg)
    pbar = avg_received_power(cfg)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("power_cdf_n1 requires x >= 0")
    y = np.sqrt(xs / pbar)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(y > 0, y * _k1e(y) * np.exp(-y), 1.0)
    out = np.clip(1.0 - tail, 0.0, 1.0)
    return float(out) if np.ndim(x) == 0 else out


# ---------------------------------------------------------------------------
# large-N law
# ---------------------------------------------------------------------------

def clt_gain_params(n: int):
    """(mean, std) of the Gaussian that B converges to: N pi/2, sqrt(N(16-pi^2)/4)."""
    mu = n * PI / 2.0
    sigma = math.sqrt(n * (16.0 - PI ** 2) / 4.0)
    return mu, sigma


def power_pdf_clt(x, cfg: ScenarioConfig):
    """Large-N density of P_r, evaluated through the fused log-safe Bessel path.

    Direct transcription of the noncentral-chi-square-style form
    (prefactors, Gaussian exponential, I_{-1/2}); agrees with
    :func:`power_pdf_clt_folded` to roundoff.
    """
    pbar = avg_received_power(cfg)
    n = cfg.channel.n_elements
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("power_pdf_clt requires x > 0")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(xs)
    c = 16.0 - PI ** 2
    log_pref = (math.log(2.0 / (n * c * pbar))
                + 0.25 * (np.log(n ** 2 * PI ** 2 * pbar) - np.log(4.0 * xs)))
    a_arg = (4.0 * xs + n ** 2 * PI ** 2 * pbar) / (2.0 * n * c * pbar)
    b_arg = (2.0 * PI / (c * pbar)) * np.sqrt(pbar * xs)
    fused = np.array([log_exp_bessel(float(a), float(b))
                      for a, b in zip(a_arg, b_arg)])
    out = np.exp(log_pref + fused)
    return float(out[0]) if scalar else out


def power_pdf_clt_folded(x, cfg: ScenarioConfig):
    """Same large-N law written as the squared-and-scaled folded normal:
    [phi((y-mu)/s) + phi((y+mu)/s)] / (2 s sqrt(x Pbar)), y = sqrt(x/Pbar)."""
    pbar = avg_received_power(cfg)
    mu, sigma = clt_gain_params(cfg.channel.n_elements)
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("power_pdf_clt_folded requires x > 0")
    y = np.sqrt(xs / pbar)
    la = -0.5 * ((y - mu) / sigma) ** 2
    lb = -0.5 * ((y + mu) / sigma) ** 2
    log_phi_sum = np.logaddexp(la, lb) - 0.5 * math.log(2.0 * PI)
    out = np.exp(log_phi_sum) / (2.0 * sigma * np.sqrt(xs * pbar))
    return float(out) if np.ndim(x) == 0 else out


def power_cdf_clt(x, cfg: ScenarioConfig):
    """Distribution implied by the large-N law: the folded-normal CDF of B
    evaluated at sqrt(x/Pbar)."""
    pbar = avg_received_power(cfg)
    mu, sigma = clt_gain_params(cfg.channel.n_elements)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("power_cdf_clt requires x >= 0")
    y = np.sqrt(xs / pbar)
    out = np.clip(_ndtr((y - mu) / sigma) - _ndtr((-y - mu) / sigma), 0.0, 1.0)
    return float(out) if np.ndim(x) == 0 else out
