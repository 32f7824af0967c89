"""Command-line front end: scenario configuration, analytic and Monte Carlo
evaluation, parameter sweeps, and figure presets emitting CSV/JSON plot data.

Subcommands: ``pdf``, ``cdf``, ``sweep``, ``mc-validate``, ``fig <1..7>``.
Configuration is a flat ``key = value`` file (keys listed in DEFAULTS) with
flag overrides named after the keys.  All numeric output is written with a
fixed number of significant digits, so a given (config, seed) pair produces
byte-identical files.

Exit codes: 0 success, 1 usage error, 2 numeric/domain failure,
3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import k0e as _k0e
from scipy.special import k1e as _k1e
from scipy.special import ndtr as _ndtr

from . import montecarlo as mc
from .brt import (
    BatteryProfile,
    MomentUndefinedError,
    brt_cdf,
    brt_cdf_clt,
    brt_cdf_n1,
    brt_mean_clt,
    brt_moment,
    brt_pdf,
    brt_pdf_clt,
    brt_pdf_n1,
    brt_summary,
    conversion_coefficient,
)
from .channel import (
    ChannelConfig,
    IllConditionedError,
    fit_approximant,
    gain_cdf,
    gain_moments,
    gain_pdf,
)
from .power import (
    ScenarioConfig,
    clt_gain_params,
    dbm_to_watts,
    power_cdf,
    power_cdf_clt,
    power_cdf_n1,
    power_pdf,
    power_pdf_clt,
    power_pdf_n1,
)
from .specfun import ConvergenceError, ContourError

__all__ = ["main", "RunConfig", "DEFAULTS", "load_config", "run_config_from_mapping"]

DEFAULTS = {
    "eta": 0.5,          # RFEH efficiency
    "d1_frac": 0.5,      # source->RIS distance / total
    "d2_frac": 0.5,      # RIS->receiver distance / total
    "d_tot_m": 5.0,      # total link distance, meters
    "delta": 2.7,        # path-loss exponent
    "cb_mah": 10.0,      # battery capacity, mAh
    "dd": 0.4,           # discharge depth
    "vb": 1.2,           # charging voltage, volts
    "ps_dbm": 20.0,      # transmit power, dBm
    "n": 4,              # reflecting elements
    "trials": 1_000_000,
    "seed": 20240817,
    "grid_min": 0.0,     # 0 = derive from a pilot sample
    "grid_max": 0.0,
    "grid_points": 200,
    "grid_scale": "log",
    "precision": 9,
    "out": "",
}

# reference operating points used by the validation report: recharge-time
# means (hours) at Ps = 20 dBm / Cb = 10 mAh, and density-peak locations
# (hours) at Ps = 15 dBm.
REFERENCE_MEAN_HR = {5: 1.0, 10: 12.65 / 60.0, 20: 2.86 / 60.0}
REFERENCE_MODE_HR = {4: 0.64, 8: 0.20}


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig
    battery: BatteryProfile
    trials: int
    seed: int
    grid_min: float
    grid_max: float
    grid_points: int
    grid_scale: str
    precision: int
    out: str

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError("grid needs at least 2 points")
        if self.grid_max > 0 and not self.grid_min < self.grid_max:
            raise ValueError("grid min must be below grid max")
        if self.grid_scale not in ("linear", "log"):
            raise ValueError(f"grid_scale must be linear or log, got {self.grid_scale}")
        if not 6 <= self.precision <= 17:
            raise ValueError(f"precision must be in [6, 17], got {self.precision}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def load_config(path: str) -> dict:
    """Parse a flat `key = value` file; '#' starts a comment."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in DEFAULTS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = val
    return out


def _coerce(key: str, value):
    ref = DEFAULTS[key]
    if isinstance(ref, str):
        return str(value)
    if isinstance(ref, int) and not isinstance(ref, bool):
        return int(float(value))
    return float(value)


def run_config_from_mapping(values: dict) -> RunConfig:
    cfg = dict(DEFAULTS)
    for k, v in values.items():
        if v is None:
            continue
        if k not in DEFAULTS:
            raise ValueError(f"unknown configuration key {k!r}")
        cfg[k] = _coerce(k, v)
    channel = ChannelConfig(int(cfg["n"]))
    scenario = ScenarioConfig(
        ps_watts=dbm_to_watts(cfg["ps_dbm"]),
        d1_m=cfg["d1_frac"] * cfg["d_tot_m"],
        d2_m=cfg["d2_frac"] * cfg["d_tot_m"],
        delta=cfg["delta"],
        channel=channel,
    )
    battery = BatteryProfile(
        capacity_ah=cfg["cb_mah"] / 1000.0,
        discharge_depth=cfg["dd"],
        voltage_v=cfg["vb"],
        rfeh_efficiency=cfg["eta"],
    )
    return RunConfig(
        scenario=scenario,
        battery=battery,
        trials=int(cfg["trials"]),
        seed=int(cfg["seed"]),
        grid_min=cfg["grid_min"],
        grid_max=cfg["grid_max"],
        grid_points=int(cfg["grid_points"]),
        grid_scale=cfg["grid_scale"],
        precision=int(cfg["precision"]),
        out=cfg["out"],
    )


def config_to_mapping(rc: RunConfig) -> dict:
    """Inverse of run_config_from_mapping over the DEFAULTS keys."""
    sc, bat = rc.scenario, rc.battery
    d_tot = sc.d1_m + sc.d2_m
    return {
        "eta": bat.rfeh_efficiency,
        "d1_frac": sc.d1_m / d_tot,
        "d2_frac": sc.d2_m / d_tot,
        "d_tot_m": d_tot,
        "delta": sc.delta,
        "cb_mah": bat.capacity_ah * 1000.0,
        "dd": bat.discharge_depth,
        "vb": bat.voltage_v,
        "ps_dbm": 10.0 * math.log10(sc.ps_watts) + 30.0,
        "n": sc.channel.n_elements,
        "trials": rc.trials,
        "seed": rc.seed,
        "grid_min": rc.grid_min,
        "grid_max": rc.grid_max,
        "grid_points": rc.grid_points,
        "grid_scale": rc.grid_scale,
        "precision": rc.precision,
        "out": rc.out,
    }


def serialize_config(rc: RunConfig) -> str:
    lines = [f"{k} = {v}" for k, v in config_to_mapping(rc).items()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# formatting and output helpers
# ---------------------------------------------------------------------------

def _fmt(value, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return ""
    return f"{value:.{precision}g}"


def write_csv(path: str, header: list, rows, precision: int):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(
                cell if isinstance(cell, str) else _fmt(cell, precision)
                for cell in row) + "\n")


def _emp_pdf_column(sample: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Histogram density on Freedman-Diaconis bins (floor of 50)."""
    q75, q25 = np.percentile(sample, [75, 25])
    iqr = q75 - q25
    n = len(sample)
    if iqr > 0:
        width = 2.0 * iqr / n ** (1.0 / 3.0)
        bins = max(50, int(math.ceil((sample[-1] - sample[0]) / width)))
    else:
        bins = 50
    bins = min(bins, 100_000)
    hist, edges = np.histogram(sample, bins=bins, density=True)
    idx = np.searchsorted(edges, grid, side="right") - 1
    out = np.zeros_like(grid)
    ok = (idx >= 0) & (idx < len(hist))
    out[ok] = hist[idx[ok]]
    return out


def _emp_cdf_column(sample: np.ndarray, grid: np.ndarray) -> np.ndarray:
    return np.searchsorted(sample, grid, side="right") / len(sample)


# ---------------------------------------------------------------------------
# analytic variant columns
# ---------------------------------------------------------------------------

def _gain_pdf_n1(x):
    x = np.asarray(x, dtype=float)
    return x * _k0e(x) * np.exp(-x)


def _gain_cdf_n1(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore"):
        tail = np.where(x > 0, x * _k1e(x) * np.exp(-x), 1.0)
    return np.clip(1.0 - tail, 0.0, 1.0)


def _gain_pdf_clt(x, n):
    mu, sig = clt_gain_params(n)
    x = np.asarray(x, dtype=float)
    la = -0.5 * ((x - mu) / sig) ** 2
    lb = -0.5 * ((x + mu) / sig) ** 2
    return np.exp(np.logaddexp(la, lb)) / (sig * math.sqrt(2.0 * math.pi))


def _gain_cdf_clt(x, n):
    mu, sig = clt_gain_params(n)
    x = np.asarray(x, dtype=float)
    return np.clip(_ndtr((x - mu) / sig) - _ndtr((-x - mu) / sig), 0.0, 1.0)


def _variant_column(kind: str, target: str, variant: str, grid: np.ndarray,
                    rc: RunConfig, params, alpha: float, sample: np.ndarray | None):
    sc = rc.scenario
    n = sc.channel.n_elements
    if variant == "empirical":
        fn = _emp_pdf_column if kind == "pdf" else _emp_cdf_column
        return fn(sample, grid)
    if target == "gain":
        if variant == "exact":
            return gain_pdf(grid, params) if kind == "pdf" else gain_cdf(grid, params)
        if variant == "n1":
            return _gain_pdf_n1(grid) if kind == "pdf" else _gain_cdf_n1(grid)
        return _gain_pdf_clt(grid, n) if kind == "pdf" else _gain_cdf_clt(grid, n)
    if target == "power":
        if variant == "exact":
            return (power_pdf(grid, sc, params) if kind == "pdf"
                    else power_cdf(grid, sc, params))
        if variant == "n1":
            return power_pdf_n1(grid, sc) if kind == "pdf" else power_cdf_n1(grid, sc)
        return power_pdf_clt(grid, sc) if kind == "pdf" else power_cdf_clt(grid, sc)
    if variant == "exact":
        return (brt_pdf(grid, sc, params, alpha) if kind == "pdf"
                else brt_cdf(grid, sc, params, alpha))
    if variant == "n1":
        return (brt_pdf_n1(grid, sc, alpha) if kind == "pdf"
                else brt_cdf_n1(grid, sc, alpha))
    return (brt_pdf_clt(grid, sc, alpha) if kind == "pdf"
            else brt_cdf_clt(grid, sc, alpha))


def _target_sample(target: str, rc: RunConfig, alpha: float) -> np.ndarray:
    if target == "gain":
        return np.sort(mc.sample_gain_batch(rc.scenario.channel, rc.trials, rc.seed))
    power_s, brt_s = mc.simulate(rc.scenario, rc.battery, rc.trials, rc.seed)
    return power_s.values if target == "power" else brt_s.values


def _make_grid(rc: RunConfig, target: str, alpha: float) -> np.ndarray:
    lo, hi = rc.grid_min, rc.grid_max
    if hi <= 0.0:
        pilot = min(rc.trials, 20_000)
        if target == "gain":
            s = np.sort(mc.sample_gain_batch(rc.scenario.channel, pilot, rc.seed))
        else:
            p_s, b_s = mc.simulate(rc.scenario, rc.battery, pilot, rc.seed)
            s = p_s.values if target == "power" else b_s.values
        qlo, qhi = np.quantile(s, [1e-3, 1.0 - 1e-3])
        lo, hi = 0.8 * qlo, 1.25 * qhi
    if rc.grid_scale == "log":
        lo = max(lo, 1e-300)
        return np.geomspace(lo, hi, rc.grid_points)
    return np.linspace(lo, hi, rc.grid_points)


def cmd_density(kind: str, rc: RunConfig, target: str, variants: list):
    """Shared implementation of the pdf and cdf subcommands."""
    n = rc.scenario.channel.n_elements
    valid = {"exact", "n1", "clt", "empirical"}
    for v in variants:
        if v not in valid:
            raise UsageError(f"unknown variant {v!r} (choose from {sorted(valid)})")
    if "n1" in variants and n != 1:
        raise UsageError("variant 'n1' requires n = 1")
    if target not in ("gain", "power", "brt"):
        raise UsageError(f"unknown target {target!r}")
    alpha = conversion_coefficient(rc.battery)
    params = fit_approximant(gain_moments(rc.scenario.channel)) \
        if "exact" in variants else None
    sample = _target_sample(target, rc, alpha) if "empirical" in variants else None
    grid = _make_grid(rc, target, alpha)
    if kind == "pdf":
        grid = grid[grid > 0]
    cols = [_variant_column(kind, target, v, grid, rc, params, alpha, sample)
            for v in variants]
    header = ["x"] + list(variants)
    rows = ([g] + [c[i] for c in cols] for i, g in enumerate(grid))
    out = rc.out or f"{target}_{kind}.csv"
    write_csv(out, header, rows, rc.precision)
    return out


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

SWEEP_HEADER = ["axis_value", "mean_hr", "mean_clt_hr", "variance", "skewness",
                "kurtosis", "aof", "mc_mean_hr", "mc_se", "ks"]


def _apply_axis(rc: RunConfig, axis: str, value: float) -> RunConfig:
    sc = rc.scenario
    if axis == "n":
        n = int(value)
        if n < 1:
            raise ValueError(f"n must be >= 1, got {value}")
        return replace(rc, scenario=replace(sc, channel=ChannelConfig(n)))
    if axis == "ps_dbm":
        return replace(rc, scenario=replace(sc, ps_watts=dbm_to_watts(value)))
    if axis == "d1_frac":
        if not 0.0 < value < 1.0:
            raise ValueError(f"d1_frac must be in (0, 1), got {value}")
        d_tot = sc.d1_m + sc.d2_m
        return replace(rc, scenario=replace(
            sc, d1_m=value * d_tot, d2_m=(1.0 - value) * d_tot))
    if axis == "cb_mah":
        return replace(rc, battery=replace(rc.battery, capacity_ah=value / 1000.0))
    raise UsageError(f"unknown sweep axis {axis!r}")


def _sweep_row(rc: RunConfig, axis_value: float):
    sc = rc.scenario
    alpha = conversion_coefficient(rc.battery)
    params = fit_approximant(gain_moments(sc.channel))
    summary = brt_summary(sc, params, alpha)
    power_s, brt_s = mc.simulate(sc, rc.battery, rc.trials, rc.seed)
    (mc_mean, mc_se), = mc.empirical_moments(brt_s, 1)
    if sc.channel.n_elements == 1:
        ks = mc.ks_distance(brt_s, lambda t: brt_cdf_n1(t, sc, alpha))
    else:
        ks = mc.ks_distance(brt_s, lambda t: brt_cdf(t, sc, params, alpha))
    return [axis_value, summary.mean, brt_mean_clt(sc, alpha), summary.variance,
            summary.skewness, summary.kurtosis, summary.aof, mc_mean, mc_se, ks]


def cmd_sweep(rc: RunConfig, axis: str, values: list):
    rows = []
    for v in values:
        try:
            rows.append(_sweep_row(_apply_axis(rc, axis, v), v))
        except (ValueError, IllConditionedError, ConvergenceError, ContourError) as exc:
            print(f"sweep: {axis}={v}: {exc}", file=sys.stderr)
            rows.append([v] + [None] * (len(SWEEP_HEADER) - 1))
    out = rc.out or f"sweep_{axis}.csv"
    write_csv(out, SWEEP_HEADER, rows, rc.precision)
    return out


# ---------------------------------------------------------------------------
# mc-validate
# ---------------------------------------------------------------------------

def _ks_status(ks: float, threshold: float, trials: int):
    noise = 1.6276 / math.sqrt(trials)  # 99th percentile of the null KS
    if ks <= threshold:
        return "pass"
    if threshold < 3.0 * noise and ks <= threshold + 3.0 * noise:
        return "inconclusive"
    return "fail"


def _moment_status(dev_se):
    if dev_se is None:
        return "undefined (divergent)"
    return "pass" if abs(dev_se) <= 3.0 else "fail"


def reference_checks(rc: RunConfig) -> dict:
    """Compare model outputs against the reference operating points.

    Mismatches never fail the run: the Monte Carlo estimate is authoritative
    and the deviation is recorded here.
    """
    out = {}
    trials = min(rc.trials, 200_000)
    mode_cfg = run_config_from_mapping({"ps_dbm": 15.0, "trials": trials,
                                        "seed": rc.seed})
    modes = {}
    for n_ref, quoted in sorted(REFERENCE_MODE_HR.items()):
        rcn = _apply_axis(mode_cfg, "n", n_ref)
        alpha = conversion_coefficient(rcn.battery)
        params = fit_approximant(gain_moments(rcn.scenario.channel))
        taus = np.geomspace(0.01, 5.0, 1200)
        dens = brt_pdf(taus, rcn.scenario, params, alpha)
        mode = float(taus[int(np.argmax(dens))])
        modes[str(n_ref)] = {
            "model_hr": mode,
            "reference_hr": quoted,
            "rel_dev": mode / quoted - 1.0,
            "within_25pct": bool(abs(mode / quoted - 1.0) <= 0.25),
        }
    out["brt_mode_ps15dbm"] = modes
    mean_cfg = run_config_from_mapping({"ps_dbm": 20.0, "cb_mah": 10.0,
                                        "trials": trials, "seed": rc.seed})
    means = {}
    for n_ref, quoted in sorted(REFERENCE_MEAN_HR.items()):
        rcn = _apply_axis(mean_cfg, "n", n_ref)
        alpha = conversion_coefficient(rcn.battery)
        params = fit_approximant(gain_moments(rcn.scenario.channel))
        analytic = brt_moment(1, rcn.scenario, params, alpha)
        _, brt_s = mc.simulate(rcn.scenario, rcn.battery, trials, rcn.seed)
        (mc_mean, mc_se), = mc.empirical_moments(brt_s, 1)
        means[str(n_ref)] = {
            "model_hr": analytic,
            "mc_hr": mc_mean,
            "mc_se": mc_se,
            "reference_hr": quoted,
            "rel_dev": mc_mean / quoted - 1.0,
            "within_25pct": bool(abs(mc_mean / quoted - 1.0) <= 0.25),
        }
    out["brt_mean_ps20dbm_cb10mah"] = means
    return out


def cmd_mc_validate(rc: RunConfig, include_reference_checks: bool = False) -> dict:
    sc = rc.scenario
    n = sc.channel.n_elements
    alpha = conversion_coefficient(rc.battery)
    params = fit_approximant(gain_moments(sc.channel))

    gains = np.sort(mc.sample_gain_batch(sc.channel, rc.trials, rc.seed))
    gain_s = mc.EmpiricalSample(gains, rc.trials, rc.seed, "gain")
    power_s, brt_s = mc.simulate(sc, rc.battery, rc.trials, rc.seed)

    ks_threshold = 0.005 if n == 1 else 0.01
    if n == 1:
        ks_gain = mc.ks_distance(gain_s, _gain_cdf_n1)
        ks_power = mc.ks_distance(power_s, lambda x: power_cdf_n1(x, sc))
        ks_brt = mc.ks_distance(brt_s, lambda t: brt_cdf_n1(t, sc, alpha))
    else:
        ks_gain = mc.ks_distance(gain_s, lambda x: gain_cdf(x, params))
        ks_power = mc.ks_distance(power_s, lambda x: power_cdf(x, sc, params))
        ks_brt = mc.ks_distance(brt_s, lambda t: brt_cdf(t, sc, params, alpha))

    mom = gain_moments(sc.channel)
    analytic_gain = [mom.mu1, mom.mu2, mom.mu3, mom.mu4]
    gain_rows = []
    for order, (emp, se) in enumerate(mc.empirical_moments(gain_s, 4), start=1):
        ana = analytic_gain[order - 1]
        dev = (ana - emp) / se if se > 0 else 0.0
        gain_rows.append({
            "order": order, "analytic": ana, "empirical": emp, "se": se,
            "dev_se": dev, "status": _moment_status(dev),
        })
    brt_rows = []
    for order, (emp, se) in enumerate(mc.empirical_moments(brt_s, 2), start=1):
        try:
            ana = brt_moment(order, sc, params, alpha)
            dev = (ana - emp) / se if se > 0 else 0.0
            brt_rows.append({
                "order": order, "analytic": ana, "empirical": emp, "se": se,
                "dev_se": dev, "status": _moment_status(dev),
            })
        except MomentUndefinedError:
            brt_rows.append({
                "order": order, "analytic": None, "empirical": emp, "se": se,
                "dev_se": None, "status": "undefined (divergent)",
            })

    checks = {
        "ks_gain": _ks_status(ks_gain, ks_threshold, rc.trials),
        "ks_power": _ks_status(ks_power, ks_threshold, rc.trials),
        "ks_brt": _ks_status(ks_brt, ks_threshold, rc.trials),
    }
    for row in gain_rows:
        checks[f"gain_moment_{row['order']}"] = row["status"]
    for row in brt_rows:
        if row["status"] != "undefined (divergent)":
            checks[f"brt_moment_{row['order']}"] = row["status"]
    statuses = set(checks.values())
    overall = ("fail" if "fail" in statuses
               else "inconclusive" if "inconclusive" in statuses else "pass")

    report = {
        "n": n,
        "trials": rc.trials,
        "seed": rc.seed,
        "backend": mc.active_backend(),
        "ks_gain": ks_gain,
        "ks_power": ks_power,
        "ks_brt": ks_brt,
        "ks_threshold": ks_threshold,
        "moments": {"gain": gain_rows, "brt": brt_rows},
        "checks": checks,
        "status": overall,
    }
    if include_reference_checks:
        report["reference_checks"] = reference_checks(rc)
    return report


# ---------------------------------------------------------------------------
# figure presets
# ---------------------------------------------------------------------------

def _preset_density_family(kind, target, rc, ns, clt_ns, grid, prefix, outdir):
    """One file per variant family; columns are labeled n<N>."""
    files = []
    exact_cols, emp_cols, clt_cols = [], [], []
    for n in ns:
        rcn = _apply_axis(rc, "n", n)
        alpha = conversion_coefficient(rcn.battery)
        params = (fit_approximant(gain_moments(rcn.scenario.channel))
                  if n > 1 else None)
        if n == 1:
            exact_cols.append(_variant_column(kind, target, "n1", grid, rcn,
                                              None, alpha, None))
        else:
            exact_cols.append(_variant_column(kind, target, "exact", grid, rcn,
                                              params, alpha, None))
        sample = _target_sample(target, rcn, alpha)
        emp_cols.append(_variant_column(kind, target, "empirical", grid, rcn,
                                        None, alpha, sample))
        if n in clt_ns:
            clt_cols.append((n, _variant_column(kind, target, "clt", grid, rcn,
                                                None, alpha, None)))
    for name, cols, labels in (
            ("exact", exact_cols, ns),
            ("empirical", emp_cols, ns),
            ("clt", [c for _, c in clt_cols], [n for n, _ in clt_cols])):
        if not cols:
            continue
        path = f"{outdir}/{prefix}_{name}.csv"
        header = ["x"] + [f"n{n}" for n in labels]
        rows = ([g] + [c[i] for c in cols] for i, g in enumerate(grid))
        write_csv(path, header, rows, rc.precision)
        files.append(path)
    return files


def cmd_fig(rc: RunConfig, fig: int, outdir: str):
    files = []
    if fig == 1:
        base = run_config_from_mapping({"ps_dbm": 15.0, "trials": rc.trials,
                                        "seed": rc.seed})
        grid = np.geomspace(5e-4, 3.0, 500)
        files += _preset_density_family("pdf", "brt", base, [4, 6, 8, 10, 50],
                                        {10, 50}, grid, "fig1_brt_pdf", outdir)
    elif fig == 2:
        for ps in (7.0, 15.0, 40.0):
            base = run_config_from_mapping({"ps_dbm": ps, "trials": rc.trials,
                                            "seed": rc.seed})
            grid = np.geomspace(1e-3, 1e4, 500)
            files += _preset_density_family("pdf", "brt", base, [1, 2, 4], set(),
                                            grid, f"fig2_ps{ps:.0f}dbm_brt_pdf",
                                            outdir)
    elif fig == 3:
        for ps in (7.0, 30.0):
            base = run_config_from_mapping({"ps_dbm": ps, "trials": rc.trials,
                                            "seed": rc.seed})
            grid = np.geomspace(1e-3, 1e4, 500)
            files += _preset_density_family("cdf", "brt", base, [1, 2, 4], set(),
                                            grid, f"fig3_ps{ps:.0f}dbm_brt_cdf",
                                            outdir)
    elif fig == 4:
        ps_values = [float(v) for v in np.arange(0.0, 41.0, 2.5)]
        for n in (5, 10, 20, 50):
            base = run_config_from_mapping({"n": n, "trials": rc.trials,
                                            "seed": rc.seed})
            out = f"{outdir}/fig4_n{n}_mean_vs_ps.csv"
            cmd_sweep(replace(base, out=out), "ps_dbm", ps_values)
            files.append(out)
    elif fig == 5:
        fracs = [round(f, 3) for f in np.linspace(0.05, 0.95, 19)]
        for n in (5, 10, 20):
            base = run_config_from_mapping({"n": n, "ps_dbm": 20.0,
                                            "trials": rc.trials, "seed": rc.seed})
            out = f"{outdir}/fig5_n{n}_mean_vs_d1frac.csv"
            cmd_sweep(replace(base, out=out), "d1_frac", fracs)
            files.append(out)
    elif fig == 6:
        caps = [float(v) for v in range(2, 21, 2)]
        for n in (5, 10, 20):
            base = run_config_from_mapping({"n": n, "ps_dbm": 20.0,
                                            "trials": rc.trials, "seed": rc.seed})
            out = f"{outdir}/fig6_n{n}_mean_vs_cb.csv"
            cmd_sweep(replace(base, out=out), "cb_mah", caps)
            files.append(out)
        ref = reference_checks(run_config_from_mapping(
            {"trials": rc.trials, "seed": rc.seed}))
        path = f"{outdir}/fig6_reference_check.json"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(ref, fh, indent=2)
            fh.write("\n")
        files.append(path)
    elif fig == 7:
        # smallest N with a defined amount-of-fading is 3 (the recharge-time
        # second moment diverges below that); the SISO baseline column is the
        # amount of fading of the single-antenna received power (unit for
        # Rayleigh fading).
        rows = []
        for n in (3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 32, 40, 48, 56, 64):
            base = run_config_from_mapping({"n": n, "ps_dbm": 20.0,
                                            "trials": rc.trials, "seed": rc.seed})
            alpha = conversion_coefficient(base.battery)
            params = fit_approximant(gain_moments(base.scenario.channel))
            s = brt_summary(base.scenario, params, alpha)
            rows.append([n, s.aof, 1.0])
        out = f"{outdir}/fig7_aof_vs_n.csv"
        write_csv(out, ["n", "aof", "aof_siso"], rows, rc.precision)
        files.append(out)
    else:
        raise UsageError(f"fig must be 1..7, got {fig}")
    return files


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class UsageError(ValueError):
    pass


def _add_overrides(parser):
    parser.add_argument("--config", metavar="PATH", help="flat key = value file")
    for key in DEFAULTS:
        flag = "--" + key.replace("_", "-")
        parser.add_argument(flag, dest=key, default=None, metavar="V")


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="risbrt",
        description="Recharge-time statistics for RIS-assisted wireless power "
                    "transfer: analytic laws, sweeps, and Monte Carlo validation.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_pdf = sub.add_parser("pdf", help="density columns on a grid -> CSV")
    p_cdf = sub.add_parser("cdf", help="distribution columns on a grid -> CSV")
    for p in (p_pdf, p_cdf):
        p.add_argument("--target", required=True, choices=["gain", "power", "brt"])
        p.add_argument("--variants", default="exact",
                       help="comma list from exact,n1,clt,empirical")
        _add_overrides(p)

    p_sw = sub.add_parser("sweep", help="summary statistics along an axis -> CSV")
    p_sw.add_argument("--axis", required=True,
                      choices=["n", "ps_dbm", "d1_frac", "cb_mah"])
    p_sw.add_argument("--values", required=True, help="comma-separated values")
    _add_overrides(p_sw)

    p_mc = sub.add_parser("mc-validate", help="analytic-vs-MC report -> JSON")
    p_mc.add_argument("--reference-checks", action="store_true",
                      help="include the reference operating-point comparisons")
    _add_overrides(p_mc)

    p_fig = sub.add_parser("fig", help="figure presets 1..7 -> CSV family")
    p_fig.add_argument("number", type=int, help="preset number, 1..7")
    p_fig.add_argument("--out-dir", default=".", help="output directory")
    _add_overrides(p_fig)
    return ap


def _collect_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return run_config_from_mapping(values)


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        rc = _collect_config(args)
        if args.command in ("pdf", "cdf"):
            variants = [v.strip() for v in args.variants.split(",") if v.strip()]
            out = cmd_density(args.command, rc, args.target, variants)
            print(out)
        elif args.command == "sweep":
            values = [float(v) for v in args.values.split(",") if v.strip()]
            if not values:
                raise UsageError("--values must be a nonempty comma list")
            out = cmd_sweep(rc, args.axis, values)
            print(out)
        elif args.command == "mc-validate":
            report = cmd_mc_validate(rc, include_reference_checks=args.reference_checks)
            text = json.dumps(report, indent=2)
            if rc.out:
                with open(rc.out, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text + "\n")
            print(text)
            if report["status"] == "fail":
                return 3
        elif args.command == "fig":
            for path in cmd_fig(rc, args.number, args.out_dir):
                print(path)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (IllConditionedError, MomentUndefinedError, ConvergenceError,
            ContourError, ValueError, OverflowError) as exc:
        print(f"numeric/domain failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
