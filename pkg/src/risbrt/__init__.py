"""Battery-recharging-time statistics for RIS-assisted wireless power transfer.

Closed-form distributions and moments of the recharge time of an
energy-harvesting node behind an N-element reflecting surface, validated
against a seeded Monte Carlo fading simulator.
"""

from .brt import (
    BatteryProfile,
    BrtSummary,
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
    ApproximantParams,
    ChannelConfig,
    GainMoments,
    IllConditionedError,
    fit_approximant,
    gain_cdf,
    gain_moments,
    gain_pdf,
)
from .montecarlo import (
    EmpiricalSample,
    empirical_moments,
    ks_distance,
    sample_gain,
    sample_gain_batch,
    simulate,
)
from .power import (
    ScenarioConfig,
    avg_received_power,
    dbm_to_watts,
    power_cdf,
    power_cdf_clt,
    power_cdf_n1,
    power_pdf,
    power_pdf_clt,
    power_pdf_clt_folded,
    power_pdf_n1,
    watts_to_dbm,
)
from .specfun import (
    ConvergenceError,
    ContourError,
    MeijerGSpec,
    bessel_i_neg_half,
    bessel_k0,
    gamma_fn,
    log_bessel_k0,
    log_exp_bessel,
    log_gamma,
    meijer_g,
    meijer_g_log,
    mellin_barnes_oracle,
    mellin_barnes_oracle_log,
)

__version__ = "0.1.0"
