"""Simulation and numerical verification toolkit for generalized mixed
fractional Brownian motion run on a random clock (tempered stable or Gamma
subordinator): exact samplers, semi-analytic covariance oracles, asymptotic
formula evaluators, and Monte Carlo estimators with error control.
"""

from gmfbm.randkit import (
    RngStream,
    derive_stream,
    derive_substream,
    sample_gamma,
    sample_stable_subordinator_increment,
    sample_std_normal,
    sample_tempered_stable_increment,
)
from gmfbm.fbm import (
    ConditioningError,
    HurstIndex,
    TimeGrid,
    fbm_cov,
    fbm_cov_matrix,
    sample_fbm_at,
    sample_fbm_pair,
    sample_fgn_regular,
)
from gmfbm.subordinators import (
    GammaParams,
    QuadratureError,
    SubordinatorPath,
    SubordinatorSpec,
    TssParams,
    gamma_moment,
    gamma_moment_asymptotic,
    sample_path,
    subordinator_moment,
    subordinator_moment_asymptotic,
    tss_moment,
    tss_moment_asymptotic,
)
from gmfbm.process import (
    GmfbmParams,
    ProcessPath,
    TimeChangedSpec,
    exact_cov_oracle,
    exact_increment_second_moment,
    exact_var_oracle,
    gmfbm_cov,
    sample_gmfbm_at,
    sample_gmfbm_given_clock,
    sample_timechanged_pair,
    sample_timechanged_path,
)
from gmfbm.theory import (
    DecayPrediction,
    corr_decay_prediction,
    cov_asymptotic,
    cov_asymptotic_gamma,
    cov_asymptotic_tss,
    increment_sm_asymptotic_gamma,
    increment_sm_asymptotic_tss,
    is_lrd,
)
from gmfbm.mclab import (
    DecayFit,
    LrdReport,
    MomentEstimate,
    corr_curve_oracle,
    estimate_corr,
    estimate_cov,
    estimate_increment_sm,
    fit_decay,
    lrd_report,
)

__version__ = "0.1.0"
