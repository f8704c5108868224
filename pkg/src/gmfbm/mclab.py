"""Monte Carlo estimation of second-order statistics of the time-changed
process, with standard errors, power-law decay fitting, and the combined
long-range-dependence report.

Every estimator draws path i from the stream keyed (master_seed, i), fills
a slot indexed by i, and reduces the full array once, so results are
bit-identical for a fixed master seed no matter how the paths are
partitioned across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from gmfbm import theory
from gmfbm.process import (
    TimeChangedSpec,
    exact_cov_oracle,
    exact_var_oracle,
    sample_timechanged_pair,
)
from gmfbm.randkit import derive_stream
from gmfbm.theory import DecayPrediction

# stream id reserved for bootstrap resampling, far above any path index
_BOOTSTRAP_STREAM_ID = (1 << 64) - 1
_BOOTSTRAP_RESAMPLES = 200


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo point estimate with its standard error."""

    value: float
    stderr: float
    n_paths: int

    def __post_init__(self):
        if self.stderr < 0.0:
            raise ValueError("stderr must be nonnegative")
        if self.n_paths < 1:
            raise ValueError("n_paths must be positive")


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of log(value) on log(t)."""

    slope: float
    intercept: float
    slope_stderr: float
    r_squared: float

    def __post_init__(self):
        if self.slope_stderr < 0.0:
            raise ValueError("slope_stderr must be nonnegative")
        if not 0.0 <= self.r_squared <= 1.0:
            raise ValueError("r_squared must lie in [0, 1]")


def _sample_pairs(spec: TimeChangedSpec, s: float, t: float, n_paths: int,
                  master_seed: int, n_workers: int) -> tuple[np.ndarray, np.ndarray]:
    ys = np.empty(n_paths)
    yt = np.empty(n_paths)

    def fill(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            a, b = sample_timechanged_pair(spec, s, t, derive_stream(master_seed, i))
            ys[i] = a
            yt[i] = b

    if n_workers <= 1:
        fill(0, n_paths)
    else:
        chunk = -(-n_paths // n_workers)
        bounds = [(k * chunk, min((k + 1) * chunk, n_paths))
                  for k in range(n_workers) if k * chunk < n_paths]
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(lambda be: fill(*be), bounds))
    return ys, yt


def _check_estimator_args(s: float, t: float, n_paths: int,
                          allow_equal: bool = False) -> None:
    ordered = (0.0 < s <= t) if allow_equal else (0.0 < s < t)
    if not ordered:
        raise ValueError(f"need 0 < s {'<=' if allow_equal else '<'} t, "
                         f"got s={s}, t={t}")
    if n_paths < 100:
        raise ValueError(f"need at least 100 paths, got {n_paths}")


def estimate_cov(spec: TimeChangedSpec, s: float, t: float, n_paths: int,
                 master_seed: int, n_workers: int = 1) -> MomentEstimate:
    """Sample covariance of (Y_s, Y_t) over independent per-path streams.

    The standard error comes from the sample variance of the per-path
    centered products.
    """
    _check_estimator_args(s, t, n_paths)
    ys, yt = _sample_pairs(spec, s, t, n_paths, master_seed, n_workers)
    dev = (ys - ys.mean()) * (yt - yt.mean())
    value = dev.sum() / (n_paths - 1)
    stderr = dev.std(ddof=1) / math.sqrt(n_paths)
    return MomentEstimate(float(value), float(stderr), n_paths)


def estimate_corr(spec: TimeChangedSpec, s: float, t: float, n_paths: int,
                  master_seed: int, n_workers: int = 1) -> MomentEstimate:
    """Pearson correlation of (Y_s, Y_t), stderr by nonparametric bootstrap.

    The bootstrap uses 200 resamples drawn from a reserved stream id, so it
    never collides with path streams and is reproducible.  The degenerate
    case s == t returns correlation exactly 1.
    """
    _check_estimator_args(s, t, n_paths, allow_equal=True)
    if s == t:
        return MomentEstimate(1.0, 0.0, n_paths)
    ys, yt = _sample_pairs(spec, s, t, n_paths, master_seed, n_workers)
    value = _pearson(ys, yt)
    boot_stream = derive_stream(master_seed, _BOOTSTRAP_STREAM_ID)
    reps = np.empty(_BOOTSTRAP_RESAMPLES)
    for r in range(_BOOTSTRAP_RESAMPLES):
        idx = boot_stream.gen.integers(0, n_paths, size=n_paths)
        reps[r] = _pearson(ys[idx], yt[idx])
    boot_stream.counter += _BOOTSTRAP_RESAMPLES * n_paths
    return MomentEstimate(float(value), float(reps.std(ddof=1)), n_paths)


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    return float(xc @ yc / math.sqrt((xc @ xc) * (yc @ yc)))


def estimate_increment_sm(spec: TimeChangedSpec, s: float, t: float, n_paths: int,
                          master_seed: int, n_workers: int = 1) -> MomentEstimate:
    """Sample mean of (Y_t - Y_s)**2 with its standard error."""
    _check_estimator_args(s, t, n_paths)
    ys, yt = _sample_pairs(spec, s, t, n_paths, master_seed, n_workers)
    sq = (yt - ys) ** 2
    return MomentEstimate(float(sq.mean()),
                          float(sq.std(ddof=1) / math.sqrt(n_paths)), n_paths)


def corr_curve_oracle(spec: TimeChangedSpec, s: float, t_grid) -> list[tuple[float, float]]:
    """Noise-free correlation curve Corr(Y_s, Y_t) from the exact oracles."""
    var_s = exact_var_oracle(spec, s)
    out = []
    for t in np.asarray(t_grid, dtype=float):
        if t <= s:
            raise ValueError("all grid times must exceed s")
        corr = exact_cov_oracle(spec, s, t) / math.sqrt(exact_var_oracle(spec, t) * var_s)
        out.append((float(t), corr))
    return out


def fit_decay(points) -> DecayFit:
    """OLS fit of log(value) against log(t); the slope estimates -d for a
    power law c * t**-d.

    Requires at least 5 points with strictly positive t and value.
    """
    pts = [(float(t), float(v)) for t, v in points]
    if len(pts) < 5:
        raise ValueError(f"need at least 5 points, got {len(pts)}")
    t = np.array([p[0] for p in pts])
    v = np.array([p[1] for p in pts])
    if np.any(t <= 0.0) or np.any(v <= 0.0):
        raise ValueError("power-law fit requires strictly positive t and value")
    x = np.log(t)
    y = np.log(v)
    n = len(x)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ y) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    ssr = float(resid @ resid)
    sst = float((y - y.mean()) @ (y - y.mean()))
    slope_stderr = math.sqrt(ssr / (n - 2) / sxx)
    r_squared = 1.0 if sst == 0.0 else max(0.0, min(1.0, 1.0 - ssr / sst))
    return DecayFit(slope, intercept, slope_stderr, r_squared)


@dataclass(frozen=True)
class LrdReport:
    """Predicted vs measured correlation decay, plus the LRD verdict."""

    s: float
    predicted: DecayPrediction
    oracle_curve: list[tuple[float, float]]
    mc_curve: list[tuple[float, float, float]]
    oracle_fit: DecayFit
    mc_fit: DecayFit
    is_lrd: bool
    n_paths: int
    master_seed: int

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "predicted": {
                "exponent_mixed": self.predicted.exponent_mixed,
                "exponent_pure": self.predicted.exponent_pure,
                "dominant": self.predicted.dominant,
                "lrd_condition_holds": self.predicted.lrd_condition_holds,
            },
            "oracle_curve": [[t, c] for t, c in self.oracle_curve],
            "mc_curve": [[t, c, se] for t, c, se in self.mc_curve],
            "oracle_fit": _fit_dict(self.oracle_fit),
            "mc_fit": _fit_dict(self.mc_fit),
            "is_lrd": self.is_lrd,
            "n_paths": self.n_paths,
            "master_seed": self.master_seed,
        }


def _fit_dict(fit: DecayFit) -> dict:
    return {"slope": fit.slope, "intercept": fit.intercept,
            "slope_stderr": fit.slope_stderr, "r_squared": fit.r_squared}


def lrd_report(spec: TimeChangedSpec, s: float, t_grid, n_paths: int,
               master_seed: int, n_workers: int = 1) -> LrdReport:
    """Assemble predictions, oracle and Monte Carlo decay curves, and fits.

    The same master seed is reused at every grid time (common random
    numbers), which keeps the MC curve parallel to the oracle curve and
    sharpens the slope comparison.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    predicted = theory.corr_decay_prediction(spec)
    oracle_curve = corr_curve_oracle(spec, s, t_grid)
    mc_curve = []
    for t in t_grid:
        est = estimate_corr(spec, s, float(t), n_paths, master_seed, n_workers)
        mc_curve.append((float(t), est.value, est.stderr))
    oracle_fit = fit_decay(oracle_curve)
    mc_fit = fit_decay([(t, c) for t, c, _ in mc_curve])
    return LrdReport(
        s=float(s),
        predicted=predicted,
        oracle_curve=oracle_curve,
        mc_curve=mc_curve,
        oracle_fit=oracle_fit,
        mc_fit=mc_fit,
        is_lrd=theory.is_lrd(spec),
        n_paths=n_paths,
        master_seed=master_seed,
    )
