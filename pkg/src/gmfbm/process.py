"""The generalized mixed process a*B^H1 + b*B^H2, its composition with a
random clock, and exact (semi-analytic) second-order oracles.

With the clock S independent of both motions, conditioning on S at two
times and using stationary increments of each motion gives

    Cov(Y_s, Y_t) = a**2/2 [m(t,2H1) + m(s,2H1) - m(t-s,2H1)]
                  + b**2/2 [m(t,2H2) + m(s,2H2) - m(t-s,2H2)]

where m(t,q) = E[S_t**q]; the cross term vanishes because the two motions
are independent and centered.  These oracle values are the ground truth the
Monte Carlo layer is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gmfbm import fbm
from gmfbm.fbm import TimeGrid, as_hurst, as_time_grid
from gmfbm.randkit import RngStream, derive_substream
from gmfbm.subordinators import (
    SubordinatorSpec,
    sample_increment,
    sample_path,
    subordinator_moment,
)

# substream lanes so each component of a path draws from its own block
_LANE_CLOCK = 0
_LANE_FBM1 = 1
_LANE_FBM2 = 2


@dataclass(frozen=True)
class GmfbmParams:
    """Mixing coefficients and Hurst pair of a*B^H1 + b*B^H2.

    Construction canonicalizes to h1 <= h2 by swapping (a, h1) with (b, h2)
    when needed; the law of the sum is unchanged.
    """

    a: float
    b: float
    h1: float
    h2: float

    def __post_init__(self):
        h1 = as_hurst(self.h1)
        h2 = as_hurst(self.h2)
        a = float(self.a)
        b = float(self.b)
        if a == 0.0 and b == 0.0:
            raise ValueError("a and b must not both be zero")
        if h1 > h2:
            a, b = b, a
            h1, h2 = h2, h1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)


@dataclass(frozen=True)
class TimeChangedSpec:
    """The mixed process run on a subordinator clock."""

    gmfbm: GmfbmParams
    subordinator: SubordinatorSpec


@dataclass(frozen=True)
class ProcessPath:
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.grid),):
            raise ValueError("values must match the grid length")
        object.__setattr__(self, "values", values)


def gmfbm_cov(s: float, t: float, p: GmfbmParams) -> float:
    """Covariance a**2 C_H1(s,t) + b**2 C_H2(s,t) of the mixed process."""
    return (p.a ** 2 * fbm.fbm_cov(s, t, p.h1)
            + p.b ** 2 * fbm.fbm_cov(s, t, p.h2))


def sample_gmfbm_given_clock(p: GmfbmParams, clock_values, stream: RngStream,
                             size=None) -> np.ndarray:
    """Mixed-process values at the (nondecreasing) clock times.

    Each motion is sampled exactly at the clock times from its own
    substream, then mixed.  Repeated clock times are handled by the
    duplicate-collapsing sampler underneath.
    """
    clock_values = np.asarray(clock_values, dtype=float)
    b1 = fbm.fbm_values_at_times(clock_values, p.h1,
                                 derive_substream(stream, _LANE_FBM1), size=size)
    b2 = fbm.fbm_values_at_times(clock_values, p.h2,
                                 derive_substream(stream, _LANE_FBM2), size=size)
    return p.a * b1 + p.b * b2


def sample_gmfbm_at(grid, p: GmfbmParams, stream: RngStream, size=None) -> np.ndarray:
    """Exact sample of the mixed process on a TimeGrid (identity clock)."""
    return sample_gmfbm_given_clock(p, as_time_grid(grid).times, stream, size=size)


def sample_timechanged_pair(spec: TimeChangedSpec, s: float, t: float,
                            stream: RngStream, size=None):
    """Exact draw of (Y_s, Y_t) for 0 < s < t at O(1) cost per path.

    The clock is sampled as S_s plus an independent increment over t-s;
    each motion then contributes an exact bivariate pair at the two clock
    times.  All draws come sequentially from ``stream``.  This is the
    workhorse of the Monte Carlo covariance estimator.
    """
    if not 0.0 < s < t:
        raise ValueError(f"need 0 < s < t, got s={s}, t={t}")
    u = sample_increment(spec.subordinator, s, stream, size=size)
    v = u + sample_increment(spec.subordinator, t - s, stream, size=size)
    p = spec.gmfbm
    b1_u, b1_v = fbm.sample_fbm_pair(u, v, p.h1, stream)
    b2_u, b2_v = fbm.sample_fbm_pair(u, v, p.h2, stream)
    y_s = p.a * b1_u + p.b * b2_u
    y_t = p.a * b1_v + p.b * b2_v
    if size is None:
        return float(y_s), float(y_t)
    return y_s, y_t


def sample_timechanged_path_with_clock(spec: TimeChangedSpec, grid,
                                       stream: RngStream):
    """Sample the clock on the grid and the mixed process at the clock times.

    Returns (SubordinatorPath, ProcessPath); the CLI uses both columns.
    """
    grid = as_time_grid(grid)
    clock = sample_path(spec.subordinator, grid,
                        derive_substream(stream, _LANE_CLOCK))
    values = sample_gmfbm_given_clock(spec.gmfbm, clock.values, stream)
    return clock, ProcessPath(grid, values)


def sample_timechanged_path(spec: TimeChangedSpec, grid, stream: RngStream) -> ProcessPath:
    """Sample the clock on the grid, then the mixed process at the clock times."""
    return sample_timechanged_path_with_clock(spec, grid, stream)[1]


# ---------------------------------------------------------------------------
# Exact second-order oracles
# ---------------------------------------------------------------------------

def exact_var_oracle(spec: TimeChangedSpec, t: float) -> float:
    """Var(Y_t) = a**2 m(t, 2H1) + b**2 m(t, 2H2)."""
    if not t > 0.0:
        raise ValueError("need t > 0")
    p = spec.gmfbm
    return (p.a ** 2 * subordinator_moment(spec.subordinator, t, 2.0 * p.h1)
            + p.b ** 2 * subordinator_moment(spec.subordinator, t, 2.0 * p.h2))


def exact_cov_oracle(spec: TimeChangedSpec, s: float, t: float) -> float:
    """Cov(Y_s, Y_t) from clock moments; symmetric, exact up to quadrature.

    Uses stationarity of clock increments: E[S_t - S_s]**q terms reduce to
    m(|t-s|, q).
    """
    if not (s > 0.0 and t > 0.0):
        raise ValueError("need s > 0 and t > 0")
    if s == t:
        return exact_var_oracle(spec, t)
    p = spec.gmfbm
    d = abs(t - s)

    def block(coeff: float, h: float) -> float:
        q = 2.0 * h
        m = lambda tt: subordinator_moment(spec.subordinator, tt, q)
        return 0.5 * coeff ** 2 * (m(t) + m(s) - m(d))

    return block(p.a, p.h1) + block(p.b, p.h2)


def exact_increment_second_moment(spec: TimeChangedSpec, s: float, t: float) -> float:
    """E[(Y_t - Y_s)**2] = Var(Y_t) + Var(Y_s) - 2 Cov(Y_s, Y_t).

    By clock-increment stationarity this collapses to
    a**2 m(t-s, 2H1) + b**2 m(t-s, 2H2), so it depends on t-s only.
    """
    if not 0.0 < s < t:
        raise ValueError(f"need 0 < s < t, got s={s}, t={t}")
    return (exact_var_oracle(spec, t) + exact_var_oracle(spec, s)
            - 2.0 * exact_cov_oracle(spec, s, t))
