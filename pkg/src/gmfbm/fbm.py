"""Fractional Brownian motion: covariance, exact Gaussian sampling on
arbitrary grids (Cholesky), and a circulant-embedding fast path for long
regular grids.

The process B^H is centered Gaussian with B_0 = 0 and

    E[B_s B_t] = (s**2H + t**2H - |t-s|**2H) / 2,   0 < H < 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gmfbm.randkit import RngStream, sample_std_normal

# Jitter ladder for nearly singular covariance matrices (subordinated grids
# can contain almost-coincident times): start at 1e-12 of the max diagonal,
# escalate x10, give up past 1e-8.
_JITTER_START = 1e-12
_JITTER_MAX = 1e-8


class ConditioningError(RuntimeError):
    """Covariance factorization failed even after maximal diagonal jitter."""


@dataclass(frozen=True)
class HurstIndex:
    """Self-similarity exponent, constrained to the open interval (0,1)."""

    h: float

    def __post_init__(self):
        if not 0.0 < self.h < 1.0:
            raise ValueError(f"Hurst index must lie in (0,1), got {self.h}")


def as_hurst(h) -> float:
    """Coerce a float or HurstIndex to a validated float."""
    if isinstance(h, HurstIndex):
        return h.h
    return HurstIndex(float(h)).h


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing times, all nonnegative (only the first may be 0)."""

    times: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("time grid must be a nonempty 1-d array")
        if times[0] < 0.0:
            raise ValueError("times must be nonnegative")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return self.times.size

    @classmethod
    def regular(cls, n: int, dt: float) -> "TimeGrid":
        if n < 1 or dt <= 0.0:
            raise ValueError("need n >= 1 and dt > 0")
        return cls(dt * np.arange(1, n + 1))

    @classmethod
    def geometric(cls, t_min: float, t_max: float, count: int) -> "TimeGrid":
        if not 0.0 < t_min < t_max or count < 2:
            raise ValueError("need 0 < t_min < t_max and count >= 2")
        return cls(np.geomspace(t_min, t_max, count))


def as_time_grid(grid) -> TimeGrid:
    if isinstance(grid, TimeGrid):
        return grid
    return TimeGrid(np.asarray(grid, dtype=float))


def fbm_cov(s: float, t: float, h) -> float:
    """Covariance E[B_s B_t] = (s**2H + t**2H - |t-s|**2H)/2."""
    hh = as_hurst(h)
    if s < 0.0 or t < 0.0:
        raise ValueError("times must be nonnegative")
    two_h = 2.0 * hh
    return 0.5 * (s ** two_h + t ** two_h - abs(t - s) ** two_h)


def fbm_cov_matrix(grid, h) -> np.ndarray:
    """Covariance matrix of B^H on the grid; symmetric positive semidefinite."""
    hh = as_hurst(h)
    times = as_time_grid(grid).times
    return _cov_matrix_at(times, hh)


def _cov_matrix_at(times: np.ndarray, hh: float) -> np.ndarray:
    two_h = 2.0 * hh
    pw = times ** two_h
    return 0.5 * (pw[:, None] + pw[None, :]
                  - np.abs(times[:, None] - times[None, :]) ** two_h)


def _cholesky_with_jitter(cov: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        pass
    max_diag = float(np.max(np.diag(cov)))
    eps = _JITTER_START
    eye = np.eye(cov.shape[0])
    while eps <= _JITTER_MAX:
        try:
            return np.linalg.cholesky(cov + eps * max_diag * eye)
        except np.linalg.LinAlgError:
            eps *= 10.0
    raise ConditioningError(
        f"covariance factorization failed at jitter {_JITTER_MAX} * max diagonal "
        f"(n={cov.shape[0]}, max diag={max_diag:g})")


def fbm_values_at_times(times: np.ndarray, h, stream: RngStream, size=None) -> np.ndarray:
    """Exact joint Gaussian sample of B^H at nondecreasing ``times``.

    Unlike the TimeGrid-facing sampler this accepts repeated consecutive
    times (which subordinated clocks produce): duplicates are collapsed
    before factorization and the sampled values replicated, and any leading
    zeros are returned as exact zeros.
    """
    hh = as_hurst(h)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a nonempty 1-d array")
    if times[0] < 0.0 or np.any(np.diff(times) < 0.0):
        raise ValueError("times must be nonnegative and nondecreasing")
    uniq, inverse = np.unique(times, return_inverse=True)
    pos = uniq[uniq > 0.0]
    n_shape = (len(pos),) if size is None else (size, len(pos))
    if len(pos) == 0:
        sampled = np.zeros(n_shape)
    else:
        chol = _cholesky_with_jitter(_cov_matrix_at(pos, hh))
        z = sample_std_normal(stream, n_shape)
        sampled = z @ chol.T
    # prepend the analytic zero for t=0, then expand duplicates
    if len(pos) < len(uniq):
        zero = np.zeros(n_shape[:-1] + (1,))
        sampled = np.concatenate([zero, sampled], axis=-1)
    return sampled[..., inverse]


def sample_fbm_at(grid, h, stream: RngStream, size=None) -> np.ndarray:
    """Exact sample of B^H on a TimeGrid via Cholesky factorization.

    Returns shape (len(grid),), or (size, len(grid)) when ``size`` is given.
    """
    return fbm_values_at_times(as_time_grid(grid).times, h, stream, size=size)


def sample_fbm_pair(u, v, h, stream: RngStream, size=None):
    """Exact bivariate draw (B_u, B_v) for 0 <= u <= v.

    ``u`` and ``v`` may be arrays (elementwise pairs); scalar inputs return
    scalars unless ``size`` is given.  This is the O(1) sampler the Monte
    Carlo covariance estimator runs on; the scalar path stays off numpy so
    per-path estimation is cheap.
    """
    hh = as_hurst(h)
    if size is None and isinstance(u, float) and isinstance(v, float):
        if u < 0.0:
            raise ValueError("times must be nonnegative")
        if u > v:
            raise ValueError("need u <= v")
        z0 = stream.gen.standard_normal()
        z1 = stream.gen.standard_normal()
        stream.counter += 2
        two_h = 2.0 * hh
        var_u = u ** two_h
        b_u = var_u ** 0.5 * z0
        cov_uv = 0.5 * (var_u + v ** two_h - (v - u) ** two_h)
        slope = cov_uv / var_u if var_u > 0.0 else 0.0
        resid = v ** two_h - slope * cov_uv
        b_v = slope * b_u + max(resid, 0.0) ** 0.5 * z1
        return b_u, b_v

    u_arr = np.asarray(u, dtype=float)
    v_arr = np.asarray(v, dtype=float)
    if np.any(u_arr < 0.0) or np.any(v_arr < 0.0):
        raise ValueError("times must be nonnegative")
    if np.any(u_arr > v_arr):
        raise ValueError("need u <= v")
    scalar_in = u_arr.ndim == 0 and v_arr.ndim == 0 and size is None
    shape = np.broadcast_shapes(u_arr.shape, v_arr.shape)
    if size is not None:
        shape = (size,) + shape
    z = sample_std_normal(stream, (2,) + shape)
    two_h = 2.0 * hh
    var_u = np.broadcast_to(u_arr ** two_h, shape)
    b_u = np.sqrt(var_u) * z[0]
    cov_uv = np.broadcast_to(0.5 * (var_u + v_arr ** two_h
                                    - (v_arr - u_arr) ** two_h), shape)
    # conditional B_v | B_u; where u == 0 the slope is 0/0, fix it to 0
    slope = np.divide(cov_uv, var_u, out=np.zeros(shape), where=var_u > 0.0)
    resid = v_arr ** two_h - slope * cov_uv
    b_v = slope * b_u + np.sqrt(np.maximum(resid, 0.0)) * z[1]
    if scalar_in:
        return float(b_u), float(b_v)
    return b_u, b_v


def _fgn_autocov(n: int, dt: float, hh: float) -> np.ndarray:
    # autocovariance of fractional Gaussian noise at lags 0..n
    k = np.arange(n + 1, dtype=float)
    two_h = 2.0 * hh
    return 0.5 * dt ** two_h * ((k + 1.0) ** two_h - 2.0 * k ** two_h
                                + np.abs(k - 1.0) ** two_h)


def sample_fgn_regular(n: int, dt: float, h, stream: RngStream, size=None) -> np.ndarray:
    """n fractional-Gaussian-noise increments on step dt, O(n log n).

    Circulant embedding of the increment autocovariance: the covariance is
    embedded in a circulant of order 2n whose eigenvalues come from one FFT;
    a complex Gaussian vector shaped by sqrt(eigenvalues) transforms back to
    an exact stationary sample.  If the embedding has materially negative
    eigenvalues the sampler falls back to Cholesky, so it never fails.
    Cumulative sums reproduce B^H on the grid dt, 2dt, ..., n*dt.
    """
    hh = as_hurst(h)
    if n < 1 or dt <= 0.0:
        raise ValueError("need n >= 1 and dt > 0")
    if n == 1:
        z = sample_std_normal(stream, None if size is None else (size, 1))
        out = dt ** hh * z
        return np.atleast_1d(out) if size is None else out
    gamma = _fgn_autocov(n, dt, hh)
    circ = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(circ).real
    if lam.min() < -1e-10 * lam.max():
        # embedding not nonnegative: exact fallback
        fbm = fbm_values_at_times(dt * np.arange(1, n + 1), hh, stream, size=size)
        return np.diff(fbm, axis=-1, prepend=0.0)
    lam = np.maximum(lam, 0.0)
    m = 2 * n
    batch = () if size is None else (size,)
    z_ends = sample_std_normal(stream, batch + (2,))
    z_re = sample_std_normal(stream, batch + (n - 1,))
    z_im = sample_std_normal(stream, batch + (n - 1,))
    xi = np.empty(batch + (m,), dtype=complex)
    xi[..., 0] = z_ends[..., 0]
    xi[..., n] = z_ends[..., 1]
    xi[..., 1:n] = (z_re + 1j * z_im) / np.sqrt(2.0)
    xi[..., n + 1:] = np.conj(xi[..., n - 1:0:-1])
    spectrum = np.sqrt(lam / m) * xi
    sample = np.fft.fft(spectrum, axis=-1).real
    return sample[..., :n]
