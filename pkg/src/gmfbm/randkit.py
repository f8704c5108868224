"""Deterministic, splittable random streams and the scalar/vector samplers
used throughout the toolkit.

Streams are counter-mode Philox generators keyed by ``(master_seed,
stream_id)``.  Distinct key pairs yield statistically independent bit
streams, and the sequence for a fixed key is reproducible across runs and
worker layouts.  Substreams occupy disjoint 2**128-wide blocks of the
256-bit Philox counter, so deriving them never consumes randomness from
the parent.
"""

from __future__ import annotations

import math

import numpy as np

_U64 = 1 << 64
_LN2 = math.log(2.0)

# Beyond this many tilting-rejection substeps per increment the exact
# double-rejection sampler is cheaper (cost O(1) vs O(dt * lam**alpha)).
# Vectorized bulk draws amortize substep overhead, so their crossover sits
# higher than the scalar one.
_SUBSTEP_LIMIT_VECTOR = 16
_SUBSTEP_LIMIT_SCALAR = 4


def _check_u64(name: str, value: int) -> int:
    value = int(value)
    if not 0 <= value < _U64:
        raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")
    return value


class RngStream:
    """A value-like random stream addressed by (master_seed, stream_id).

    ``counter`` counts variates delivered so far (diagnostic only; the
    underlying Philox counter advances by raw 64-bit words).  A stream must
    not be shared by two workers at the same time; derive one stream per
    unit of concurrent work instead.
    """

    __slots__ = ("master_seed", "stream_id", "lanes", "gen", "counter")

    def __init__(self, master_seed: int, stream_id: int, lanes: tuple[int, ...] = ()):
        self.master_seed = _check_u64("master_seed", master_seed)
        self.stream_id = _check_u64("stream_id", stream_id)
        if len(lanes) > 2:
            raise ValueError("substream nesting deeper than 2 is not supported")
        self.lanes = tuple(_check_u64("lane", lane) for lane in lanes)
        # Lane k occupies counter block k+1 in words 2..3; the root stream
        # sits at block 0 and would need 2**130 draws to leave it.
        words = [0, 0, 0, 0]
        for depth, lane in enumerate(self.lanes):
            if lane + 1 >= _U64:
                raise ValueError("lane index too large")
            words[2 + depth] = lane + 1
        key = np.array([self.master_seed, self.stream_id], dtype=np.uint64)
        counter = np.array(words, dtype=np.uint64)
        self.gen = np.random.Generator(np.random.Philox(key=key, counter=counter))
        self.counter = 0

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (f"RngStream(master_seed={self.master_seed}, "
                f"stream_id={self.stream_id}, lanes={self.lanes}, "
                f"counter={self.counter})")


def derive_stream(master_seed: int, stream_id: int) -> RngStream:
    """Create the independent stream keyed by (master_seed, stream_id).

    Gaps in the stream_id space are harmless: independence comes from the
    keyed Philox construction, not from consecutive allocation.
    """
    return RngStream(master_seed, stream_id)


def derive_substream(stream: RngStream, lane: int) -> RngStream:
    """Split off substream ``lane`` of ``stream``.

    Derivation depends only on the stream identity, never on how much of
    the parent has been consumed.
    """
    return RngStream(stream.master_seed, stream.stream_id, stream.lanes + (int(lane),))


def _size_count(size) -> int:
    if size is None:
        return 1
    return int(np.prod(size))


def sample_std_normal(stream: RngStream, size=None):
    """Standard normal variate(s); advances the stream."""
    out = stream.gen.standard_normal(size)
    stream.counter += _size_count(size)
    return out


def sample_uniform(stream: RngStream, size=None):
    """Uniform(0,1) variate(s); advances the stream."""
    out = stream.gen.random(size)
    stream.counter += _size_count(size)
    return out


def sample_gamma(stream: RngStream, shape: float, size=None):
    """Gamma(shape, rate 1) variate(s).

    Valid for any shape > 0, including the shape < 1 regime that fine path
    grids produce (the generator's small-shape path handles it).
    """
    if not shape > 0.0:
        raise ValueError(f"gamma shape must be positive, got {shape}")
    out = stream.gen.standard_gamma(shape, size=size)
    stream.counter += _size_count(size)
    return out


def _stable_unit(gen: np.random.Generator, alpha: float, n: int) -> np.ndarray:
    # Kanter's representation of the positive alpha-stable law with Laplace
    # transform exp(-u**alpha):
    #   S = sin(alpha V) sin((1-alpha) V)**((1-alpha)/alpha)
    #       / (sin(V)**(1/alpha) * E**((1-alpha)/alpha))
    # with V ~ Uniform(0, pi), E ~ Exp(1).
    v = gen.random(n)
    # exact zeros (probability 2**-53 per draw) would hit sin(0)/0
    v[v == 0.0] = 2.0 ** -53
    v *= math.pi
    e = gen.standard_exponential(n)
    frac = (1.0 - alpha) / alpha
    return (np.sin(alpha * v)
            * np.sin((1.0 - alpha) * v) ** frac
            / (np.sin(v) ** (1.0 / alpha) * e ** frac))


def _stable_unit_scalar(gen: np.random.Generator, alpha: float) -> float:
    v = gen.random()
    if v == 0.0:
        v = 2.0 ** -53
    v *= math.pi
    e = gen.standard_exponential()
    frac = (1.0 - alpha) / alpha
    return (math.sin(alpha * v)
            * math.sin((1.0 - alpha) * v) ** frac
            / (math.sin(v) ** (1.0 / alpha) * e ** frac))


def sample_stable_subordinator_increment(stream: RngStream, alpha: float,
                                         scale: float, size=None):
    """Positive stable variate with Laplace transform exp(-scale * u**alpha).

    This is the increment of an (untempered) stable subordinator over a span
    with total jump intensity ``scale``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    if not scale > 0.0:
        raise ValueError(f"scale must be positive, got {scale}")
    n = _size_count(size)
    out = scale ** (1.0 / alpha) * _stable_unit(stream.gen, alpha, n)
    stream.counter += n
    if size is None:
        return float(out[0])
    return out.reshape(size)


def _tempered_by_thinning(gen: np.random.Generator, alpha: float, lam: float,
                          dt: float, n: int, n_sub: int) -> np.ndarray:
    # Exponential-tilting rejection: propose stable increments over dt/n_sub
    # and accept with probability exp(-lam * x).  The substep split keeps
    # dt' * lam**alpha <= ln 2, so each substep accepts with probability
    # exp(-dt' * lam**alpha) >= 1/2 and the expected proposal count per
    # substep is at most 2.
    dt_sub = dt / n_sub
    scale_fac = dt_sub ** (1.0 / alpha)
    m = n * n_sub
    out = np.empty(m)
    pending = np.arange(m)
    while pending.size:
        prop = scale_fac * _stable_unit(gen, alpha, pending.size)
        accept = gen.random(pending.size) < np.exp(-lam * prop)
        out[pending[accept]] = prop[accept]
        pending = pending[~accept]
    return out.reshape(n, n_sub).sum(axis=1)


def _tempered_by_thinning_scalar(gen: np.random.Generator, alpha: float,
                                 lam: float, dt: float, n_sub: int) -> float:
    dt_sub = dt / n_sub
    scale_fac = dt_sub ** (1.0 / alpha)
    total = 0.0
    for _ in range(n_sub):
        while True:
            prop = scale_fac * _stable_unit_scalar(gen, alpha)
            if gen.random() < math.exp(-lam * prop):
                total += prop
                break
    return total


def _sinc(x: float) -> float:
    if x == 0.0:
        return 1.0
    if abs(x) < 0.006:
        x2 = x * x
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    return math.sin(x) / x


def _zolotarev_b(x: float, alpha: float) -> float:
    return _sinc(x) / (_sinc(alpha * x) ** alpha
                       * _sinc((1.0 - alpha) * x) ** (1.0 - alpha))


def _zolotarev_a(x: float, alpha: float) -> float:
    return (((1.0 - alpha) * _sinc((1.0 - alpha) * x)) ** (1.0 - alpha)
            * (alpha * _sinc(alpha * x)) ** alpha / _sinc(x))


def _tilted_stable_double_rejection(gen: np.random.Generator, alpha: float,
                                    lam: float) -> float:
    # Devroye-style double rejection for the exponentially tilted positive
    # stable law (density proportional to exp(-lam*x) times the unit stable
    # density).  Expected cost is O(1) uniformly in the tilt, which is what
    # makes large time spans affordable.  The outer acceptance ratio is kept
    # in log space; with lam**alpha in the thousands it overflows otherwise.
    b = (1.0 - alpha) / alpha
    lam_alpha = lam ** alpha
    gam = lam_alpha * alpha * (1.0 - alpha)
    sqrt_gam = math.sqrt(gam)
    c1 = math.sqrt(math.pi / 2.0)
    c3 = (2.0 + c1) * sqrt_gam
    xi = (1.0 + math.sqrt(2.0) * c3) / math.pi
    psi = c3 * math.exp(-gam * math.pi * math.pi / 8.0) / math.sqrt(math.pi)
    w1 = c1 * xi / sqrt_gam
    w2 = 2.0 * math.sqrt(math.pi) * psi
    w3 = xi * math.pi

    while True:
        # outer stage: sample the Zolotarev angle U from a three-piece
        # envelope, accept against the marginal ratio
        while True:
            v = gen.random()
            if gam >= 1.0:
                if v < w1 / (w1 + w2):
                    u_ang = abs(gen.standard_normal()) / sqrt_gam
                else:
                    w = gen.random()
                    u_ang = math.pi * (1.0 - w * w)
            else:
                w = gen.random()
                if v < w3 / (w2 + w3):
                    u_ang = math.pi * w
                else:
                    u_ang = math.pi * (1.0 - w * w)
            if u_ang >= math.pi:
                continue
            zeta = math.sqrt(_zolotarev_b(u_ang, alpha))
            z = 1.0 / (1.0 - (1.0 + alpha * zeta / sqrt_gam) ** (-1.0 / alpha))
            d = 0.0
            if gam >= 1.0:
                d += xi * math.exp(-gam * u_ang * u_ang / 2.0)
            if 0.0 < u_ang < math.pi:
                d += psi / math.sqrt(math.pi - u_ang)
            if gam < 1.0:
                d += xi
            log_rho = (-lam_alpha * (1.0 - 1.0 / (zeta * zeta))
                       + math.log(math.pi * d)
                       - math.log((1.0 + c1) * sqrt_gam / zeta + z))
            u1 = gen.random()
            while u1 <= 0.0:
                u1 = gen.random()
            log_accept = math.log(u1) + log_rho
            if log_accept <= 0.0:
                break
        # inner stage: sample X around the conditional mode m, accept with
        # the exact density ratio
        a = _zolotarev_a(u_ang, alpha) ** (1.0 / (1.0 - alpha))
        m = (b / a) ** alpha * lam_alpha
        delta = math.sqrt(m * alpha / a)
        a1 = delta * c1
        a3 = z / a
        s = a1 + delta + a3
        v2 = gen.random()
        n_half = 0.0
        e1 = 0.0
        if v2 < a1 / s:
            n_half = gen.standard_normal()
            x = m - delta * abs(n_half)
        elif v2 < (a1 + delta) / s:
            x = m + delta * gen.random()
        else:
            e1 = gen.standard_exponential()
            x = m + delta + e1 * a3
        if x <= 0.0:
            continue
        e2 = -log_accept
        cost = a * (x - m) + lam * m ** (-b) * ((m / x) ** b - 1.0)
        if x < m:
            cost -= n_half * n_half / 2.0
        elif x > m + delta:
            cost -= e1
        if cost <= e2:
            return x ** (-b)


def tempered_stable_substep_count(alpha: float, lam: float, dt: float) -> int:
    """Number of tilting-rejection substeps for an increment over ``dt``."""
    return max(1, math.ceil(dt * lam ** alpha / _LN2))


def sample_tempered_stable_increment(stream: RngStream, alpha: float,
                                     lam: float, dt: float, size=None):
    """Increment of the tempered stable subordinator over time ``dt``.

    The law has Laplace transform exp(-dt*((lam+u)**alpha - lam**alpha)).
    For moderate dt*lam**alpha the increment is built from tilting-rejection
    substeps (each substep a stable proposal accepted with probability
    exp(-lam*x), valid by independent increments); for large spans the exact
    double-rejection sampler takes over so the cost stays O(1) per draw.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    if not lam > 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    n_sub = tempered_stable_substep_count(alpha, lam, dt)
    if size is None:
        stream.counter += 1
        if n_sub <= _SUBSTEP_LIMIT_SCALAR:
            return _tempered_by_thinning_scalar(stream.gen, alpha, lam, dt, n_sub)
        scale = dt ** (1.0 / alpha)
        return scale * _tilted_stable_double_rejection(stream.gen, alpha, lam * scale)
    n = _size_count(size)
    if n_sub <= _SUBSTEP_LIMIT_VECTOR:
        out = _tempered_by_thinning(stream.gen, alpha, lam, dt, n, n_sub)
    else:
        scale = dt ** (1.0 / alpha)
        lam_eff = lam * scale
        out = scale * np.array([
            _tilted_stable_double_rejection(stream.gen, alpha, lam_eff)
            for _ in range(n)
        ])
    stream.counter += n
    return out.reshape(size)
