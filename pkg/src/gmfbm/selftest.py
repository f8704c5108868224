"""Fast built-in verification: a trimmed version of the acceptance suite
that runs in well under a minute with a fixed seed.

Each check returns (ok, detail); the runner prints one PASS/FAIL line per
registered check and exits 3 on any statistical failure.
"""

from __future__ import annotations

import math

import numpy as np

from gmfbm import mclab, theory
from gmfbm.fbm import TimeGrid, fbm_cov, fbm_cov_matrix, sample_fbm_at, sample_fgn_regular
from gmfbm.process import (
    GmfbmParams,
    TimeChangedSpec,
    exact_cov_oracle,
    exact_increment_second_moment,
    exact_var_oracle,
)
from gmfbm.randkit import derive_stream, sample_tempered_stable_increment
from gmfbm.subordinators import (
    GammaParams,
    SubordinatorSpec,
    TssParams,
    gamma_moment,
    subordinator_moment,
    tss_mean,
    tss_moment,
    tss_variance,
)

_N_SMOKE = 20000


def _mixed_specs():
    params = GmfbmParams(1.0, 1.0, 0.55, 0.8)
    return [
        TimeChangedSpec(params, SubordinatorSpec.tss(0.7, 1.0)),
        TimeChangedSpec(params, SubordinatorSpec.gamma(1.0)),
    ]


def check_fbm_cov_values(seed: int):
    cases = [
        (abs(fbm_cov(1.0, 2.0, 0.5) - 1.0), "H=1/2 Brownian min"),
        (abs(fbm_cov(1.0, 2.0, 0.75) - math.sqrt(2.0)), "H=3/4 value"),
        (abs(fbm_cov(3.0, 3.0, 0.6) - 3.0 ** 1.2), "diagonal t**2H"),
        (abs(fbm_cov(2.0, 6.0, 0.7) - 2.0 ** 1.4 * fbm_cov(1.0, 3.0, 0.7)),
         "self-similarity"),
    ]
    worst = max(err for err, _ in cases)
    return worst < 1e-12, f"max error {worst:.2e}"


def check_fbm_cov_psd(seed: int):
    worst = 0.0
    for h in (0.3, 0.5, 0.75):
        cov = fbm_cov_matrix(TimeGrid.regular(16, 1.0), h)
        eig = np.linalg.eigvalsh(cov)
        worst = max(worst, -eig.min() / eig.max())
    return worst < 1e-10, f"worst relative negative eigenvalue {worst:.2e}"


def check_fbm_sampler_cov(seed: int):
    grid = TimeGrid.regular(8, 1.0)
    cov = fbm_cov_matrix(grid, 0.7)
    paths = sample_fbm_at(grid, 0.7, derive_stream(seed, 1), size=_N_SMOKE)
    emp = paths.T @ paths / _N_SMOKE
    se = np.std(paths[:, :, None] * paths[:, None, :], axis=0, ddof=1) / math.sqrt(_N_SMOKE)
    z = float(np.max(np.abs(emp - cov) / se))
    return z < 3.0, f"max |z| = {z:.2f} over {cov.size} entries"


def check_fgn_matches_cholesky(seed: int):
    grid = TimeGrid.regular(8, 1.0)
    cov = fbm_cov_matrix(grid, 0.7)
    fgn = sample_fgn_regular(8, 1.0, 0.7, derive_stream(seed, 2), size=_N_SMOKE)
    paths = np.cumsum(fgn, axis=1)
    emp = paths.T @ paths / _N_SMOKE
    se = np.std(paths[:, :, None] * paths[:, None, :], axis=0, ddof=1) / math.sqrt(_N_SMOKE)
    z = float(np.max(np.abs(emp - cov) / se))
    return z < 3.0, f"max |z| = {z:.2f}"


def check_gamma_moment_identity(seed: int):
    err = abs(gamma_moment(GammaParams(2.0), 2.0, 0.5) - math.sqrt(math.pi) / 2.0)
    return err < 1e-12, f"|Gamma(1.5)/Gamma(1) - sqrt(pi)/2| = {err:.2e}"


def check_tss_cumulants(seed: int):
    params = TssParams(0.7, 1.0)
    t = 10.0
    rel1 = abs(tss_moment(params, t, 1.0) - tss_mean(params, t)) / tss_mean(params, t)
    m2 = tss_mean(params, t) ** 2 + tss_variance(params, t)
    rel2 = abs(tss_moment(params, t, 2.0) - m2) / m2
    # fractional order against the quadrature route at q just below 2
    q = 1.6
    frac = tss_moment(params, t, q)
    ok = rel1 < 1e-12 and rel2 < 1e-12 and frac > 0.0
    return ok, f"rel errors q=1: {rel1:.2e}, q=2: {rel2:.2e}; q=1.6 moment {frac:.4f}"


def check_subordinator_laplace(seed: int):
    worst = 0.0
    stream = derive_stream(seed, 3)
    draws = sample_tempered_stable_increment(stream, 0.7, 1.0, 1.0, size=_N_SMOKE)
    for u in (0.5, 1.0, 2.0):
        emp = np.exp(-u * draws)
        target = math.exp(-((1.0 + u) ** 0.7 - 1.0))
        z = abs(emp.mean() - target) / (emp.std(ddof=1) / math.sqrt(_N_SMOKE))
        worst = max(worst, z)
    gamma_draws = derive_stream(seed, 4).gen.standard_gamma(1.0, _N_SMOKE)
    for u in (0.5, 1.0, 2.0):
        emp = np.exp(-u * gamma_draws)
        target = 1.0 / (1.0 + u)
        z = abs(emp.mean() - target) / (emp.std(ddof=1) / math.sqrt(_N_SMOKE))
        worst = max(worst, z)
    return worst < 3.0, f"max |z| = {worst:.2f}"


def check_cov_oracle_vs_mc(seed: int):
    worst = 0.0
    for spec in _mixed_specs():
        est = mclab.estimate_cov(spec, 1.0, 10.0, _N_SMOKE, seed)
        oracle = exact_cov_oracle(spec, 1.0, 10.0)
        worst = max(worst, abs(est.value - oracle) / est.stderr)
    return worst < 3.0, f"max |z| = {worst:.2f}"


def check_increment_identity(seed: int):
    worst = 0.0
    for spec in _mixed_specs():
        p = spec.gmfbm
        via_cov = exact_increment_second_moment(spec, 1.0, 10.0)
        direct = (p.a ** 2 * subordinator_moment(spec.subordinator, 9.0, 2 * p.h1)
                  + p.b ** 2 * subordinator_moment(spec.subordinator, 9.0, 2 * p.h2))
        worst = max(worst, abs(via_cov - direct) / direct)
    return worst < 1e-6, f"max relative gap {worst:.2e}"


def check_oracle_decay_slope(seed: int):
    worst = 0.0
    for spec in _mixed_specs():
        curve = mclab.corr_curve_oracle(spec, 1.0, np.geomspace(100.0, 10000.0, 12))
        fit = mclab.fit_decay(curve)
        predicted = theory.corr_decay_prediction(spec).dominant
        worst = max(worst, abs(fit.slope - predicted))
    return worst < 0.05, f"max |slope - predicted| = {worst:.4f}"


def check_brownian_gamma_corr(seed: int):
    spec = TimeChangedSpec(GmfbmParams(1.0, 1.0, 0.5, 0.5),
                           SubordinatorSpec.gamma(1.0))
    worst = 0.0
    for (s, t) in [(1.0, 4.0), (2.0, 50.0)]:
        corr = exact_cov_oracle(spec, s, t) / math.sqrt(
            exact_var_oracle(spec, s) * exact_var_oracle(spec, t))
        worst = max(worst, abs(corr - math.sqrt(s / t)))
    return worst < 1e-10, f"max |corr - sqrt(s/t)| = {worst:.2e}"


def check_estimator_determinism(seed: int):
    spec = _mixed_specs()[1]
    one = mclab.estimate_cov(spec, 1.0, 5.0, 2000, seed, n_workers=1)
    two = mclab.estimate_cov(spec, 1.0, 5.0, 2000, seed, n_workers=4)
    rerun = mclab.estimate_cov(spec, 1.0, 5.0, 2000, seed, n_workers=1)
    ok = one == two == rerun
    return ok, "bit-identical across reruns and worker counts" if ok else "MISMATCH"


SELFTEST_CHECKS = [
    ("fbm covariance identities", check_fbm_cov_values),
    ("fbm covariance PSD", check_fbm_cov_psd),
    ("fbm sampler covariance", check_fbm_sampler_cov),
    ("circulant sampler agreement", check_fgn_matches_cholesky),
    ("gamma moment identity", check_gamma_moment_identity),
    ("tempered stable cumulants", check_tss_cumulants),
    ("subordinator Laplace transforms", check_subordinator_laplace),
    ("covariance oracle vs Monte Carlo", check_cov_oracle_vs_mc),
    ("increment second-moment identity", check_increment_identity),
    ("oracle decay slope", check_oracle_decay_slope),
    ("Brownian-Gamma correlation", check_brownian_gamma_corr),
    ("estimator determinism", check_estimator_determinism),
]


def run_selftest(seed: int) -> int:
    failures = 0
    width = len(str(len(SELFTEST_CHECKS)))
    for idx, (name, fn) in enumerate(SELFTEST_CHECKS, start=1):
        ok, detail = fn(seed)
        status = "PASS" if ok else "FAIL"
        print(f"[{idx:>{width}}/{len(SELFTEST_CHECKS)}] {status} {name} ({detail})")
        failures += not ok
    if failures:
        print(f"selftest: {failures} of {len(SELFTEST_CHECKS)} checks failed")
        return 3
    print(f"selftest: all {len(SELFTEST_CHECKS)} checks passed")
    return 0
