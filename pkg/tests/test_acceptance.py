"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance is fixed here, nothing is calibrated at runtime.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats as sp_stats

from _oracles import quadrature_cdf, scalar_param_grid
from pathwaylab.cli import run as cli_run
from pathwaylab.matrix import MatrixPathwayParams, kernel_eval, mc_normalization
from pathwaylab.matrix import norm_const as matrix_norm_const
from pathwaylab.multivariate import (
    EllipticalPathwayParams,
    norm_const,
    pdf as mv_pdf,
    radial_moment,
    radial_pdf,
    sample as mv_sample,
)
from pathwaylab.numerics import RandomStream, integrate_1d
from pathwaylab.scalar import (
    Density,
    ScalarPathwayParams,
    density_of,
    entropy_M,
    entropy_M_discrete,
    entropy_T,
    euler_stationarity_residual,
    normalizing_constant,
    pdf as scalar_pdf,
)
from pathwaylab.scaling import (
    DeaConfig,
    dea,
    gaussian_series,
    levy_flight_series,
    levy_walk_series,
    sda,
)

EXP1 = Density(lambda x: math.exp(-x), 0.0, math.inf)


def _criterion(num, name, ok, detail=""):
    line = f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}: {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def test_criterion_01_scalar_normalization():
    t0 = time.time()
    grid = scalar_param_grid()
    worst = 0.0
    for params in grid:
        sup = params.support.upper
        hi = sup if math.isfinite(sup) else math.inf
        total = integrate_1d(lambda x: scalar_pdf(params, x), 0.0, hi, tol=1e-10)
        worst = max(worst, abs(total - 1.0))
    elapsed = time.time() - t0
    _criterion(
        1, "scalar normalization over the parameter grid",
        worst <= 1e-8 and elapsed < 30.0,
        f"{len(grid)} combos, worst |I-1| = {worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_02_entropy_closed_forms():
    worst_m = max(abs(entropy_M(EXP1, a) - 1.0 / (2.0 - a))
                  for a in (0.5, 0.9, 1.1, 1.5))
    worst_t = max(abs(entropy_T(EXP1, a) - 1.0 / a)
                  for a in (0.5, 0.9, 1.1, 1.5))
    worst_d = 0.0
    for k in (2, 10):
        for a in (0.5, 2.0, 3.0):
            expected = (k ** (a - 1.0) - 1.0) / (a - 1.0)
            worst_d = max(worst_d,
                          abs(entropy_M_discrete([1.0 / k] * k, a) - expected))
    _criterion(
        2, "entropy closed forms (M, T, discrete uniform)",
        worst_m <= 1e-6 and worst_t <= 1e-6 and worst_d <= 1e-12,
        f"M err {worst_m:.2e}, T err {worst_t:.2e}, discrete err {worst_d:.2e}",
    )


def test_criterion_03_pathway_trichotomy():
    a, gamma, delta = 1.0, 1.0, 2.0
    base = ScalarPathwayParams(1.0, a, gamma, delta)
    xs = np.linspace(1e-3, 4.0, 200)
    ref = scalar_pdf(base, xs)
    sup_gap = max(
        float(np.max(np.abs(scalar_pdf(ScalarPathwayParams(1.0 + s * 1e-4, a,
                                                           gamma, delta), xs)
                            - ref)))
        for s in (-1.0, 1.0)
    )
    c_ref = normalizing_constant(base)
    c_gap = max(
        abs(normalizing_constant(ScalarPathwayParams(1.0 + s * 1e-4, a, gamma,
                                                     delta)) - c_ref) / c_ref
        for s in (-1.0, 1.0)
    )
    mv_ref = norm_const(EllipticalPathwayParams(np.zeros(2), np.eye(2), 1.0, a,
                                                gamma, delta))
    mv_gap = max(
        abs(norm_const(EllipticalPathwayParams(np.zeros(2), np.eye(2),
                                               1.0 + s * 1e-4, a, gamma, delta))
            - mv_ref) / mv_ref
        for s in (-1.0, 1.0)
    )
    _criterion(
        3, "pathway trichotomy: both branches meet the gamma form at alpha=1",
        sup_gap <= 1e-3 and c_gap <= 1e-3 and mv_gap <= 1e-3,
        f"sup-norm {sup_gap:.2e}, scalar const gap {c_gap:.2e}, "
        f"p=2 const gap {mv_gap:.2e}",
    )


def test_criterion_04_multivariate_gaussian_special_case():
    rng = np.random.default_rng(404)
    M = rng.normal(size=(3, 3))
    V = M @ M.T + 3.0 * np.eye(3)
    mu = rng.normal(size=3)
    params = EllipticalPathwayParams(mu, V, 1.0, 0.5, 0.0, 1.0)
    pts = rng.normal(size=(10, 3)) * 2.0 + mu
    mine = mv_pdf(params, pts)
    ref = sp_stats.multivariate_normal(mean=mu, cov=V).pdf(pts)
    rel = float(np.max(np.abs(mine - ref) / ref))
    _criterion(4, "p=3 gamma-branch density is the multivariate normal",
               rel <= 1e-10, f"max rel err {rel:.2e} at 10 random points")


def test_criterion_05_radial_consistency():
    t0 = time.time()
    n = 100_000
    ok_all, details = True, []
    for i, params in enumerate([
        EllipticalPathwayParams(np.zeros(2), np.eye(2), 0.5, 1.0, 1.0, 2.0),
        EllipticalPathwayParams(np.zeros(2), np.eye(2), 1.0, 0.5, 0.0, 1.0),
        EllipticalPathwayParams(np.zeros(2), np.eye(2), 1.2, 0.8, 0.5, 1.0),
    ]):
        x = mv_sample(params, n, RandomStream(500 + i))
        u = np.einsum("ij,ij->i", x, x)
        se = u.std(ddof=1) / math.sqrt(n)
        mean_ok = abs(u.mean() - radial_moment(params, 1.0)) <= 3 * se
        sub = u[::5]  # KS on 20k draws keeps the oracle quadrature cheap
        cdf = quadrature_cdf(lambda t: radial_pdf(params, t), 0.0,
                             float(sub.max()) * 1.000001,
                             anchor=float(np.median(sub)))
        pv = float(sp_stats.ks_1samp(sub, cdf).pvalue)
        ok_all = ok_all and mean_ok and pv > 0.01
        details.append(f"alpha={params.alpha}: mean ok={mean_ok}, KS p={pv:.3f}")
    elapsed = time.time() - t0
    _criterion(5, "radial moments and KS of u for the p=2 sampler",
               ok_all and elapsed < 60.0,
               "; ".join(details) + f", {elapsed:.1f}s")


def test_criterion_06_matrix_variate_constants():
    t0 = time.time()
    ok_all, details = True, []
    for i, (p, n) in enumerate([(1, 1), (2, 2), (2, 3)]):
        for j, alpha in enumerate([0.5, 0.75, 1.0]):
            params = MatrixPathwayParams(A=np.eye(p), B=np.eye(n), alpha=alpha,
                                         a=1.0, gamma=0.0)
            est, se = mc_normalization(params, 1_000_000,
                                       RandomStream(6000 + 10 * i + j))
            ok = abs(est - 1.0) <= 0.02
            ok_all = ok_all and ok
            details.append(f"({p},{n},{alpha}): {est:.4f}")
    params11 = MatrixPathwayParams(A=np.eye(1), B=np.eye(1), alpha=0.5, a=1.0,
                                   gamma=0.0)
    c = matrix_norm_const(params11)
    up = math.sqrt(2.0)
    quad_total = integrate_1d(lambda x: c * kernel_eval(params11, [[x]]),
                              -up, up, tol=1e-11)
    quad_ok = abs(quad_total - 1.0) <= 1e-8
    elapsed = time.time() - t0
    _criterion(
        6, "matrix-variate constants vs Monte-Carlo (and p=n=1 quadrature)",
        ok_all and quad_ok and elapsed < 300.0,
        "; ".join(details) + f"; quad |I-1|={abs(quad_total - 1):.1e}, "
        f"{elapsed:.0f}s",
    )


def test_criterion_07_euler_stationarity():
    worst = 0.0
    for params in scalar_param_grid():
        upper = params.support.upper
        hi = min(upper * 0.9, 4.0) if math.isfinite(upper) else 4.0
        grid = np.linspace(hi * 0.01, hi, 64)
        worst = max(worst, euler_stationarity_residual(params, grid))
    _criterion(7, "stationarity residual across the scalar grid",
               worst <= 1e-9, f"worst residual {worst:.2e}")


def test_criterion_08_gaussian_baseline():
    ok_all, details = True, []
    for seed in (0, 1, 2):
        t0 = time.time()
        series = gaussian_series(2**16, RandomStream(seed))
        d = dea(series).delta
        h = sda(series).hurst
        elapsed = time.time() - t0
        ok = abs(d - 0.5) <= 0.03 and abs(h - 0.5) <= 0.03 and elapsed < 60.0
        ok_all = ok_all and ok
        details.append(f"seed {seed}: delta={d:.3f}, H={h:.3f}, {elapsed:.1f}s")
    _criterion(8, "DEA/SDA Gaussian baseline at N=2^16", ok_all,
               "; ".join(details))


def test_criterion_09_levy_walk_relation():
    N = 2**17
    cfg = DeaConfig(t_min=100, t_max=N // 10)
    ok_all, details = True, []
    for seed in (0, 3, 4):
        series = levy_walk_series(N, RandomStream(seed), mu=2.5)
        d = dea(series, cfg).delta
        h = sda(series, cfg).hurst
        gap = abs(d - 1.0 / (3.0 - 2.0 * h))
        ok_all = ok_all and gap <= 0.08
        details.append(f"seed {seed}: delta={d:.3f}, H={h:.3f}, gap={gap:.3f}")
    _criterion(9, "Levy walk: delta vs 1/(3-2H) at mu=2.5", ok_all,
               "; ".join(details))


def test_criterion_10_levy_flight_divergence():
    series = levy_flight_series(2**17, RandomStream(0), mu=2.2)
    d = dea(series).delta
    h = sda(series).hurst
    ok = d >= 0.6 and abs(d - h) >= 0.08
    _criterion(10, "Levy flight: variance route fails while DEA tracks the pdf",
               ok, f"delta={d:.3f}, H={h:.3f}, |delta-H|={abs(d - h):.3f}")


def test_criterion_11_cli_determinism(tmp_path, capsys):
    series_file = tmp_path / "series.csv"
    values = gaussian_series(4096, RandomStream(11))
    series_file.write_text("".join(repr(float(v)) + "\n" for v in values))
    commands = [
        ["synth", "--kind", "levy-flight", "--mu-tail", "2.4", "--n", "256",
         "--seed", "9"],
        ["dea", "--input", str(series_file), "--seed", "9"],
        ["sda", "--input", str(series_file), "--seed", "9"],
    ]
    ok = True
    for argv in commands:
        outs = []
        for _ in range(2):
            code = cli_run(list(argv))
            captured = capsys.readouterr()
            outs.append(captured.out)
            ok = ok and code == 0
        ok = ok and outs[0] == outs[1] and len(outs[0]) > 0
    _criterion(11, "CLI byte-identical reports under a fixed seed", ok,
               f"{len(commands)} commands x 2 runs")
