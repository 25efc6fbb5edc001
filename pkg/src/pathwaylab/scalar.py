"""Scalar pathway density family on x > 0, with entropy measures and fitting.

The family is parameterized by the pathway parameter alpha, scale a > 0,
power exponent gamma >= 0, and stretch exponent delta > 0:

    alpha < 1 :  c1 x^gamma [1 - a(1-alpha) x^delta]^(1/(1-alpha)),  bounded support
    alpha = 1 :  c3 x^gamma exp(-a x^delta)                          (generalized gamma)
    alpha > 1 :  c2 x^gamma [1 + a(alpha-1) x^delta]^(-1/(alpha-1))  (heavy tail)

Moving alpha through 1 walks continuously from the type-1 beta form through
the generalized gamma to the type-2 beta form; gamma = 0, delta = 1 is the
Tsallis / q-exponential specialization.  All constants are assembled in log
space, so the family stays evaluable arbitrarily close to alpha = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize as _sp_optimize

from . import _kernel
from .errors import (
    AccuracyError,
    DegenerateDataError,
    DivergenceError,
    DomainError,
)
from .numerics import RandomStream, fixed_width_histogram, integrate_1d

__all__ = [
    "Density",
    "MleResult",
    "ScalarPathwayParams",
    "Support",
    "cdf",
    "density_of",
    "entropy_M",
    "entropy_M_discrete",
    "entropy_T",
    "entropy_from_samples",
    "euler_stationarity_residual",
    "kerridge_inaccuracy",
    "log_normalizing_constant",
    "log_pdf",
    "mle_fit",
    "normalizing_constant",
    "pdf",
    "sample",
    "shannon_entropy",
]

_PARAM_NAMES = ("alpha", "a", "gamma", "delta")


@dataclass(frozen=True)
class Support:
    lower: float
    upper: float


@dataclass(frozen=True)
class ScalarPathwayParams:
    """Parameter quadruple (alpha, a, gamma, delta) of the scalar family."""

    alpha: float
    a: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name in _PARAM_NAMES:
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite real, got {v!r}")
        if self.a <= 0:
            raise DomainError("scale a must be positive")
        if self.delta <= 0:
            raise DomainError("stretch delta must be positive")
        if self.gamma < 0:
            # gamma + 1 > 0 would also normalize, but the family is stated for
            # gamma >= 0; relax here if negative powers are ever needed.
            raise DomainError("power gamma must be non-negative")

    @property
    def rho(self) -> float:
        """Shape of the z = a|1-alpha| x^delta transform: (gamma+1)/delta."""
        return (self.gamma + 1.0) / self.delta

    @property
    def branch(self) -> str:
        """One of 'type1', 'gamma', 'type2' (alpha within 1e-6 of 1 -> 'gamma')."""
        return _kernel.branch(self.alpha)

    @property
    def support(self) -> Support:
        return Support(0.0, _kernel.upper_support(self.alpha, self.a, self.delta))


def log_normalizing_constant(params: ScalarPathwayParams) -> float:
    return _kernel.log_norm(params.alpha, params.a, params.delta, params.rho)


def normalizing_constant(params: ScalarPathwayParams) -> float:
    """The constant c making c * x^gamma * kernel integrate to one on x > 0."""
    return math.exp(log_normalizing_constant(params))


def log_pdf(params: ScalarPathwayParams, x):
    """ln pdf, elementwise; -inf off the support."""
    lc = log_normalizing_constant(params)
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.full(arr.shape, -np.inf)
    ok = arr > 0.0
    if np.any(ok):
        xs = arr[ok]
        if params.gamma == 0.0:
            power = 0.0
        else:
            power = params.gamma * np.log(xs)
        out[ok] = lc + power + _kernel.log_kernel(params.alpha, params.a, params.delta, xs)
    return float(out[0]) if scalar else out


def pdf(params: ScalarPathwayParams, x):
    """Density value; exactly zero for x <= 0 and beyond a type-1 support edge."""
    lp = log_pdf(params, x)
    if np.ndim(lp) == 0:
        return math.exp(lp) if lp > -math.inf else 0.0
    with np.errstate(over="ignore"):
        return np.where(np.isneginf(lp), 0.0, np.exp(lp))


def cdf(params: ScalarPathwayParams, x, tol: float = 1e-10):
    """Quadrature-based distribution function (no closed form is used)."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    upper = params.support.upper
    order = np.argsort(arr)
    vals = np.empty_like(arr)
    prev_x, acc = 0.0, 0.0
    f = lambda t: pdf(params, t)
    for i in order:
        xi = min(max(arr[i], 0.0), upper)
        if xi > prev_x:
            acc += integrate_1d(f, prev_x, xi, tol=tol)
            prev_x = xi
        vals[i] = min(1.0, max(0.0, acc))
    return float(vals[0]) if np.ndim(x) == 0 else vals


def sample(params: ScalarPathwayParams, n: int, stream: RandomStream) -> np.ndarray:
    """n i.i.d. draws via the exact beta/gamma reparameterization."""
    return _kernel.sample(params.alpha, params.a, params.delta, params.rho, n, stream)


# ---------------------------------------------------------------------------
# entropy measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Density:
    """An evaluable density with known support, as the entropy integrals need.

    ``fn`` must accept a scalar and return the density value there;
    ``singular_points`` lists interior integrable singularities for the
    quadrature to split at.
    """

    fn: Callable[[float], float]
    lower: float
    upper: float
    singular_points: tuple = ()


def density_of(params: ScalarPathwayParams) -> Density:
    sup = params.support
    return Density(lambda x: pdf(params, x), sup.lower, sup.upper)


def _tail_diverges(integrand, start: float) -> bool:
    """Probe whether an integral over [start, inf) can possibly converge.

    Convergence requires x * g(x) -> 0 along the tail; adaptive quadrature
    alone cannot certify divergence (its transform nodes can skip the
    growth entirely), so growing or merely non-decaying tail measure is
    flagged here before any quadrature runs.
    """
    probes = start * np.geomspace(10.0, 1e12, 12)
    vals = []
    for x in probes:
        try:
            vals.append(abs(x * integrand(x)))
        except (OverflowError, ValueError):
            return True
    vals = np.asarray(vals)
    if not np.all(np.isfinite(vals)):
        return True
    # explosive growth between consecutive decade probes; the integrand may
    # later underflow to exact zero, which would hide this from an
    # endpoint-only comparison
    pos = vals > 0.0
    if np.any(pos):
        finite_vals = vals[pos]
        if finite_vals.size >= 2 and np.any(
            finite_vals[1:] > 1e6 * finite_vals[:-1]
        ):
            return True
    if vals[-1] <= 1e-300:
        return False
    return vals[-1] >= 0.999 * vals[0]


def _quad_density(density: Density, integrand, what: str) -> float:
    if density.upper == math.inf and _tail_diverges(integrand,
                                                    max(density.lower, 0.0) + 1.0):
        raise DivergenceError(f"{what} integral diverges in the tail")
    try:
        val = integrate_1d(
            integrand,
            density.lower,
            density.upper,
            tol=1e-10,
            singular_points=density.singular_points,
        )
    except AccuracyError as exc:
        raise DivergenceError(f"{what} integral did not converge") from exc
    if not math.isfinite(val):
        raise DivergenceError(f"{what} integral is not finite")
    return val


def shannon_entropy(density: Density) -> float:
    """-integral f ln f over the support (0 ln 0 := 0)."""

    def integrand(x):
        v = density.fn(x)
        return -v * math.log(v) if v > 0.0 else 0.0

    return _quad_density(density, integrand, "Shannon entropy")


def entropy_M(density: Density, alpha: float) -> float:
    """(integral f^(2-alpha) - 1)/(alpha - 1); tends to Shannon as alpha -> 1."""
    if abs(alpha - 1.0) <= _kernel.ALPHA_GAMMA_BAND:
        return shannon_entropy(density)
    e = 2.0 - alpha

    def integrand(x):
        v = density.fn(x)
        return v**e if v > 0.0 else 0.0

    total = _quad_density(density, integrand, "entropy")
    return (total - 1.0) / (alpha - 1.0)


def entropy_T(density: Density, alpha: float) -> float:
    """(integral f^alpha - 1)/(1 - alpha); tends to Shannon as alpha -> 1."""
    if abs(alpha - 1.0) <= _kernel.ALPHA_GAMMA_BAND:
        return shannon_entropy(density)

    def integrand(x):
        v = density.fn(x)
        return v**alpha if v > 0.0 else 0.0

    total = _quad_density(density, integrand, "entropy")
    return (total - 1.0) / (1.0 - alpha)


def entropy_M_discrete(p: Sequence[float], alpha: float) -> float:
    """Discrete form over a probability vector (all entries positive)."""
    arr = np.asarray(p, dtype=float).ravel()
    if arr.size == 0 or np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise DomainError("probability vector must have positive finite entries")
    if abs(float(arr.sum()) - 1.0) > 1e-10:
        raise DomainError(f"probabilities sum to {arr.sum()}, not 1")
    if abs(alpha - 1.0) <= _kernel.ALPHA_GAMMA_BAND:
        return float(-(arr * np.log(arr)).sum())
    return float((np.sum(arr ** (2.0 - alpha)) - 1.0) / (alpha - 1.0))


def kerridge_inaccuracy(P: Density, Q: Density, alpha: float) -> float:
    """Cost of assuming density Q when P is true; alpha = 1 gives -int P ln Q."""
    tol = 1e-12
    if P.lower < Q.lower - tol or P.upper > Q.upper + tol:
        raise DomainError("Q must be positive wherever P is (support mismatch)")
    splits = tuple(s for s in (*P.singular_points, *Q.singular_points)
                   if P.lower < s < P.upper)
    dom = Density(P.fn, P.lower, P.upper, splits)
    if abs(alpha - 1.0) <= _kernel.ALPHA_GAMMA_BAND:
        def integrand(x):
            pv = P.fn(x)
            if pv <= 0.0:
                return 0.0
            # Q underflowing to zero far in the tail must not poison the
            # integral; the clamp matches the smallest positive double
            return -pv * math.log(max(Q.fn(x), 1e-320))
    else:
        e = 1.0 - alpha

        def integrand(x):
            pv = P.fn(x)
            if pv <= 0.0:
                return 0.0
            return pv * max(Q.fn(x), 1e-320) ** e

    total = _quad_density(dom, integrand, "inaccuracy")
    if abs(alpha - 1.0) <= _kernel.ALPHA_GAMMA_BAND:
        return total
    return (total - 1.0) / (alpha - 1.0)


def entropy_from_samples(
    data, measure: str = "shannon", alpha: float | None = None,
    bin_width: float | None = None,
) -> float:
    """Plug-in differential entropy measures from sampled data.

    Builds a fixed-width histogram and applies the discrete estimator with
    the bin-width correction that maps it onto the continuous measure
    (for Shannon this is the familiar  -sum p ln p + ln h).
    """
    arr = np.asarray(data, dtype=float).ravel()
    if arr.size < 2:
        raise DomainError("need at least two samples")
    if not np.all(np.isfinite(arr)):
        raise DomainError("samples must be finite")
    if bin_width is None:
        s = float(arr.std())
        if s == 0.0:
            raise DegenerateDataError("zero-variance data: histogram width undefined")
        bin_width = s / 10.0
    h = float(bin_width)
    if h <= 0:
        raise DomainError("bin_width must be positive")
    counts = np.asarray([c for _, c in fixed_width_histogram(arr, h)], dtype=float)
    phat = counts / counts.sum()
    if measure == "shannon":
        return float(-(phat * np.log(phat)).sum() + math.log(h))
    if alpha is None:
        raise DomainError(f"measure {measure!r} needs an entropy order alpha")
    if abs(alpha - 1.0) <= _kernel.ALPHA_GAMMA_BAND:
        return float(-(phat * np.log(phat)).sum() + math.log(h))
    if measure == "M":
        return float((h ** (alpha - 1.0) * np.sum(phat ** (2.0 - alpha)) - 1.0)
                     / (alpha - 1.0))
    if measure == "T":
        return float((h ** (1.0 - alpha) * np.sum(phat**alpha) - 1.0)
                     / (1.0 - alpha))
    raise DomainError(f"unknown measure {measure!r}; use 'M', 'T' or 'shannon'")


# ---------------------------------------------------------------------------
# stationarity certificate
# ---------------------------------------------------------------------------

def euler_stationarity_residual(
    params: ScalarPathwayParams,
    grid,
    log_density: Callable | None = None,
) -> float:
    """Max residual of the affine law the optimizing density must satisfy.

    For alpha != 1, q(x) = (f(x)/x^gamma)^(1-alpha) is affine in x^delta
    exactly when f solves the variational stationarity condition of the
    entropy optimization; for alpha = 1 the same holds for ln f - gamma ln x.
    A near-zero value therefore certifies the density; perturbed kernels
    produce residuals orders of magnitude larger.

    ``log_density`` overrides ln f (defaults to this family's log_pdf), so
    foreign or deliberately perturbed densities can be probed.
    """
    xs = np.asarray(grid, dtype=float).ravel()
    if xs.size < 4:
        raise DomainError("grid must contain at least four points")
    sup = params.support
    if np.any(xs <= sup.lower) or np.any(xs >= sup.upper):
        raise DomainError("grid points must lie strictly inside the support")
    if log_density is None:
        lf = log_pdf(params, xs)
    else:
        lf = np.asarray(log_density(xs), dtype=float)
    centered = lf - params.gamma * np.log(xs)
    if params.branch == _kernel.GAMMA:
        y = centered
    else:
        y = np.exp((1.0 - params.alpha) * centered)
    design = np.column_stack([np.ones_like(xs), xs**params.delta])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(np.max(np.abs(y - design @ coef)))


# ---------------------------------------------------------------------------
# maximum likelihood
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MleResult:
    params: ScalarPathwayParams
    log_likelihood: float
    warnings: tuple[str, ...]


def _encode(params: ScalarPathwayParams, free: list[str]) -> np.ndarray:
    theta = []
    for name in free:
        v = getattr(params, name)
        if name == "alpha":
            # per-branch map: alpha = 1 -/+ exp(theta)
            theta.append(math.log(abs(v - 1.0)))
        elif name == "gamma":
            theta.append(math.log(max(v, 1e-6)))
        else:
            theta.append(math.log(v))
    return np.asarray(theta, dtype=float)


def _decode(theta, free, fixed_vals, alpha_sign):
    vals = dict(fixed_vals)
    for name, t in zip(free, theta):
        if name == "alpha":
            vals["alpha"] = 1.0 + alpha_sign * math.exp(t)
        else:
            vals[name] = math.exp(t)
    return ScalarPathwayParams(**vals)


def mle_fit(
    data,
    init: ScalarPathwayParams,
    fixed: Iterable[str] = (),
) -> MleResult:
    """Local likelihood maximizer (Nelder-Mead over transformed coordinates).

    ``fixed`` names a subset of {'alpha', 'a', 'gamma', 'delta'} held at
    their ``init`` values.  When alpha is free, the search stays on the
    branch of the initial value; an initial alpha at exactly 1 tries both
    neighboring branches and keeps the better optimum.  Infeasible regions
    (type-1 support excluding data, or a non-normalizable type-2 corner)
    repel the simplex through a growing penalty; endpoints that finish on
    a feasibility boundary are flagged in ``warnings``.
    """
    arr = np.asarray(data, dtype=float).ravel()
    if arr.size < 10:
        raise DomainError("need at least 10 observations")
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise DomainError("observations must be positive and finite")
    if float(arr.max()) == float(arr.min()):
        raise DegenerateDataError("all observations are equal")
    fixed_set = set(fixed)
    unknown = fixed_set - set(_PARAM_NAMES)
    if unknown:
        raise DomainError(f"unknown fixed parameter names: {sorted(unknown)}")
    free = [n for n in _PARAM_NAMES if n not in fixed_set]
    xmax = float(arr.max())

    _kernel.require_normalizable(init.alpha, init.delta, init.rho)
    if init.branch == _kernel.TYPE1 and xmax >= init.support.upper:
        raise DomainError("initial type-1 support excludes the largest observation")

    def run_branch(alpha_sign: float, start: ScalarPathwayParams):
        fixed_vals = {n: getattr(start, n) for n in _PARAM_NAMES if n not in free}

        def nll(theta):
            try:
                p = _decode(theta, free, fixed_vals, alpha_sign)
            except DomainError:
                return 1e8
            try:
                _kernel.require_normalizable(p.alpha, p.delta, p.rho)
            except Exception:
                margin = p.rho - 1.0 / max(p.alpha - 1.0, 1e-12)
                return 1e8 * (1.0 + max(margin, 0.0))
            if p.branch == _kernel.TYPE1:
                upper = p.support.upper
                if xmax >= upper:
                    return 1e8 * (1.0 + xmax / upper)
            ll = float(np.sum(log_pdf(p, arr)))
            return -ll if math.isfinite(ll) else 1e8

        theta0 = _encode(start, free)
        if free:
            res = _sp_optimize.minimize(
                nll, theta0, method="Nelder-Mead",
                options={"maxiter": 2000 * max(len(free), 1), "xatol": 1e-8,
                         "fatol": 1e-10},
            )
            theta, converged = res.x, bool(res.success)
        else:
            theta, converged = theta0, True
        p = _decode(theta, free, {n: getattr(start, n) for n in _PARAM_NAMES
                                  if n not in free}, alpha_sign)
        return p, -nll(theta), converged

    candidates = []
    if "alpha" in free and init.branch == _kernel.GAMMA:
        for sign, a0 in ((-1.0, 0.9), (1.0, 1.1)):
            start = ScalarPathwayParams(a0, init.a, init.gamma, init.delta)
            try:
                _kernel.require_normalizable(start.alpha, start.delta, start.rho)
                if start.branch == _kernel.TYPE1 and xmax >= start.support.upper:
                    continue
            except Exception:
                continue
            candidates.append(run_branch(sign, start))
    else:
        sign = -1.0 if init.alpha < 1.0 else 1.0
        candidates.append(run_branch(sign, init))
    if not candidates:
        raise DomainError("no feasible branch for the given initial value")

    params, loglik, converged = max(candidates, key=lambda c: c[1])
    warns = []
    if not converged:
        warns.append("optimizer did not report convergence")
    if params.branch == _kernel.TYPE1:
        if params.support.upper / xmax < 1.0 + 1e-6:
            warns.append("solution pinned at the support boundary")
    elif params.branch == _kernel.TYPE2:
        if 1.0 / (params.alpha - 1.0) - params.rho < 1e-3:
            warns.append("solution near the normalizability boundary")
    return MleResult(params, float(loglik), tuple(warns))
