"""Shared numerical machinery.

Special functions, adaptive quadrature, histogramming, ordinary least
squares, SPD factorizations, Monte-Carlo averaging, and the seeded
random-stream contract used by every other module.  Everything here is pure
given its inputs; random state lives only inside :class:`RandomStream`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate as _sp_integrate
from scipy import special as _sp_special

from .errors import (
    AccuracyError,
    DegenerateFitError,
    DomainError,
    FactorizationError,
)

__all__ = [
    "FitLine",
    "RandomStream",
    "fixed_width_histogram",
    "integrate_1d",
    "linear_fit",
    "ln_gamma",
    "ln_matrix_gamma",
    "mc_mean",
    "spd_factor",
    "spd_sqrt",
]


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``.

    Accepts scalars or arrays; relative error is at the 1e-15 level over
    the supported range, comfortably below the 1e-13 contract.
    """
    arr = np.asarray(x, dtype=float)
    if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0.0)):
        raise DomainError("ln_gamma requires finite x > 0")
    out = _sp_special.gammaln(arr)
    return float(out) if arr.ndim == 0 else out


def ln_matrix_gamma(p: int, alpha: float) -> float:
    """log of the real matrix-variate gamma of order ``p``.

    ln G_p(alpha) = (p(p-1)/4) ln(pi) + sum_{j=0}^{p-1} ln Gamma(alpha - j/2),
    defined for alpha > (p - 1)/2.  For p = 1 this is plain ``ln_gamma``.
    """
    if int(p) != p or p < 1:
        raise DomainError("order p must be a positive integer")
    p = int(p)
    if not math.isfinite(alpha) or alpha <= (p - 1) / 2:
        raise DomainError(
            f"matrix gamma of order {p} needs alpha > {(p - 1) / 2}, got {alpha}"
        )
    terms = sum(ln_gamma(alpha - 0.5 * j) for j in range(p))
    return p * (p - 1) / 4.0 * math.log(math.pi) + terms


def integrate_1d(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    tol: float = 1e-10,
    singular_points: Sequence[float] = (),
) -> float:
    """Adaptive quadrature of ``f`` on ``[lower, upper]`` (upper may be inf).

    The interval is split at any interior ``singular_points`` so that
    integrable endpoint singularities are handled by the extrapolating
    rule on each piece.  Raises :class:`AccuracyError` (carrying the best
    estimate) when the requested tolerance cannot be certified.
    """
    if not math.isfinite(lower) and lower != -math.inf:
        raise DomainError("lower limit must be finite or -inf")
    if upper <= lower:
        raise DomainError("upper limit must exceed lower limit")
    if tol <= 0:
        raise DomainError("tol must be positive")

    cuts = sorted({float(s) for s in singular_points if lower < s < upper})
    edges = [lower, *cuts, upper]

    total = 0.0
    err = 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", _sp_integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            val, abserr = _sp_integrate.quad(
                f, a, b, epsabs=tol, epsrel=tol, limit=200
            )
            total += val
            err += abserr
    budget = 10.0 * max(tol, tol * abs(total))
    if caught or not math.isfinite(total) or err > budget:
        raise AccuracyError(
            f"quadrature did not converge to tol={tol} (error estimate {err:.3g})",
            estimate=total,
        )
    return total


@dataclass(frozen=True)
class FitLine:
    """Ordinary least-squares line with its coefficient of determination."""

    intercept: float
    slope: float
    r_squared: float
    n_points: int


def linear_fit(points: Iterable[tuple[float, float]]) -> FitLine:
    """OLS fit of y against x; exact (r_squared == 1.0) on collinear input."""
    pts = np.asarray(list(points) if not isinstance(points, np.ndarray) else points,
                     dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DomainError("points must be a sequence of (x, y) pairs")
    n = pts.shape[0]
    if n < 2:
        raise DegenerateFitError("need at least two points")
    x, y = pts[:, 0], pts[:, 1]
    if not np.all(np.isfinite(pts)):
        raise DomainError("points must be finite")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise DegenerateFitError("all x values coincide")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - ym) ** 2))
    # collinear within 1e-12 (rms residual, relative to the y scale) => exactly 1
    scale = max(1.0, float(np.max(np.abs(y))))
    if math.sqrt(ss_res / n) <= 1e-12 * scale:
        r2 = 1.0
    elif ss_tot == 0.0:
        r2 = 0.0
    else:
        r2 = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return FitLine(float(intercept), slope, r2, n)


def fixed_width_histogram(
    data, bin_width: float, origin: float = 0.0
) -> list[tuple[int, int]]:
    """Count values into half-open bins [origin + j*h, origin + (j+1)*h).

    A value lying exactly on an edge goes to the upper bin.  Only occupied
    bins are returned, as sorted ``(bin_index, count)`` pairs; the counts
    always sum to ``len(data)``.
    """
    arr = np.asarray(data, dtype=float).ravel()
    if arr.size == 0:
        raise DomainError("histogram needs non-empty data")
    if not np.all(np.isfinite(arr)):
        raise DomainError("histogram data must be finite")
    if not (bin_width > 0) or not math.isfinite(bin_width):
        raise DomainError("bin_width must be positive and finite")
    idx = np.floor((arr - origin) / bin_width).astype(np.int64)
    uniq, counts = np.unique(idx, return_counts=True)
    return [(int(j), int(c)) for j, c in zip(uniq, counts)]


_SYM_TOL = 1e-10


def _require_symmetric(V: np.ndarray, what: str) -> np.ndarray:
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1]:
        raise FactorizationError(f"{what} must be a square matrix")
    if not np.all(np.isfinite(V)):
        raise FactorizationError(f"{what} must be finite")
    asym = float(np.max(np.abs(V - V.T))) if V.size else 0.0
    if asym > _SYM_TOL * max(1.0, float(np.max(np.abs(V)))):
        raise FactorizationError(f"{what} is not symmetric (max asymmetry {asym:.3g})")
    return 0.5 * (V + V.T)


def spd_factor(V) -> np.ndarray:
    """Lower-triangular L with L @ L.T == V, via Cholesky.

    Any factor satisfying the reconstruction identity is acceptable to the
    callers (elliptical sampling is invariant to the choice); Cholesky is
    the cheapest.
    """
    Vs = _require_symmetric(V, "spd_factor input")
    try:
        return np.linalg.cholesky(Vs)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"matrix is not positive definite: {exc}") from exc


def spd_sqrt(V) -> np.ndarray:
    """Symmetric positive definite square root of an SPD matrix."""
    Vs = _require_symmetric(V, "spd_sqrt input")
    w, U = np.linalg.eigh(Vs)
    if np.any(w <= 0):
        raise FactorizationError("matrix is not positive definite")
    return (U * np.sqrt(w)) @ U.T


def mc_mean(
    f: Callable, sampler: Callable[[int], np.ndarray], n: int
) -> tuple[float, float]:
    """Monte-Carlo mean and standard error of ``f`` over ``n`` draws.

    ``sampler(n)`` must return an array whose leading axis indexes draws
    (it is expected to be bound to a :class:`RandomStream`, so the result
    is deterministic given the stream's seed).  ``f`` may be vectorized
    over the draw axis; if not, it is applied per draw.
    """
    if int(n) != n or n < 2:
        raise DomainError("mc_mean needs n >= 2")
    n = int(n)
    x = sampler(n)
    vals = np.asarray(f(x), dtype=float)
    if vals.shape != (n,):
        vals = np.asarray([float(f(xi)) for xi in x], dtype=float)
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(n))
    return est, se


class RandomStream:
    """Reproducible random source with disjoint, spawnable substreams.

    Backed by the counter-based Philox generator, so a given 64-bit seed
    produces the same sequence on every run and platform, and ``split``
    yields independent child streams without coordination.
    """

    def __init__(self, seed: int, _seq: np.random.SeedSequence | None = None):
        if _seq is None:
            if int(seed) != seed or not (0 <= int(seed) < 2**64):
                raise DomainError("seed must be an unsigned 64-bit integer")
            _seq = np.random.SeedSequence(int(seed))
        self.seed = int(seed)
        self._seq = _seq
        self.generator = np.random.Generator(np.random.Philox(_seq))

    def split(self, k: int) -> list["RandomStream"]:
        """Spawn ``k`` disjoint substreams (deterministic given the seed)."""
        if int(k) != k or k < 1:
            raise DomainError("split count must be a positive integer")
        return [RandomStream(self.seed, _seq=c) for c in self._seq.spawn(int(k))]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"RandomStream(seed={self.seed})"
