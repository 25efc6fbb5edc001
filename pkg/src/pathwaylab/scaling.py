"""Diffusion-entropy and standard-deviation scaling analysis of time series.

Series values are treated as diffusion increments: window sums build the
diffusion trajectory, and the growth of either the plug-in entropy of the
displacement histogram (DEA) or the displacement standard deviation (SDA)
against ln t yields the scaling exponents.

    DEA:  S(t) = A + delta ln t       (slope delta tracks the pdf scaling)
    SDA:  ln D(t) = const + H ln t    (slope H is the Hurst-type exponent)

For a Gaussian, uncorrelated series both slopes are 1/2; Levy walks obey
delta = 1/(3 - 2H); Levy flights break the variance route entirely while
DEA still recovers delta = 1/(mu - 1) from the tail index mu.

Synthetic generators for all of these regimes live at the bottom of the
module so the estimators can be validated end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import scalar
from .errors import DegenerateSeriesError, DomainError
from .numerics import FitLine, RandomStream, linear_fit
from .scalar import ScalarPathwayParams, entropy_from_samples

__all__ = [
    "DeaConfig",
    "DeaResult",
    "SdaResult",
    "build_displacements",
    "dea",
    "flight_durations",
    "gaussian_series",
    "gen_series",
    "levy_flight_series",
    "levy_walk_delta",
    "levy_walk_series",
    "pathway_series",
    "sda",
    "window_sizes",
]


def _as_series(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size < 2:
        raise DomainError("series needs at least two values")
    if not np.all(np.isfinite(arr)):
        raise DomainError("series values must be finite")
    return arr


@dataclass(frozen=True)
class DeaConfig:
    """Windowing and binning choices shared by DEA and SDA.

    ``t_max`` defaults to N // 64: beyond that the overlapping windows stop
    being informative (entropy and dispersion estimates turn noisy and
    biased), well before the hard N // 10 cap.  ``bin_fraction`` is kappa in
    h = s / kappa with s the increment standard deviation; keeping h fixed
    across t shifts every S(t) by the same constant, leaving the slope
    untouched.
    """

    t_min: int = 10
    t_max: int | None = None
    n_window_sizes: int = 25
    bin_fraction: float = 10.0
    overlap: bool = True

    def __post_init__(self):
        if int(self.t_min) != self.t_min or self.t_min < 2:
            raise DomainError("t_min must be an integer >= 2")
        if self.t_max is not None and (int(self.t_max) != self.t_max
                                       or self.t_max <= self.t_min):
            raise DomainError("t_max must be an integer > t_min")
        if int(self.n_window_sizes) != self.n_window_sizes or self.n_window_sizes < 5:
            raise DomainError("need at least five window sizes")
        if not (self.bin_fraction > 0):
            raise DomainError("bin_fraction must be positive")


@dataclass(frozen=True)
class DeaResult:
    points: list
    delta: float
    intercept: float
    fit: FitLine


@dataclass(frozen=True)
class SdaResult:
    points: list
    hurst: float
    fit: FitLine


def build_displacements(values, t: int, overlap: bool = True) -> np.ndarray:
    """Window sums x_i(t) = sum of t consecutive increments.

    Overlapping windows (stride one) give N - t + 1 displacements; the
    non-overlapping variant strides by t.
    """
    arr = _as_series(values)
    if int(t) != t or not (1 <= t <= arr.size):
        raise DomainError(f"window size t must be in [1, {arr.size}]")
    t = int(t)
    csum = np.concatenate(([0.0], np.cumsum(arr)))
    if overlap:
        return csum[t:] - csum[:-t]
    starts = np.arange(0, arr.size - t + 1, t)
    return csum[starts + t] - csum[starts]


def window_sizes(n_obs: int, config: DeaConfig) -> np.ndarray:
    """Log-spaced integer window sizes within [t_min, min(t_max, N // 10)]."""
    cap = n_obs // 10
    hi = n_obs // 64 if config.t_max is None else config.t_max
    if hi > cap:
        raise DomainError(f"t_max must not exceed N // 10 = {cap}")
    if hi <= config.t_min:
        raise DomainError("series too short for the requested window range")
    raw = np.exp(np.linspace(math.log(config.t_min), math.log(hi),
                             config.n_window_sizes))
    ts = np.unique(np.round(raw).astype(int))
    ts = ts[(ts >= config.t_min) & (ts <= hi)]
    if ts.size < 5:
        raise DomainError("fewer than five usable window sizes")
    return ts


def dea(values, config: DeaConfig | None = None) -> DeaResult:
    """Diffusion entropy analysis: fit S(t) = A + delta ln t.

    S(t) is the plug-in entropy of the fixed-width displacement histogram
    plus ln h; h = s / bin_fraction is held constant across every t.
    """
    arr = _as_series(values)
    cfg = config or DeaConfig()
    s = float(arr.std())
    if s == 0.0:
        raise DegenerateSeriesError("increments have zero variance")
    h = s / cfg.bin_fraction
    pts = []
    for t in window_sizes(arr.size, cfg):
        disp = build_displacements(arr, int(t), overlap=cfg.overlap)
        pts.append((int(t), entropy_from_samples(disp, "shannon", bin_width=h)))
    fit = linear_fit([(math.log(t), st) for t, st in pts])
    return DeaResult(pts, fit.slope, fit.intercept, fit)


def sda(values, config: DeaConfig | None = None) -> SdaResult:
    """Standard deviation analysis: fit ln D(t) = const + H ln t."""
    arr = _as_series(values)
    cfg = config or DeaConfig()
    if float(arr.std()) == 0.0:
        raise DegenerateSeriesError("increments have zero variance")
    pts = []
    for t in window_sizes(arr.size, cfg):
        disp = build_displacements(arr, int(t), overlap=cfg.overlap)
        d = float(np.std(disp, ddof=1)) if disp.size > 1 else 0.0
        if d == 0.0:
            raise DegenerateSeriesError(f"zero displacement dispersion at t={t}")
        pts.append((int(t), d))
    fit = linear_fit([(math.log(t), math.log(d)) for t, d in pts])
    return SdaResult(pts, fit.slope, fit)


def levy_walk_delta(H: float) -> float:
    """The Levy-walk relation delta = 1/(3 - 2H); pole at H = 1.5."""
    if not math.isfinite(H) or H >= 1.5:
        raise DomainError("relation requires H < 1.5")
    return 1.0 / (3.0 - 2.0 * H)


# ---------------------------------------------------------------------------
# synthetic generators
# ---------------------------------------------------------------------------

def _check_n(n) -> int:
    if int(n) != n or n < 2:
        raise DomainError("series length must be an integer >= 2")
    return int(n)


def gaussian_series(n: int, stream: RandomStream, sigma: float = 1.0) -> np.ndarray:
    """i.i.d. normal increments (the uncorrelated baseline, delta = H = 0.5)."""
    if not (sigma > 0) or not math.isfinite(sigma):
        raise DomainError("sigma must be positive")
    return stream.generator.normal(0.0, sigma, size=_check_n(n))


def levy_flight_series(
    n: int, stream: RandomStream, mu: float, scale: float = 1.0
) -> np.ndarray:
    """i.i.d. symmetric steps whose density tail falls off like |x|^(-mu).

    Implemented as symmetrized heavy-tail pathway draws with delta = 1,
    gamma = 0 and pathway parameter 1 + 1/mu, which puts the step density
    tail exactly at exponent mu.  For mu in (2, 3) the variance diverges
    while the mean step is finite, the Levy-flight regime.
    """
    n = _check_n(n)
    if not (2.0 < mu < 3.0):
        raise DomainError("tail exponent mu must lie in (2, 3)")
    if not (scale > 0):
        raise DomainError("scale must be positive")
    params = ScalarPathwayParams(alpha=1.0 + 1.0 / mu, a=1.0, gamma=0.0, delta=1.0)
    steps = scalar.sample(params, n, stream)
    signs = np.where(stream.generator.uniform(size=n) < 0.5, -1.0, 1.0)
    return scale * signs * steps


def flight_durations(mu: float, count: int, stream: RandomStream) -> np.ndarray:
    """Integer flight durations with survival P(T >= k) = k^(1 - mu), k >= 1.

    Drawn by inverse transform, T = floor(U^(-1/(mu-1))); the tail of the
    pmf then decays like k^(-mu) and the mean is zeta(mu - 1) for mu > 2.
    """
    if not (mu > 2.0):
        raise DomainError("duration exponent mu must exceed 2")
    if int(count) != count or count < 1:
        raise DomainError("count must be a positive integer")
    u = stream.generator.uniform(size=int(count))
    return np.maximum(np.floor(u ** (-1.0 / (mu - 1.0))), 1.0).astype(np.int64)


def levy_walk_series(
    n: int, stream: RandomStream, mu: float, speed: float = 1.0
) -> np.ndarray:
    """Increments of magnitude ``speed`` with constant sign over each flight."""
    n = _check_n(n)
    if not (2.0 < mu < 3.0):
        raise DomainError("duration exponent mu must lie in (2, 3)")
    if not (speed > 0):
        raise DomainError("speed must be positive")
    gen = stream.generator
    chunks = []
    total = 0
    while total < n:
        batch = max(256, (n - total) // 2)
        durations = flight_durations(mu, batch, stream)
        signs = np.where(gen.uniform(size=batch) < 0.5, -1.0, 1.0)
        for dur, sign in zip(durations, signs):
            chunks.append(np.full(int(dur), sign * speed))
            total += int(dur)
            if total >= n:
                break
    return np.concatenate(chunks)[:n]


def pathway_series(
    n: int, stream: RandomStream, params: ScalarPathwayParams
) -> np.ndarray:
    """Symmetrized draws from the scalar pathway family as increments."""
    n = _check_n(n)
    steps = scalar.sample(params, n, stream)
    signs = np.where(stream.generator.uniform(size=n) < 0.5, -1.0, 1.0)
    return signs * steps


_GENERATORS = {
    "gaussian": gaussian_series,
    "levy_flight": levy_flight_series,
    "levy_walk": levy_walk_series,
    "pathway_steps": pathway_series,
}


def gen_series(kind: str, n: int, stream: RandomStream, **kwargs) -> np.ndarray:
    """Dispatch to a named generator; see the individual functions for kwargs."""
    try:
        fn = _GENERATORS[kind]
    except KeyError:
        raise DomainError(
            f"unknown generator {kind!r}; choose from {sorted(_GENERATORS)}"
        ) from None
    return fn(n, stream, **kwargs)
