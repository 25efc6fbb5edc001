"""Shared engine for the three-branch power kernels.

Every pathway density in this library reduces, after a change of variables,
to a one-dimensional law on w > 0 of the form

    g(w) = C * w^(delta*rho - 1) * K_alpha(w),

where the kernel K switches with the pathway parameter:

    alpha < 1 :  [1 - a(1-alpha) w^delta]^(1/(1-alpha))   on a bounded support
    alpha = 1 :  exp(-a w^delta)
    alpha > 1 :  [1 + a(alpha-1) w^delta]^(-1/(alpha-1))

The substitution z = a|1-alpha| w^delta turns the three branches into a
type-1 beta, a gamma, and a type-2 beta integral with z-space shape rho,
which is what the closed-form normalizers, moments, and exact samplers
below exploit.  The scalar family uses rho = (gamma+1)/delta; the radial
law of the p-variate family uses rho = gamma/delta + p/(2*delta).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DivergenceError, DomainError, NonNormalizableError
from .numerics import RandomStream, ln_gamma

# alpha within this band of 1 is routed to the gamma branch; the (alpha - 1)
# denominators cancel catastrophically closer than this.
ALPHA_GAMMA_BAND = 1e-6

TYPE1 = "type1"
GAMMA = "gamma"
TYPE2 = "type2"


def branch(alpha: float) -> str:
    if not math.isfinite(alpha):
        raise DomainError("alpha must be finite")
    if abs(alpha - 1.0) <= ALPHA_GAMMA_BAND:
        return GAMMA
    return TYPE1 if alpha < 1.0 else TYPE2


def upper_support(alpha: float, a: float, delta: float) -> float:
    """Upper edge of the support: finite only on the type-1 branch."""
    if branch(alpha) == TYPE1:
        return (a * (1.0 - alpha)) ** (-1.0 / delta)
    return math.inf


def require_normalizable(alpha: float, delta: float, rho: float) -> None:
    """Raise unless the kernel with z-space shape rho has a finite integral."""
    if rho <= 0:
        raise NonNormalizableError(f"shape rho = {rho} must be positive")
    if branch(alpha) == TYPE2 and 1.0 / (alpha - 1.0) - rho <= 0:
        raise NonNormalizableError(
            f"type-2 branch needs 1/(alpha-1) > rho; got alpha={alpha}, rho={rho}"
        )


def log_norm(alpha: float, a: float, delta: float, rho: float) -> float:
    """ln C, the log normalizing constant of w^(delta*rho-1) * K_alpha(w)."""
    require_normalizable(alpha, delta, rho)
    b = branch(alpha)
    base = math.log(delta) - ln_gamma(rho)
    if b == GAMMA:
        return base + rho * math.log(a)
    if b == TYPE1:
        z = 1.0 / (1.0 - alpha)
        return (
            base
            + rho * math.log(a * (1.0 - alpha))
            + ln_gamma(rho + z + 1.0)
            - ln_gamma(z + 1.0)
        )
    z = 1.0 / (alpha - 1.0)
    return (
        base
        + rho * math.log(a * (alpha - 1.0))
        + ln_gamma(z)
        - ln_gamma(z - rho)
    )


def log_kernel(alpha: float, a: float, delta: float, w):
    """Elementwise ln K_alpha(w); -inf where the type-1 kernel vanishes."""
    w = np.asarray(w, dtype=float)
    wd = np.power(w, delta, where=w > 0, out=np.zeros_like(w))
    b = branch(alpha)
    if b == GAMMA:
        return -a * wd
    if b == TYPE1:
        arg = 1.0 - a * (1.0 - alpha) * wd
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(arg > 0.0, np.log(np.maximum(arg, 1e-320)), -np.inf)
        return out / (1.0 - alpha)
    return -np.log1p(a * (alpha - 1.0) * wd) / (alpha - 1.0)


def log_moment(alpha: float, a: float, delta: float, rho: float, k: float) -> float:
    """ln E[w^k] under the normalized law; raises when the moment diverges."""
    if k < 0:
        raise DomainError("moment order k must be non-negative")
    if k == 0:
        return 0.0
    require_normalizable(alpha, delta, rho)
    s = k / delta
    b = branch(alpha)
    if b == GAMMA:
        return -s * math.log(a) + ln_gamma(rho + s) - ln_gamma(rho)
    if b == TYPE1:
        z = 1.0 / (1.0 - alpha)
        return (
            -s * math.log(a * (1.0 - alpha))
            + ln_gamma(rho + s)
            + ln_gamma(rho + z + 1.0)
            - ln_gamma(rho)
            - ln_gamma(rho + z + 1.0 + s)
        )
    z = 1.0 / (alpha - 1.0)
    if z - rho - s <= 0:
        raise DivergenceError(
            f"moment of order {k} diverges: needs 1/(alpha-1) - rho - k/delta > 0"
        )
    return (
        -s * math.log(a * (alpha - 1.0))
        + ln_gamma(rho + s)
        + ln_gamma(z - rho - s)
        - ln_gamma(rho)
        - ln_gamma(z - rho)
    )


def sample(
    alpha: float, a: float, delta: float, rho: float, n: int, stream: RandomStream
) -> np.ndarray:
    """Exact draws via the beta/gamma reparameterization of z = a|1-alpha|w^delta."""
    if int(n) != n or n < 0:
        raise DomainError("sample size must be a non-negative integer")
    require_normalizable(alpha, delta, rho)
    n = int(n)
    gen = stream.generator
    b = branch(alpha)
    if b == GAMMA:
        z = gen.gamma(rho, size=n)
        return (z / a) ** (1.0 / delta)
    if b == TYPE1:
        z = gen.beta(rho, 1.0 / (1.0 - alpha) + 1.0, size=n)
        return (z / (a * (1.0 - alpha))) ** (1.0 / delta)
    q = 1.0 / (alpha - 1.0) - rho
    z = gen.gamma(rho, size=n) / gen.gamma(q, size=n)  # type-2 beta ratio
    return (z / (a * (alpha - 1.0))) ** (1.0 / delta)
