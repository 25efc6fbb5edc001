"""Rectangular matrix-variate pathway model.

For a p x n matrix X (n >= p, full rank) and SPD constants A (p x p),
B (n x n), the kernel is built from W = A^{1/2} X B X' A^{1/2}:

    alpha < 1 :  |W|^gamma |I - a(1-alpha) W|^(1/(1-alpha))   where I - a(1-alpha)W > 0
    alpha = 1 :  |W|^gamma exp(-a tr W)                        (eigenvalue-wise limit)
    alpha > 1 :  |W|^gamma |I + a(alpha-1) W|^(-1/(alpha-1))

The normalizing constant follows from the substitution Y = A^{1/2} X B^{1/2}
(dY = |A|^{n/2} |B|^{p/2} dX), the Stiefel-manifold reduction to S = Y Y',
and a matrix-variate type-1 beta / gamma / type-2 beta integral.  The closed
form lives entirely in matrix-gamma functions and is assembled in log space;
because the matrix-case constants are easy to get wrong, the Monte-Carlo
check in :func:`mc_normalization` is wired into the test suite as the oracle
for every branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .errors import DomainError, NonNormalizableError
from .numerics import (
    RandomStream,
    ln_matrix_gamma,
    spd_factor,
    spd_sqrt,
)

__all__ = [
    "MatrixPathwayParams",
    "jacobian_factor",
    "kernel_eval",
    "log_norm_const",
    "mc_normalization",
    "norm_const",
    "pdf",
]


@dataclass(frozen=True)
class MatrixPathwayParams:
    """SPD matrices A (p x p), B (n x n) and pathway parameters (alpha, a, gamma)."""

    A: np.ndarray
    B: np.ndarray
    alpha: float
    a: float
    gamma: float
    _A_half: np.ndarray = field(init=False, repr=False, compare=False)
    _B_chol: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        A_half = spd_sqrt(self.A)  # symmetric root keeps orthogonal equivariance
        B_chol = spd_factor(self.B)
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float)
        if B.shape[0] < A.shape[0]:
            raise DomainError("need n >= p (B at least as large as A)")
        for name in ("alpha", "a", "gamma"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite real")
        if self.a <= 0:
            raise DomainError("a must be positive")
        if self.gamma < 0:
            raise DomainError("gamma must be non-negative")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "_A_half", A_half)
        object.__setattr__(self, "_B_chol", B_chol)

    @property
    def p(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def branch(self) -> str:
        return _kernel.branch(self.alpha)


def _require_normalizable(params: MatrixPathwayParams) -> None:
    """The type-2 matrix beta integral needs 1/(alpha-1) - gamma - n/2 > (p-1)/2.

    This is the bound the matrix-gamma arguments force; for p = 1 it reduces
    to the scalar condition 1/(alpha-1) > gamma + n/2.
    """
    if params.branch == _kernel.TYPE2:
        z = 1.0 / (params.alpha - 1.0)
        if z - params.gamma - params.n / 2.0 <= (params.p - 1) / 2.0:
            raise NonNormalizableError(
                "type-2 matrix branch needs 1/(alpha-1) - gamma - n/2 > (p-1)/2; "
                f"got alpha={params.alpha}, gamma={params.gamma}, "
                f"p={params.p}, n={params.n}"
            )


def _gram(params: MatrixPathwayParams, X: np.ndarray) -> np.ndarray:
    """W = A^{1/2} X B X' A^{1/2}, assembled as M M' so it is symmetric PSD."""
    M = params._A_half @ X @ params._B_chol
    return M @ M.T


def _log_kernel_from_w(alpha: float, a: float, gamma: float, W: np.ndarray) -> float:
    """ln kernel from the p x p Gram matrix; -inf where the kernel vanishes."""
    p = W.shape[0]
    sign, logdet_w = np.linalg.slogdet(W)
    if sign <= 0:
        # rank-deficient X: |W| = 0, so the kernel vanishes unless gamma == 0
        logdet_w = -math.inf
    term_w = 0.0 if gamma == 0.0 else gamma * logdet_w
    b = _kernel.branch(alpha)
    if b == _kernel.GAMMA:
        return term_w - a * float(np.trace(W))
    if b == _kernel.TYPE1:
        S = np.eye(p) - a * (1.0 - alpha) * W
        try:
            np.linalg.cholesky(0.5 * (S + S.T))
        except np.linalg.LinAlgError:
            return -math.inf
        sign_s, logdet_s = np.linalg.slogdet(S)
        if sign_s <= 0:
            return -math.inf
        return term_w + logdet_s / (1.0 - alpha)
    S = np.eye(p) + a * (alpha - 1.0) * W
    _, logdet_s = np.linalg.slogdet(S)
    return term_w - logdet_s / (alpha - 1.0)


def kernel_eval(params: MatrixPathwayParams, X) -> float:
    """Kernel value at a p x n matrix; zero outside the type-1 support."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape != (params.p, params.n):
        raise DomainError(f"X must be {params.p} x {params.n}, got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DomainError("X must be finite")
    lk = _log_kernel_from_w(params.alpha, params.a, params.gamma, _gram(params, X))
    return math.exp(lk) if lk > -math.inf else 0.0


def jacobian_factor(A, B) -> float:
    """|A|^{n/2} |B|^{p/2}, the volume factor of Y = A^{1/2} X B^{1/2}."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    spd_factor(A)
    spd_factor(B)
    p, n = A.shape[0], B.shape[0]
    _, lda = np.linalg.slogdet(A)
    _, ldb = np.linalg.slogdet(B)
    return math.exp(n / 2.0 * lda + p / 2.0 * ldb)


def log_norm_const(params: MatrixPathwayParams) -> float:
    """ln of the constant that makes the kernel integrate to one over R^{p x n}."""
    _require_normalizable(params)
    p, n = params.p, params.n
    rho = params.gamma + n / 2.0
    _, lda = np.linalg.slogdet(params.A)
    _, ldb = np.linalg.slogdet(params.B)
    out = (
        n / 2.0 * lda
        + p / 2.0 * ldb
        + ln_matrix_gamma(p, n / 2.0)
        - n * p / 2.0 * math.log(math.pi)
    )
    b = params.branch
    if b == _kernel.GAMMA:
        return out + p * rho * math.log(params.a) - ln_matrix_gamma(p, rho)
    if b == _kernel.TYPE1:
        z = 1.0 / (1.0 - params.alpha)
        return (
            out
            + p * rho * math.log(params.a * (1.0 - params.alpha))
            + ln_matrix_gamma(p, rho + z + (p + 1) / 2.0)
            - ln_matrix_gamma(p, rho)
            - ln_matrix_gamma(p, z + (p + 1) / 2.0)
        )
    z = 1.0 / (params.alpha - 1.0)
    return (
        out
        + p * rho * math.log(params.a * (params.alpha - 1.0))
        + ln_matrix_gamma(p, z)
        - ln_matrix_gamma(p, rho)
        - ln_matrix_gamma(p, z - rho)
    )


def norm_const(params: MatrixPathwayParams) -> float:
    return math.exp(log_norm_const(params))


def pdf(params: MatrixPathwayParams, X) -> float:
    return norm_const(params) * kernel_eval(params, X)


# ---------------------------------------------------------------------------
# Monte-Carlo oracle for the normalizing constants
# ---------------------------------------------------------------------------

def _batch_log_kernel_y(alpha, a, gamma, Y):
    """ln kernel of W = Y Y' for a batch of Y, vectorized over the batch."""
    W = Y @ np.swapaxes(Y, 1, 2)
    p = W.shape[1]
    if gamma == 0.0:
        term_w = 0.0
    else:
        det_w = np.linalg.det(W)
        with np.errstate(divide="ignore", invalid="ignore"):
            term_w = np.where(det_w > 0.0, gamma * np.log(np.maximum(det_w, 1e-320)),
                              -np.inf)
    b = _kernel.branch(alpha)
    if b == _kernel.GAMMA:
        return term_w - a * np.trace(W, axis1=1, axis2=2)
    if b == _kernel.TYPE1:
        lam = np.linalg.eigvalsh(W)
        arg = 1.0 - a * (1.0 - alpha) * lam
        inside = np.all(arg > 0.0, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            logdet = np.sum(np.log(np.maximum(arg, 1e-320)), axis=1)
        out = term_w + logdet / (1.0 - alpha)
        return np.where(inside, out, -np.inf)
    S = np.eye(p) + a * (alpha - 1.0) * W
    _, logdet = np.linalg.slogdet(S)
    return term_w - logdet / (alpha - 1.0)


def mc_normalization(
    params: MatrixPathwayParams,
    n_draws: int,
    stream: RandomStream,
    n_chunks: int = 16,
) -> tuple[float, float]:
    """Monte-Carlo estimate (and standard error) of norm_const x integral(kernel).

    The estimate should be 1 for a correct constant.  Proposals are chosen
    per branch: uniform over a box bounding the eigen-support for alpha < 1,
    a variance-matched Gaussian for alpha = 1, and heavy-tailed Cauchy
    entries (importance-weighted) for alpha > 1.  Work is spread over split
    substreams and reduced in a fixed order, so results are reproducible.
    """
    if int(n_draws) != n_draws or n_draws < 2:
        raise DomainError("n_draws must be an integer >= 2")
    _require_normalizable(params)
    p, n = params.p, params.n
    alpha, a, gamma = params.alpha, params.a, params.gamma
    b = params.branch
    # integral over X = |A|^{-n/2} |B|^{-p/2} * integral over Y
    _, lda = np.linalg.slogdet(params.A)
    _, ldb = np.linalg.slogdet(params.B)
    scale = math.exp(log_norm_const(params) - n / 2.0 * lda - p / 2.0 * ldb)

    per = int(n_draws) // n_chunks
    sizes = [per + (1 if i < int(n_draws) - per * n_chunks else 0)
             for i in range(n_chunks)]
    total = 0.0
    total_sq = 0.0
    count = 0
    for sub, m in zip(stream.split(n_chunks), sizes):
        if m == 0:
            continue
        gen = sub.generator
        if b == _kernel.TYPE1:
            half = math.sqrt(1.0 / (a * (1.0 - alpha)))
            Y = gen.uniform(-half, half, size=(m, p, n))
            log_vol = p * n * math.log(2.0 * half)
            lk = _batch_log_kernel_y(alpha, a, gamma, Y)
            with np.errstate(over="ignore"):
                vals = np.where(np.isneginf(lk), 0.0, np.exp(lk + log_vol))
        elif b == _kernel.GAMMA:
            sigma = math.sqrt(1.0 / (2.0 * a))
            Y = gen.normal(0.0, sigma, size=(m, p, n))
            # the Gaussian proposal cancels exp(-a tr W) exactly
            if gamma == 0.0:
                vals = np.full(m, (math.pi / a) ** (p * n / 2.0))
            else:
                det_w = np.linalg.det(Y @ np.swapaxes(Y, 1, 2))
                vals = (math.pi / a) ** (p * n / 2.0) * np.where(
                    det_w > 0.0, det_w, 0.0) ** gamma
        else:
            s = 1.0 / math.sqrt(a * (alpha - 1.0))
            Y = gen.standard_cauchy(size=(m, p, n)) * s
            log_q = np.sum(
                -np.log(math.pi * s) - np.log1p((Y / s) ** 2), axis=(1, 2)
            )
            lk = _batch_log_kernel_y(alpha, a, gamma, Y)
            with np.errstate(over="ignore"):
                vals = np.where(np.isneginf(lk), 0.0, np.exp(lk - log_q))
        total += float(vals.sum())
        total_sq += float((vals**2).sum())
        count += m
    mean = total / count
    var = max(total_sq / count - mean**2, 0.0)
    se = math.sqrt(var / count)
    return scale * mean, scale * se
