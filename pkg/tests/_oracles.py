"""Independent oracles shared by the test modules.

Everything here deliberately avoids the closed-form code paths it is used
to check: CDFs come from cumulative quadrature of the pdf, tail indices
from the Hill estimator, and parameter grids are enumerated explicitly.
"""

import numpy as np

from pathwaylab.errors import NonNormalizableError
from pathwaylab.numerics import integrate_1d
from pathwaylab.scalar import ScalarPathwayParams

ALPHA_GRID = (0.2, 0.5, 0.9, 1.0, 1.2, 1.5)
A_GRID = (0.5, 1.0, 2.0)
GAMMA_GRID = (0.0, 1.0, 2.5)
DELTA_GRID = (0.5, 1.0, 2.0)


def scalar_param_grid():
    """Every normalizable combination of the standard test grid."""
    out = []
    for alpha in ALPHA_GRID:
        for a in A_GRID:
            for gamma in GAMMA_GRID:
                for delta in DELTA_GRID:
                    p = ScalarPathwayParams(alpha, a, gamma, delta)
                    if alpha > 1 and 1.0 / (alpha - 1.0) - (gamma + 1.0) / delta <= 0:
                        continue
                    out.append(p)
    return out


def quadrature_cdf(pdf_fn, lo, hi, n_grid=513, anchor=None):
    """Piecewise cumulative quadrature CDF; independent of any sampler.

    The evaluation grid mixes linear and geometric spacing so that both
    densities concentrated near the origin (heavy tails push ``hi`` far
    out) and densities that vanish at a finite support edge are resolved.
    ``anchor`` should be a typical data scale (say the sample median); the
    geometric part then starts six decades below it.
    """
    span = hi - lo
    scale = span if anchor is None else min(max(float(anchor), span * 1e-12), span)
    linear = np.linspace(lo, hi, n_grid)
    geom = lo + np.geomspace(scale * 1e-6, span, n_grid)
    grid = np.unique(np.concatenate([linear, geom]))
    cum = [0.0]
    for a, b in zip(grid[:-1], grid[1:]):
        cum.append(cum[-1] + integrate_1d(pdf_fn, float(a), float(b), tol=1e-9))
    cum = np.minimum(np.asarray(cum), 1.0)

    def cdf(x):
        return np.interp(x, grid, cum)

    return cdf


def hill_density_exponent(values, top_frac=0.01):
    """Density tail exponent mu from the Hill estimator on the top fraction.

    Hill estimates the survival exponent mu - 1; add one to get the density
    exponent.
    """
    a = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
    k = max(int(a.size * top_frac), 10)
    tail, xk = a[:k], a[k]
    return 1.0 + 1.0 / float(np.mean(np.log(tail) - np.log(xk)))


def is_normalizable(alpha, a, gamma, delta):
    if alpha > 1 and 1.0 / (alpha - 1.0) - (gamma + 1.0) / delta <= 0:
        return False
    return True
