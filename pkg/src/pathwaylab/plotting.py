"""Figure rendering for analysis reports.

Figures are built on matplotlib's object-oriented API (no pyplot state, no
backend requirement), so the CLI can write PNG/PDF/SVG files headlessly.
"""

from __future__ import annotations

import math

import numpy as np
from matplotlib.figure import Figure

from .numerics import FitLine

__all__ = ["density_figure", "save_figure", "scaling_figure"]


def scaling_figure(points, fit: FitLine, kind: str = "dea") -> Figure:
    """Scatter of the per-window statistics with the fitted scaling line.

    ``kind='dea'`` plots S(t) on a log-t axis with the line A + delta ln t;
    ``kind='sda'`` plots D(t) on log-log axes with slope H.
    """
    ts = np.asarray([p[0] for p in points], dtype=float)
    ys = np.asarray([p[1] for p in points], dtype=float)
    fig = Figure(figsize=(7.0, 4.6))
    ax = fig.subplots()
    grid = np.geomspace(ts.min(), ts.max(), 200)
    if kind == "dea":
        ax.semilogx(ts, ys, "o", ms=4, color="#1f5fa8", label="S(t)")
        ax.semilogx(grid, fit.intercept + fit.slope * np.log(grid), "-",
                    color="#c0392b",
                    label=f"A + δ ln t   (δ = {fit.slope:.3f})")
        ax.set_ylabel("diffusion entropy S(t)")
    elif kind == "sda":
        ax.loglog(ts, ys, "o", ms=4, color="#1f5fa8", label="D(t)")
        ax.loglog(grid, np.exp(fit.intercept) * grid**fit.slope, "-",
                  color="#c0392b", label=f"slope H = {fit.slope:.3f}")
        ax.set_ylabel("displacement std D(t)")
    else:
        raise ValueError(f"unknown kind {kind!r}")
    ax.set_xlabel("window size t")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best")
    fig.suptitle(f"{kind.upper()} scaling fit  (r² = {fit.r_squared:.4f})")
    return fig


def density_figure(xs, ys, label: str = "pdf", log_y: bool = False) -> Figure:
    """Simple density curve used by the pdf report path."""
    fig = Figure(figsize=(7.0, 4.6))
    ax = fig.subplots()
    ax.plot(np.asarray(xs, float), np.asarray(ys, float), "-", color="#1f5fa8")
    if log_y:
        ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.set_ylabel(label)
    ax.grid(True, alpha=0.3)
    return fig


def save_figure(fig: Figure, path: str, dpi: int = 150) -> None:
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
