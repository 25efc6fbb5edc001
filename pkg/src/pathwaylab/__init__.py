"""Pathway density families with entropy measures and diffusion scaling analysis.

Subpackages by capability:

- :mod:`pathwaylab.numerics`      shared special functions, quadrature, RNG
- :mod:`pathwaylab.scalar`        scalar family on x > 0, entropies, MLE
- :mod:`pathwaylab.multivariate`  elliptically contoured p-variate family
- :mod:`pathwaylab.matrix`        rectangular matrix-variate kernel and constants
- :mod:`pathwaylab.scaling`       DEA / SDA estimators and synthetic generators
- :mod:`pathwaylab.cli`           JSON/CSV command-line front end
"""

from .errors import (
    AccuracyError,
    DegenerateDataError,
    DegenerateFitError,
    DegenerateSeriesError,
    DivergenceError,
    DomainError,
    FactorizationError,
    NonNormalizableError,
    PathwayError,
    SeriesParseError,
)
from .matrix import MatrixPathwayParams
from .multivariate import EllipticalPathwayParams
from .numerics import FitLine, RandomStream
from .scalar import ScalarPathwayParams
from .scaling import DeaConfig, DeaResult, SdaResult

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "DeaConfig",
    "DeaResult",
    "DegenerateDataError",
    "DegenerateFitError",
    "DegenerateSeriesError",
    "DivergenceError",
    "DomainError",
    "EllipticalPathwayParams",
    "FactorizationError",
    "FitLine",
    "MatrixPathwayParams",
    "NonNormalizableError",
    "PathwayError",
    "RandomStream",
    "ScalarPathwayParams",
    "SdaResult",
    "SeriesParseError",
    "__version__",
]
