"""Exception types shared across the library."""


class PathwayError(Exception):
    """Base class for all library-specific failures."""


class DomainError(PathwayError, ValueError):
    """An argument lies outside an operation's mathematical domain."""


class NonNormalizableError(DomainError):
    """Parameters for which the density kernel has no finite integral."""


class DivergenceError(PathwayError, ArithmeticError):
    """A requested integral or moment does not converge."""


class AccuracyError(PathwayError):
    """Quadrature failed to reach the requested tolerance.

    The best available estimate is kept in :attr:`estimate` so callers can
    still inspect it.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class FactorizationError(DomainError):
    """Matrix factorization failed; input is not symmetric positive definite."""


class DegenerateFitError(DomainError):
    """Least-squares fit is underdetermined (fewer than two points, or zero
    spread in the abscissae)."""


class DegenerateDataError(DomainError):
    """Data carry no usable variation for the requested estimate."""


class DegenerateSeriesError(DegenerateDataError):
    """Time series has zero dispersion at some window size."""


class SeriesParseError(PathwayError, ValueError):
    """A series file could not be parsed.

    ``line_number`` is 1-based and refers to the first offending line.
    """

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number
