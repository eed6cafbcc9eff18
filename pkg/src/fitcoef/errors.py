"""Exception types shared across the library."""


class FitcoefError(Exception):
    """Base class for computational errors raised by this package."""


class DegenerateSample(FitcoefError):
    """Sample has zero dispersion where positive dispersion is required."""


class DimensionMismatch(FitcoefError):
    """Evaluation point dimension does not match the sample dimension."""


class LengthMismatch(FitcoefError):
    """Paired vectors have different lengths."""


class SupportViolation(FitcoefError):
    """Data fall outside the support of the requested parametric family."""


class NonConvergence(FitcoefError):
    """Iterative solver exhausted its iteration budget."""


class Indistinguishable(FitcoefError):
    """Parametric and nonparametric values coincide at every data point,
    so the mixture weight is not identified."""


class InvalidParameter(FitcoefError):
    """Parameter vector violates the family's constraints."""


class NonpositiveDensity(FitcoefError):
    """Nonparametric per-point values must be strictly positive."""


class DomainError(FitcoefError):
    """Argument outside the open domain of the function."""


class ParseError(FitcoefError):
    """Input file could not be parsed; carries 1-based location."""

    def __init__(self, message: str, line: int, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column
