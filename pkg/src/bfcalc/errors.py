"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class BFCalcError(Exception):
    """Base class for all errors raised by bfcalc."""


class DivergentIntegral(BFCalcError):
    """An integral was requested against a measure with infinite mass."""


class NonIntegrable(BFCalcError):
    """The integrand is not integrable under the declared endpoint exponents."""


class ToleranceNotMet(BFCalcError):
    """Adaptive refinement exhausted its budget before reaching the tolerance."""

    def __init__(self, message: str, estimate=None, error: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class PreconditionFailed(BFCalcError):
    """An operation was called outside its admissible parameter range."""


class Violation(BFCalcError):
    """A caller-asserted pointwise inequality failed on the spot-check grid."""


class UndecidedDivergence(BFCalcError):
    """Neither convergence nor a divergence certificate could be established."""


class MatrixOverflow(BFCalcError):
    """A matrix exponential argument is beyond the supported norm budget."""


class Unsupported(BFCalcError):
    """The requested computation path does not apply to the given inputs."""


class UnsupportedPsi(Unsupported):
    """No subordinator construction is available for this Bernstein function."""


class PathDisagreement(BFCalcError):
    """Two independent computation paths disagree beyond the allowed bound."""


class SpecParseError(BFCalcError, ValueError):
    """A function, measure or generator spec string could not be parsed."""


class ConfigError(BFCalcError, ValueError):
    """A run configuration is malformed or violates its invariants."""
