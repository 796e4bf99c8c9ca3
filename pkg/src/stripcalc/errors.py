"""Exception types raised by the numerical routines."""

__all__ = ["StripcalcError", "NonDecayingInput", "SupportViolation", "UnstableShift",
           "UnstableConjugation", "QuadratureDivergence", "BadBandIndex", "BadExponent",
           "BadRadius", "ZeroDrift", "DomainViolation", "Overflow"]


class StripcalcError(Exception):
    """Base class for all errors raised by stripcalc."""


class NonDecayingInput(StripcalcError):
    """Input does not decay at the grid boundary, so a periodised transform would alias."""


class SupportViolation(StripcalcError):
    """A Fourier-support precondition does not hold."""


class UnstableShift(StripcalcError):
    """A complex shift would amplify numerical noise beyond the configured guard."""


class UnstableConjugation(StripcalcError):
    """The character weight exceeds the dynamic-range guard on the support of the input."""


class QuadratureDivergence(StripcalcError):
    """A quadrature failed its convergence or tail estimate."""


class BadBandIndex(StripcalcError, ValueError):
    """Band index ``h`` outside the admissible range."""


class BadExponent(StripcalcError, ValueError):
    """Lebesgue exponent outside the admissible range."""


class BadRadius(StripcalcError, ValueError):
    """Ball radius outside the admissible range."""


class ZeroDrift(StripcalcError, ValueError):
    """A trivial character was supplied where a nontrivial one is required."""


class DomainViolation(StripcalcError, ValueError):
    """Requested strip exceeds the holomorphy domain declared for a multiplier."""


class Overflow(StripcalcError, OverflowError):
    """A value does not fit in double precision even after rescaling."""
