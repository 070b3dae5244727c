"""Exceptions raised by openmap operations.

Semidecisions that merely ran out of budget do not raise: they return a ``NotYet`` value.
"""


class OpenMapError(Exception):
    """Base class for all openmap errors"""


class DivisionByZero(OpenMapError, ZeroDivisionError):
    """A quotient denominator is exactly 0 at a rational point."""


class DomainBreach(OpenMapError):
    """A quotient denominator interval contains 0."""


class DimensionMismatch(OpenMapError, ValueError):
    pass


class ArityMismatch(OpenMapError, ValueError):
    pass


class ParseError(OpenMapError, ValueError):
    pass


class NotCertified(OpenMapError):
    """A certificate could not be produced at any achievable precision."""


class BudgetExceeded(OpenMapError):
    pass


class LimitsExceeded(OpenMapError):
    """Quantifier elimination refused: too many variables, too high a degree or too many projection factors."""


class UnsupportedMethod(OpenMapError):
    pass
