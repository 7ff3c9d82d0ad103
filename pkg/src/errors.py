"""
Exception hierarchy. Every domain failure raised by the package derives from
GnpweError; the CLI maps ExprParseError to a usage error (exit 2) and all others
to exit 1.
"""


class GnpweError(Exception):
    """Base class for all domain errors."""


class ArithmeticCapacityError(GnpweError, OverflowError):
    """Exponent or rational size exceeds the configured width."""


class ParameterDivisionError(GnpweError, ZeroDivisionError):
    """A parameter that must be inverted was given the value zero."""


class IncompleteBindingError(GnpweError):
    """A symbol occurring in a polynomial has no supplied value."""


class InvalidDimensionError(GnpweError, ValueError):
    """Unsupported number of transverse variables."""


class JetDomainError(GnpweError, ValueError):
    """An expression has content outside the allowed variables (e.g. jets in a characteristic)."""


class EmptySystemError(GnpweError):
    """The ansatz has no monomials, so there is no system to solve."""


class StencilError(GnpweError):
    """Grid too coarse or invalid stencil request."""


class SolverDivergenceError(GnpweError):
    """The x-marching solver blew up."""


class GaugeError(GnpweError):
    """Input data violates the zero t-mean gauge."""


class ExprParseError(GnpweError):
    """Lexical or syntax error in an expression, with the offending position."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position
