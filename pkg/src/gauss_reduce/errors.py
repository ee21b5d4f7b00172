"""Exception hierarchy shared by every module."""


class GaussReduceError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(GaussReduceError, ValueError):
    """Input violates a precondition (shape, symmetry, unitarity, index range)."""


class SingularInput(InvalidInput):
    """Matrix is numerically singular where an invertible one is required."""


class UnsupportedInput(GaussReduceError, ValueError):
    """Input is well formed but outside what the operation supports."""


class NumericalFailure(GaussReduceError, ArithmeticError):
    """A factorization did not reach its residual target.

    ``residual`` carries the achieved value so callers can report it.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual
