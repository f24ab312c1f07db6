"""Exception types shared across the package."""


class PPDError(Exception):
    """Base class for errors raised by ppdcone."""


class DomainError(PPDError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class RangeError(PPDError, ValueError):
    """An argument lies outside the numerical validity envelope."""


class UnsupportedOperation(PPDError, TypeError):
    """The operation is not available for this function representation."""


class SmoothnessError(UnsupportedOperation):
    """Differentiation order exceeds the smoothness of a piecewise profile.

    ``point`` is the first breakpoint where the next derivative jumps.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class PreconditionError(PPDError, ValueError):
    """A documented precondition of the operation does not hold."""


class NoSolution(PPDError, ValueError):
    """The requested system has no admissible solution."""


class ContourError(PPDError, RuntimeError):
    """Zero counting failed because zeros kept landing on the contour."""
