"""Exception and warning types raised across the package."""


class JCStarkError(Exception):
    """Base class for all package errors."""


class DomainError(JCStarkError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ValidationError(JCStarkError, ValueError):
    """Input data failed a consistency check."""


class SingularRotationError(DomainError):
    """The small-rotation parameter for some nearby level has a zero or negative denominator."""


class EmptySpectrumError(JCStarkError, ValueError):
    pass


class InvalidStateError(ValidationError):
    """A density matrix is not trace-one or not positive."""


class AliasingError(JCStarkError, ValueError):
    """The delay-time quadrature is too coarse for the requested frequencies."""


class ConvergenceError(JCStarkError, RuntimeError):
    """Time averaging failed to converge.

    ``frequencies`` holds the oscillation frequencies whose contributions
    were still changing when the window limit was reached.
    """

    def __init__(self, message, frequencies=()):
        super().__init__(message)
        self.frequencies = tuple(frequencies)


class ValidityWarning(UserWarning):
    """The small-rotation parameter of one or more nearby levels is not small."""


class ResolutionWarning(UserWarning):
    """The spectrum grid is too coarse to resolve the detector width."""
