"""Exception hierarchy.  Library code raises; only the CLI maps to exit codes."""


class CasimirError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class NumericalError(CasimirError, ArithmeticError):
    """A numerical procedure failed its own correctness checks."""


class ConvergenceError(NumericalError):
    """A series, quadrature or truncation ladder hit its guard.

    ``partial`` carries whatever was computed before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SolverError(NumericalError):
    """The tridiagonal sweep produced a residual above tolerance."""


class DeterminantSignError(NumericalError):
    """A determinant that must be positive came out non-positive."""


class SpectralRadiusError(NumericalError):
    """A round-trip matrix has spectral radius >= 1."""
