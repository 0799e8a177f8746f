"""Exception and warning types shared by all modules."""


class CasimirError(Exception):
    """Base class for errors raised by this package."""


class DomainError(CasimirError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(CasimirError, ValueError):
    """Evaluation point outside the range covered by tabulated data."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class InvalidAmplitudeError(CasimirError, ValueError):
    """Reflection amplitudes that would make the cavity denominator non-positive."""


class NumericalFailure(CasimirError, RuntimeError):
    """Quadrature or linear algebra failed to reach a usable result."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ConvergenceError(NumericalFailure):
    """An iterative or extrapolated procedure did not converge."""


class FitError(CasimirError, ValueError):
    """Degenerate least-squares problem."""


class ConfigError(CasimirError, ValueError):
    """Invalid run configuration; the message names the offending key."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class TruncationWarning(UserWarning):
    """A summation or expansion hit its cap before reaching the tolerance."""
