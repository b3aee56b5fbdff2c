"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: usage-type errors give 2, numerical
non-convergence gives 3.
"""


class FracspaceError(Exception):
    """Base class for all library errors."""


class DomainError(FracspaceError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. Gamma at a non-positive integer)."""


class UsageError(FracspaceError):
    """Incompatible combination of specs or a disallowed operation."""


class ConvergenceError(FracspaceError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message: str, *, partial=None):
        super().__init__(message)
        self.partial = partial


class FitError(ConvergenceError):
    """A fit could not be performed (too few data points)."""


class ParityError(DomainError):
    """Bilateral kernel order that is not a half-integer n - 1/2."""
