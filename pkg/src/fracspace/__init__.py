"""Numerical toolkit for fractional-space momentum transforms.

Submodules
----------
specfun     gamma, Bessel J, the even factor and Bessel zeros
measure     fractional, multi-fractional and log-oscillating weights
kernel      transform kernels and the bilateral normalization
quadrature  finite, oscillatory semi-infinite and regularized integrals
transform   forward/inverse transforms, round-trip and Parseval checks
operators   Laplacian family, first-order factor and their identities
crosscheck  multi-fractional and complex-measure obstruction checks
acceptance  the numbered acceptance criteria
extended    additional consistency checks run by the full suite
cli         command-line entry point
"""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DomainError,
    FitError,
    FracspaceError,
    ParityError,
    PoleError,
    UsageError,
)
from .reports import CheckReport

__all__ = [
    "__version__",
    "CheckReport",
    "ConvergenceError",
    "DomainError",
    "FitError",
    "FracspaceError",
    "ParityError",
    "PoleError",
    "UsageError",
]
