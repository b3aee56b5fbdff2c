"""Fractional measure weights, log-oscillating (complex) weights, dimensions
and discrete-scale-invariance diagnostics."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, UsageError
from .reports import CheckReport
from .specfun import gamma, recip_gamma_complex

__all__ = [
    "Support",
    "MeasureKind",
    "MeasureSpec",
    "DsiScale",
    "AlphaRangeWarning",
    "power_weight",
    "weight",
    "complex_weight",
    "log_oscillating_weight",
    "sin2_terms",
    "dsi_check",
    "hausdorff_dimension",
    "critical_charge",
    "scaling_dimension",
    "positivity_scan",
]


class AlphaRangeWarning(UserWarning):
    """Fractional charge outside the preferred range [1/2, 1]."""


class Support(str, enum.Enum):
    UNILATERAL = "unilateral"
    BILATERAL = "bilateral"


class MeasureKind(str, enum.Enum):
    SIMPLE = "simple"
    MULTIFRACTIONAL = "multifractional"
    COMPLEX = "complex"


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"fractional charge must be positive, got {alpha}")
    if not 0.5 <= alpha <= 1.0:
        warnings.warn(f"alpha={alpha} outside the preferred range [1/2, 1]", AlphaRangeWarning, stacklevel=3)
    return alpha


@dataclass(frozen=True)
class MeasureSpec:
    """Geometry of a fractional space.

    Use the constructors :meth:`simple`, :meth:`multifractional` and
    :meth:`complex` rather than filling the fields by hand.
    """

    support: Support = Support.UNILATERAL
    dim: int = 1
    alpha: float = 1.0
    kind: MeasureKind = MeasureKind.SIMPLE
    components: tuple = ()      # ((g, alpha_i), ...) for MultiFractional
    terms: tuple = ()           # ((omega, C), ...) for Complex

    def __post_init__(self):
        object.__setattr__(self, "support", Support(self.support))
        object.__setattr__(self, "kind", MeasureKind(self.kind))
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError("dimension must be a positive integer")
        if self.kind is MeasureKind.MULTIFRACTIONAL:
            if self.dim != 1:
                raise UsageError("multi-fractional measures are provided in D=1 only")
            if not self.components:
                raise DomainError("multi-fractional measure needs components")
            comps = tuple((float(g), float(a)) for g, a in self.components)
            if any(g < 0 for g, _ in comps):
                raise DomainError("multi-fractional couplings must be non-negative")
            for _, a in comps:
                if not a > 0:
                    raise DomainError("component charges must be positive")
            object.__setattr__(self, "components", comps)
        if self.kind is MeasureKind.COMPLEX:
            if self.support is not Support.UNILATERAL or self.dim != 1:
                raise UsageError("complex measures are provided for unilateral D=1 only")
            object.__setattr__(self, "terms", tuple((float(w), complex(c)) for w, c in self.terms))

    @classmethod
    def simple(cls, alpha: float, support="unilateral", dim: int = 1) -> "MeasureSpec":
        return cls(Support(support), dim, _check_alpha(alpha))

    @classmethod
    def multifractional(cls, components: Sequence, support="unilateral") -> "MeasureSpec":
        comps = tuple((float(g), _check_alpha(a)) for g, a in components)
        return cls(Support(support), 1, float("nan"), MeasureKind.MULTIFRACTIONAL, comps)

    @classmethod
    def complex(cls, alpha: float, terms: Sequence) -> "MeasureSpec":
        return cls(Support.UNILATERAL, 1, _check_alpha(alpha), MeasureKind.COMPLEX, (), tuple(terms))

    @property
    def bilateral(self) -> bool:
        return self.support is Support.BILATERAL


@dataclass(frozen=True)
class DsiScale:
    """Discrete-scale-invariance ratio ``lambda = exp(2 pi / omega_star)``."""

    omega_star: float

    def __post_init__(self):
        if not self.omega_star > 0:
            raise DomainError("omega_star must be positive")

    @property
    def lam(self) -> float:
        return math.exp(2.0 * math.pi / self.omega_star)


def power_weight(alpha: float, x, bilateral: bool = False):
    """One-axis weight ``|x|^(alpha-1)/Gamma(alpha)`` (no domain checks)."""
    xa = np.abs(x) if bilateral else np.asarray(x, dtype=float)
    return xa ** (alpha - 1.0) / gamma(alpha)


def _axis_check(spec: MeasureSpec, xa: np.ndarray) -> None:
    if spec.support is Support.UNILATERAL and np.any(xa < 0):
        raise DomainError("negative coordinate in a unilateral space")
    if np.any(xa == 0):
        raise DomainError("point evaluation at a coordinate hyperplane x=0")


def weight(spec: MeasureSpec, x):
    """Measure weight v(x).

    Parameters
    ----------
    spec : MeasureSpec
    x : array_like
        Points; for ``dim > 1`` the last axis holds the coordinates.

    Returns
    -------
    ndarray or float
        Real for Simple and MultiFractional kinds, complex for Complex.
    """
    xa = np.asarray(x, dtype=float)
    if spec.dim > 1:
        if xa.shape[-1] != spec.dim:
            raise DomainError(f"points must have a trailing axis of length {spec.dim}")
    _axis_check(spec, xa)
    bil = spec.bilateral
    if spec.kind is MeasureKind.SIMPLE:
        w = power_weight(spec.alpha, xa, bil)
        out = np.prod(w, axis=-1) if spec.dim > 1 else w
    elif spec.kind is MeasureKind.MULTIFRACTIONAL:
        out = sum(g * power_weight(a, xa, bil) for g, a in spec.components)
    else:
        out = log_oscillating_weight(spec.alpha, spec.terms, xa)
    out = np.asarray(out)
    return out if out.ndim else out.item()


def log_oscillating_weight(alpha: float, terms: Sequence, x):
    """General log-oscillating weight ``sum_w C_w x^(alpha+i w-1)/Gamma(alpha+i w)``.

    `terms` is a sequence of ``(omega, C_omega)`` pairs; include
    ``(0, C_0)`` for the non-oscillating part.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("complex weights are defined for x > 0")
    lx = np.log(xa)
    out = np.zeros(xa.shape, dtype=complex)
    for w, c in terms:
        s = complex(alpha, w)
        out = out + complex(c) * np.exp((s - 1.0) * lx) * recip_gamma_complex(s)
    return out


def sin2_terms(alpha: float, omega_star: float) -> tuple:
    """Terms of the weight ``x^(alpha-1) sin^2(omega_star ln sqrt(x))``."""
    a, w = float(alpha), float(omega_star)
    return (
        (0.0, gamma(a) / 2.0),
        (w, -1.0 / (4.0 * recip_gamma_complex(complex(a, w)))),
        (-w, -1.0 / (4.0 * recip_gamma_complex(complex(a, -w)))),
    )


def complex_weight(alpha: float, omega_star: float, C: float, x):
    """Real log-oscillating weight with one frequency pair and real coupling.

    ``x^(alpha-1) [1/Gamma(alpha) + a cos(w ln x) + b sin(w ln x)]`` with
    ``a = 2C Re[1/Gamma(alpha+iw)]`` and ``b = 2C Im[1/Gamma(alpha+iw)]``.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("complex weights are defined for x > 0")
    a, b = _ab(alpha, omega_star, C)
    lx = np.log(xa)
    ph = omega_star * lx
    out = xa ** (alpha - 1.0) * (1.0 / gamma(alpha) + a * np.cos(ph) + b * np.sin(ph))
    return out if out.ndim else float(out)


def _ab(alpha, omega_star, C):
    r = recip_gamma_complex(complex(alpha, omega_star))
    return 2.0 * C * r.real, 2.0 * C * r.imag


def dsi_check(alpha: float, omega_star: float, C: float, xs, *, lam: float | None = None,
              ns: Sequence[int] = (-2, -1, 0, 1, 2), tol: float = 1e-12) -> CheckReport:
    """Verify ``v(lam^n x) lam^(n(1-alpha)) = v(x)`` for the complex weight.

    The gap is the largest relative deviation, measured against the bound
    ``x^(alpha-1) (1/Gamma(alpha) + |a| + |b|)`` of the bracket, so that
    zeros of the weight do not inflate it.  Passing `lam` overrides the
    scale ratio (used for negative controls).
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs <= 0):
        raise DomainError("sample points must be positive")
    lam_true = DsiScale(omega_star).lam
    lam = lam_true if lam is None else float(lam)
    a, b = _ab(alpha, omega_star, C)
    bound = xs ** (alpha - 1.0) * (1.0 / gamma(alpha) + abs(a) + abs(b))
    base = complex_weight(alpha, omega_star, C, xs)
    gaps = {}
    for n in ns:
        lhs = complex_weight(alpha, omega_star, C, lam ** n * xs) * lam ** (n * (1.0 - alpha))
        gaps[int(n)] = float(np.max(np.abs(lhs - base) / bound))
    gap = max(gaps.values())
    return CheckReport(
        "dsi",
        {"alpha": alpha, "omega_star": omega_star, "C": C, "lambda": lam, "ns": list(ns)},
        gap, 0.0, gap, tol,
        {"gap_per_n": gaps, "lambda_exact": lam_true, "xs": xs},
    )


def hausdorff_dimension(spec: MeasureSpec) -> float:
    """d_H = D alpha for a simple measure."""
    if spec.kind is not MeasureKind.SIMPLE:
        raise UsageError("the Hausdorff dimension is scale dependent for this measure kind")
    return spec.dim * spec.alpha


class CriticalCharge(NamedTuple):
    alpha_star: float
    scaling_dimension: float | None


def scaling_dimension(D: int, alpha: float, order: float = 2.0) -> float:
    """Scaling dimension [phi] = (D alpha - order)/2 of a scalar field."""
    return (D * alpha - order) / 2.0


def critical_charge(D: int, laplacian_order: float = 2.0, alpha: float | None = None) -> CriticalCharge:
    """Critical fractional charge ``alpha* = order/D``.

    If `alpha` is given the scaling dimension at that charge is returned as
    well (it vanishes at ``alpha = alpha*``).
    """
    if int(D) != D or D < 1:
        raise DomainError("D must be a positive integer")
    if not laplacian_order > 0:
        raise DomainError("Laplacian order must be positive")
    a_star = laplacian_order / D
    sd = None if alpha is None else scaling_dimension(D, alpha, laplacian_order)
    return CriticalCharge(a_star, sd)


def positivity_scan(spec_or_fn, xs=None, tol: float = 0.0) -> CheckReport:
    """Scan a weight for negative values on log-spaced samples.

    `spec_or_fn` is a :class:`MeasureSpec` or a callable weight.  The gap is
    ``max(0, -min v)``; a complex weight is reduced to its real part after
    checking that the imaginary part is negligible.
    """
    if xs is None:
        xs = np.logspace(-6, 6, 2401)
    xs = np.asarray(xs, dtype=float)
    if isinstance(spec_or_fn, MeasureSpec):
        v = np.asarray(weight(spec_or_fn, xs))
        name = spec_or_fn.kind.value
    else:
        v = np.asarray(spec_or_fn(xs))
        name = getattr(spec_or_fn, "__name__", "weight")
    imag = float(np.max(np.abs(np.imag(v)))) if np.iscomplexobj(v) else 0.0
    vr = np.real(v)
    vmin = float(np.min(vr))
    i = int(np.argmin(vr))
    return CheckReport(
        "positivity", {"weight": name, "n_samples": xs.size},
        vmin, 0.0, max(0.0, -vmin), tol,
        {"argmin": float(xs[i]), "max_imag": imag},
    )
