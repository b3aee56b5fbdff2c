"""Transform kernels: classical trigonometric, unilateral and bilateral
fractional Bessel kernels, complex-measure kernels, general-weight plane
waves, and the bilateral normalization constant."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, FitError, ParityError, UsageError
from .specfun import _bessel_j_unchecked, _jcal_unchecked, gamma, recip_gamma_complex

__all__ = [
    "Variant",
    "Weight",
    "KernelSpec",
    "eval_kernel",
    "normalization_A",
    "envelope_exponent",
    "EnvelopeFit",
    "unilateral_factor",
    "bilateral_factor",
    "half_integer_n",
    "c_alpha",
    "s_alpha",
    "figure1_series",
]

_SQRT_2_PI = math.sqrt(2.0 / math.pi)


class Variant(str, enum.Enum):
    CLASSICAL_COS = "classical_cos"
    CLASSICAL_SIN = "classical_sin"
    CLASSICAL_EXP = "classical_exp"
    UNILATERAL_BESSEL = "unilateral"
    BILATERAL_BESSEL = "bilateral"
    BILATERAL_E = "bilateral_e"
    COMPLEX_UNILATERAL = "complex"
    GENERAL_WEIGHT = "general_weight"


AUTOMORPHISM = {
    Variant.CLASSICAL_COS, Variant.CLASSICAL_SIN, Variant.UNILATERAL_BESSEL,
    Variant.BILATERAL_BESSEL,
}


@dataclass(frozen=True)
class Weight:
    """One-axis positive weight handle.

    Attributes
    ----------
    fn : callable
        Vectorized weight on the real line (bilateral) or half-line.
    origin_power : float
        Exponent ``p`` of ``fn(x) ~ |x|^p`` at the origin (0 for weights that
        are smooth and positive there).
    name : str
    """

    fn: Callable
    origin_power: float = 0.0
    name: str = "weight"

    def __call__(self, x):
        return self.fn(x)

    @classmethod
    def power(cls, alpha: float) -> "Weight":
        g = gamma(alpha)
        return cls(lambda x: np.abs(x) ** (alpha - 1.0) / g, alpha - 1.0, f"v_{alpha:g}")

    @classmethod
    def constant(cls, c: float = 1.0) -> "Weight":
        return cls(lambda x: np.full(np.shape(x), float(c)), 0.0, f"const_{c:g}")


def half_integer_n(l: float) -> int:
    """Return n for l = n - 1/2 (n >= 0), else raise ParityError."""
    n = l + 0.5
    if abs(n - round(n)) > 1e-12 or round(n) < 0:
        raise ParityError(f"bilateral kernels need l = n - 1/2 with integer n >= 0, got l={l}")
    return int(round(n))


@dataclass(frozen=True)
class KernelSpec:
    """A member of the transform family.

    Parameters
    ----------
    variant : Variant
    l : float
        Order parameter (Bessel order for the Bessel variants).
    alpha : float
        Fractional charge of the kernel.
    A : complex
        Bilateral mixing constant (BilateralE only).
    omega : float
        Log-oscillation frequency (ComplexUnilateral only).
    v, w : Weight
        Position and momentum weights (GeneralWeight only).
    dim : int
    """

    variant: Variant
    l: float = 0.5
    alpha: float = 1.0
    A: complex = 1j
    omega: float = 0.0
    v: Weight | None = None
    w: Weight | None = None
    dim: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        var = self.variant
        if var in (Variant.UNILATERAL_BESSEL, Variant.COMPLEX_UNILATERAL) and not self.l > -1:
            raise DomainError(f"unilateral Bessel kernels need l > -1, got {self.l}")
        if var in (Variant.BILATERAL_BESSEL, Variant.BILATERAL_E):
            half_integer_n(self.l)
        if var is Variant.GENERAL_WEIGHT and (self.v is None or self.w is None):
            raise UsageError("general-weight kernels need both v and w")
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")

    @property
    def n(self) -> int:
        return half_integer_n(self.l)

    @property
    def bilateral(self) -> bool:
        return self.variant in (Variant.BILATERAL_BESSEL, Variant.BILATERAL_E,
                                Variant.CLASSICAL_EXP, Variant.GENERAL_WEIGHT)


def unilateral_factor(alpha: float, l: float, z):
    """Gamma(alpha) z^(1-alpha/2) J_l(z) for z >= 0, through the even factor."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("unilateral kernels need k, x >= 0")
    p = 1.0 - alpha / 2.0 + l
    with np.errstate(divide="ignore", invalid="ignore"):
        out = gamma(alpha) * z ** p * _jcal_unchecked(l, z)
    return out


def bilateral_factor(alpha: float, nu: float, z):
    """Gamma(alpha) |z|^((1-alpha)/2) z^(1/2) J_nu(z) for half-integer nu.

    Realized as ``|z|^((1-alpha)/2) z^(nu+1/2) jcal_nu(z)`` with an integer
    power, so the value is real with parity (-1)^(nu+1/2).
    """
    z = np.asarray(z, dtype=float)
    m = nu + 0.5
    if abs(m - round(m)) > 1e-12:
        raise ParityError("bilateral factor needs a half-integer order")
    m = int(round(m))
    with np.errstate(divide="ignore", invalid="ignore"):
        az = np.abs(z)
        out = gamma(alpha) * az ** ((1.0 - alpha) / 2.0) * np.power(z, m) * _jcal_unchecked(nu, z)
    return out


def _axis_value(spec: KernelSpec, k, x):
    var = spec.variant
    z = k * x
    if var is Variant.CLASSICAL_COS:
        return _SQRT_2_PI * np.cos(z)
    if var is Variant.CLASSICAL_SIN:
        return _SQRT_2_PI * np.sin(z)
    if var is Variant.CLASSICAL_EXP:
        return np.exp(1j * z)
    if var is Variant.UNILATERAL_BESSEL:
        if np.any(np.asarray(k) < 0) or np.any(np.asarray(x) < 0):
            raise DomainError("unilateral kernels need k, x >= 0")
        return unilateral_factor(spec.alpha, spec.l, z)
    if var is Variant.BILATERAL_BESSEL:
        return bilateral_factor(spec.alpha, spec.l, z)
    if var is Variant.BILATERAL_E:
        return 0.5 * (bilateral_factor(spec.alpha, -spec.l, z) + spec.A * bilateral_factor(spec.alpha, spec.l, z))
    if var is Variant.COMPLEX_UNILATERAL:
        if np.any(np.asarray(z) < 0):
            raise DomainError("unilateral kernels need k, x >= 0")
        s = complex(spec.alpha, spec.omega)
        with np.errstate(divide="ignore", invalid="ignore"):
            pw = np.exp((1.0 - s / 2.0) * np.log(z))
        return pw * _bessel_j_unchecked(spec.l, z) / recip_gamma_complex(s)
    if var is Variant.GENERAL_WEIGHT:
        return np.exp(1j * z) / np.sqrt(2.0 * math.pi * spec.w(k) * spec.v(x))
    raise UsageError(f"unknown variant {var}")


def eval_kernel(spec: KernelSpec, k, x):
    """Evaluate the kernel K(k, x).

    Parameters
    ----------
    spec : KernelSpec
    k, x : array_like
        Broadcastable arrays.  For ``spec.dim > 1`` the last axis holds the
        D coordinates and the value is the product of per-axis factors.

    Returns
    -------
    ndarray
        Real for real variants, complex for BilateralE, ClassicalExp,
        ComplexUnilateral and GeneralWeight.
    """
    k = np.asarray(k, dtype=float)
    x = np.asarray(x, dtype=float)
    if spec.dim == 1:
        out = _axis_value(spec, k, x)
    else:
        if k.ndim == 0 or x.ndim == 0 or k.shape[-1] != spec.dim or x.shape[-1] != spec.dim:
            raise DomainError(f"points need a trailing axis of length {spec.dim}")
        out = np.prod(_axis_value(spec, k, x), axis=-1)
    out = np.asarray(out)
    return out if out.ndim else out.item()


def _exp_i_pi(t: float) -> complex:
    """e^{i pi t}, exact when 2t is an integer."""
    r = math.fmod(t, 2.0)
    if r < 0:
        r += 2.0
    exact = {0.0: 1.0, 0.5: 1j, 1.0: -1.0, 1.5: -1j, 2.0: 1.0}
    if r in exact:
        return complex(exact[r])
    return complex(math.cos(math.pi * r), math.sin(math.pi * r))


def normalization_A(l: float, A: complex = 1j) -> complex:
    """Bilateral normalization [1 + e^{i pi(1+2l)} + |A|^2 (1 + e^{i pi(1-2l)})]/4."""
    a2 = abs(A) ** 2
    return (1.0 + _exp_i_pi(1.0 + 2.0 * l) + a2 * (1.0 + _exp_i_pi(1.0 - 2.0 * l))) / 4.0


def c_alpha(alpha: float, k, x):
    """The cosine-like eigenfunction (order -1/2 unilateral kernel)."""
    return unilateral_factor(alpha, -0.5, np.asarray(k) * np.asarray(x))


def s_alpha(alpha: float, k, x):
    """The sine-like eigenfunction (order +1/2 unilateral kernel)."""
    return unilateral_factor(alpha, 0.5, np.asarray(k) * np.asarray(x))


def figure1_series(alpha: float = 0.5, x=None, k: float = 1.0) -> dict:
    """Columns x, c_alpha, s_alpha, c_1, s_1 of the fractional cosine/sine
    kernels against the ordinary ones (x starts at the origin)."""
    x = np.linspace(0.0, 30.0, 601) if x is None else np.asarray(x, dtype=float)
    return {
        "x": x,
        "c_alpha": c_alpha(alpha, k, x),
        "s_alpha": s_alpha(alpha, k, x),
        "c_1": c_alpha(1.0, k, x),
        "s_1": s_alpha(1.0, k, x),
    }


class EnvelopeFit(NamedTuple):
    analytic: float
    fitted: float
    n_extrema: int
    stderr: float


def envelope_exponent(spec: KernelSpec, z_range=(5.0, 200.0), samples: int = 40000) -> EnvelopeFit:
    """Analytic and fitted power-law exponent of the kernel amplitude.

    The fit regresses log|c| at the successive local maxima of |c(1, x)|
    (refined by parabolic interpolation) on log x over `z_range`.
    """
    if spec.variant is not Variant.UNILATERAL_BESSEL or abs(abs(spec.l) - 0.5) > 1e-12:
        raise UsageError("envelope exponent is defined for the order +-1/2 unilateral kernels")
    analytic = (1.0 - spec.alpha) / 2.0
    z = np.linspace(z_range[0], z_range[1], samples)
    y = np.abs(np.asarray(eval_kernel(spec, 1.0, z), dtype=float))
    i = np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])) + 1
    if i.size < 8:
        raise FitError(f"only {i.size} extrema found; need at least 8")
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2 * y1 + y2
    off = np.where(denom != 0, 0.5 * (y0 - y2) / denom, 0.0)
    zp = z[i] + off * (z[1] - z[0])
    yp = y1 - 0.25 * (y0 - y2) * off
    A = np.vstack([np.log(zp), np.ones_like(zp)]).T
    coef, res, *_ = np.linalg.lstsq(A, np.log(yp), rcond=None)
    dof = max(1, zp.size - 2)
    resid = np.log(yp) - A @ coef
    cov = np.linalg.inv(A.T @ A) * (resid @ resid) / dof
    return EnvelopeFit(analytic, float(coef[0]), int(i.size), float(math.sqrt(cov[0, 0])))
