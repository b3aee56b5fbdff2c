"""Obstructions to invertibility: multi-fractional cross terms, the
orthogonality condition on the orders, coupling constraints, log-oscillation
phases on the momentum lattice and bilateral parity cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError
from .functions import Bump
from .kernel import KernelSpec, Variant, bilateral_factor, half_integer_n
from .measure import MeasureSpec, power_weight
from .quadrature import IntegralResult, Oscillator, QuadratureConfig, damped_bessel_ladder
from .reports import CheckReport
from .specfun import gamma
from .transform import delta_sift

__all__ = [
    "CrossTermSpec",
    "Orthogonality",
    "orthogonality_condition",
    "cross_term",
    "diagonal_scale",
    "kasner_check",
    "LatticePhase",
    "lattice_condition",
    "lattice_point",
    "bilateral_cross_parity",
]

_INT_TOL = 1e-12


@dataclass(frozen=True)
class CrossTermSpec:
    """Parameters of the cross term between an (alpha, l) and an
    (alpha', l') component at the points x, x'."""

    alpha: float
    alpha_prime: float
    l: float
    l_prime: float
    x: float = 1.0
    x_prime: float = 2.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.alpha_prime > 0):
            raise DomainError("charges must be positive")
        if not (self.x > 0 and self.x_prime > 0):
            raise DomainError("points must be positive")
        if not (self.l > -1 and self.l_prime > -1):
            raise DomainError("Bessel orders must exceed -1")
        if not self.convergence_exponent > -1:
            raise DomainError("cross term diverges at k = 0: need l + l' + (alpha - alpha')/2 + 1 > 0")

    @property
    def power(self) -> float:
        """Exponent of k in the cross-term integrand."""
        return (self.alpha - self.alpha_prime) / 2.0 + 1.0

    @property
    def convergence_exponent(self) -> float:
        return self.power + self.l + self.l_prime

    def swapped(self) -> "CrossTermSpec":
        return CrossTermSpec(self.alpha_prime, self.alpha, self.l_prime, self.l, self.x_prime, self.x)


class Orthogonality(NamedTuple):
    holds: bool
    n: int | None
    branch: str | None


def _nonneg_even_multiple(e: float) -> int | None:
    """n if e = -2n with n a non-negative integer (to 1e-12), else None."""
    n = -e / 2.0
    r = round(n)
    if abs(n - r) <= _INT_TOL and r >= 0:
        return int(r)
    return None


def orthogonality_condition(spec: CrossTermSpec) -> Orthogonality:
    """Condition on the orders under which the cross term can vanish.

    First branch ``l - l' - (alpha - alpha')/2 = -2n``, second branch
    ``l' - l - (alpha - alpha')/2 = -2n``, n a non-negative integer.  These
    are the zeros of the ``1/Gamma`` factor of the Weber-Schafheitlin
    integral, so each branch forces vanishing on one side of x = x' only.
    """
    da = (spec.alpha - spec.alpha_prime) / 2.0
    n1 = _nonneg_even_multiple(spec.l - spec.l_prime - da)
    if n1 is not None:
        return Orthogonality(True, n1, "first")
    n2 = _nonneg_even_multiple(spec.l_prime - spec.l - da)
    if n2 is not None:
        return Orthogonality(True, n2, "second")
    return Orthogonality(False, None, None)


def _cross_envelope(spec: CrossTermSpec):
    pref = gamma(spec.alpha_prime) * spec.x ** (1.0 - spec.alpha / 2.0) * spec.x_prime ** (1.0 - spec.alpha_prime / 2.0)
    p = spec.power
    return lambda k: pref * k ** p


def diagonal_scale(alpha: float, l: float, x: float, cfg: QuadratureConfig | None = None,
                   width: float | None = None) -> float:
    """Size of the diagonal term: the regularized delta at (alpha, l)
    smeared over a narrow unit-height bump centred at x."""
    w = min(0.25, x / 2.0) if width is None else width
    m = MeasureSpec.simple(alpha) if 0.5 <= alpha <= 1 else MeasureSpec("unilateral", 1, alpha)
    r = delta_sift(m, KernelSpec(Variant.UNILATERAL_BESSEL, l=l, alpha=alpha), Bump(x, w), x, cfg)
    return abs(float(np.real(r.value)))


def cross_term(spec: CrossTermSpec, cfg: QuadratureConfig | None = None, *,
               scale: float | None = None) -> IntegralResult:
    """Regularized off-diagonal cross term

    ``I(x, x') = Gamma(alpha') x^(1-alpha/2) x'^(1-alpha'/2)
    int_0^inf k^((alpha-alpha')/2 + 1) J_l(kx) J_l'(kx') dk``,

    i.e. ``int drho_alpha(k) c_alpha^l(k, x) c_alpha'^l'(k, x')``.  The trace
    carries the diagonal `scale` and the dimensionless ``ratio``.
    """
    cfg = cfg or QuadratureConfig()
    if spec.x == spec.x_prime:
        raise DomainError("the cross term is evaluated off the diagonal (x != x')")
    res = damped_bessel_ladder(
        _cross_envelope(spec), Oscillator((spec.l, spec.l_prime), (spec.x, spec.x_prime)), cfg,
        endpoint_power=spec.convergence_exponent, envelope_scale=lambda t: max(0.25, 0.25 * t),
    )
    if scale is None:
        scale = diagonal_scale(spec.alpha, spec.l, spec.x, cfg)
    res.trace["scale"] = scale
    res.trace["ratio"] = abs(res.value) / scale if math.isfinite(abs(res.value)) else math.inf
    res.trace["condition"] = orthogonality_condition(spec)._asdict()
    return res


def kasner_check(couplings: Sequence[float], *, tol: float = 1e-12) -> CheckReport:
    """Both coupling sums must equal one: ``sum g = 1`` and ``sum g^2 = 1``.

    The gap is the larger deviation; the pairwise sum ``sum_{i<j} g_i g_j``
    (zero whenever both hold) and the presence of a sign flip are reported.
    """
    g = [float(c) for c in couplings]
    if not g:
        raise DomainError("need at least one coupling")
    s1 = math.fsum(g)
    s2 = math.fsum(c * c for c in g)
    pair = math.fsum(g[i] * g[j] for i in range(len(g)) for j in range(i + 1, len(g)))
    gap = max(abs(s1 - 1.0), abs(s2 - 1.0))
    flip = any(c < 0 for c in g) and any(c > 0 for c in g)
    return CheckReport(
        "kasner", {"couplings": g}, {"sum": s1, "sum_squares": s2}, {"sum": 1.0, "sum_squares": 1.0},
        gap, tol, {"pairwise_sum": pair, "sign_flip": flip},
    )


class LatticePhase(NamedTuple):
    trivial: bool
    phase: complex


def _multiple(omega: float, omega_star: float) -> int:
    m = omega / omega_star
    r = round(m)
    if abs(m - r) > _INT_TOL * max(1.0, abs(m)):
        raise DomainError(f"frequency {omega} is not a multiple of omega_star={omega_star}")
    return int(r)


def lattice_condition(omega_star: float, omega: float, omega_prime: float, k: float,
                      *, tol: float = 1e-12) -> LatticePhase:
    """Phase ``exp(i (omega - omega') ln(k) / 2)`` left by a pair of
    log-oscillation frequencies; trivial iff it equals 1 within `tol`."""
    if not omega_star > 0:
        raise DomainError("omega_star must be positive")
    if not k > 0:
        raise DomainError("k must be positive")
    m = _multiple(omega, omega_star) - _multiple(omega_prime, omega_star)
    # reduce the angle exactly in units of omega_star to keep lattice points exact
    theta = 0.5 * m * omega_star * math.log(k)
    phase = complex(math.cos(theta), math.sin(theta))
    return LatticePhase(bool(abs(phase - 1.0) <= tol), phase)


def lattice_point(n: int, omega_star: float) -> float:
    """``k_n = exp(4 pi n / omega_star)``."""
    return math.exp(4.0 * math.pi * n / omega_star)


def bilateral_cross_parity(alpha: float, n: int, x: float, x_prime: float,
                           cfg: QuadratureConfig | None = None, *, tol: float = 1e-8) -> CheckReport:
    """``int_R drho_alpha(k) c^{-l}(k, x) c^{l}(k, x')`` with l = n - 1/2.

    The two factors have opposite parity in k, so the integrand is odd.
    Both half-lines are evaluated on the same damped rule and extrapolated;
    the gap is ``|total| / |positive half|``.
    """
    cfg = cfg or QuadratureConfig()
    l = n - 0.5
    half_integer_n(l)
    if x == 0 or x_prime == 0:
        raise DomainError("points must be non-zero")

    def half(sign):
        def integrand(k):
            kk = sign * k
            return (power_weight(alpha, kk, True) * bilateral_factor(alpha, -l, kk * x)
                    * bilateral_factor(alpha, l, kk * x_prime))
        return damped_bessel_ladder(
            None, Oscillator((l,), (max(abs(x), abs(x_prime)),)), cfg, integrand=integrand,
            endpoint_power=None, envelope_scale=lambda t: max(0.25, 0.25 * t))

    pos, neg = half(1.0), half(-1.0)
    total = pos.value + neg.value
    scale = abs(pos.value)
    gap = abs(total) / scale if scale > 0 else abs(total)
    return CheckReport(
        "bilateral_parity", {"alpha": alpha, "n": n, "x": x, "x_prime": x_prime},
        total, 0.0, gap, tol,
        {"positive_half": pos.value, "negative_half": neg.value, "converged": pos.converged and neg.converged},
    )
