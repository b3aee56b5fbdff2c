"""Grid realizations of the Laplacian family ``K_{alpha,l}``, the first-order
operator ``D_{alpha,l}`` and checks of their identities.

Per axis::

    K_{alpha,l} f = f'' - (1 - alpha)/x f' + ((2 - alpha)^2 - 4 l^2)/(4 x^2) f
    D_{alpha,l} f = f' + (l - 1 + alpha/2)/x f

``K_1 = K_{alpha, 1-alpha/2}`` has no centrifugal term, ``K_2 = K_{alpha,1/2}``
is the member that factorizes as ``D^2``.  Derivatives are central
differences on an analytic handle, Richardson-extrapolated in the step.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, UsageError
from .functions import CatalogFunction
from .kernel import bilateral_factor, half_integer_n, unilateral_factor
from .measure import power_weight
from .quadrature import QuadratureConfig, integrate_finite
from .reports import CheckReport

__all__ = [
    "OperatorKind",
    "OperatorSpec",
    "StencilConfig",
    "derivative",
    "apply",
    "apply_form",
    "eigenfunction",
    "eigen_residual",
    "factorization_gap",
    "ladder_check",
    "quadratic_form_gap",
    "antisymmetry_gap",
    "default_probes",
]


class OperatorKind(str, enum.Enum):
    KAL = "Kal"
    K1 = "K1"
    K2 = "K2"
    DAL = "Dal"


@dataclass(frozen=True)
class OperatorSpec:
    """One member of the operator family.

    Use :meth:`Kal`, :meth:`K1`, :meth:`K2` or :meth:`Dal`; the order of
    K1 and K2 is fixed by alpha.
    """

    kind: OperatorKind
    alpha: float
    l: float = 0.5
    dim: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", OperatorKind(self.kind))
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError("dimension must be a positive integer")
        if self.kind is OperatorKind.K1:
            object.__setattr__(self, "l", 1.0 - self.alpha / 2.0)
        elif self.kind is OperatorKind.K2:
            object.__setattr__(self, "l", 0.5)

    @classmethod
    def Kal(cls, alpha: float, l: float, dim: int = 1) -> "OperatorSpec":
        return cls(OperatorKind.KAL, alpha, l, dim)

    @classmethod
    def K1(cls, alpha: float, dim: int = 1) -> "OperatorSpec":
        return cls(OperatorKind.K1, alpha, dim=dim)

    @classmethod
    def K2(cls, alpha: float, dim: int = 1) -> "OperatorSpec":
        return cls(OperatorKind.K2, alpha, dim=dim)

    @classmethod
    def Dal(cls, alpha: float, l: float, dim: int = 1) -> "OperatorSpec":
        return cls(OperatorKind.DAL, alpha, l, dim)

    @property
    def second_order(self) -> bool:
        return self.kind is not OperatorKind.DAL

    @property
    def first_order_coeff(self) -> float:
        """c1 in ``c1/x * f'`` (second-order kinds)."""
        return -(1.0 - self.alpha)

    @property
    def zeroth_order_coeff(self) -> float:
        """c0 in ``c0/x^2 * f`` (second-order kinds)."""
        return ((2.0 - self.alpha) ** 2 - 4.0 * self.l ** 2) / 4.0

    @property
    def shift(self) -> float:
        """a in ``D f = f' + a/x f``."""
        return self.l - 1.0 + self.alpha / 2.0


@dataclass(frozen=True)
class StencilConfig:
    """Finite-difference settings.

    ``h`` is the base step; None uses ``min(h_max, |x|/10)`` per point, which
    keeps every stencil at least ten steps away from the origin.
    """

    h: float | None = None
    h_max: float = 0.05
    levels: int = 3
    check_smoothness: bool = True

    def __post_init__(self):
        if self.levels < 1:
            raise DomainError("need at least one extrapolation level")
        if self.h is not None and not self.h > 0:
            raise DomainError("step must be positive")

    def step(self, x: np.ndarray) -> np.ndarray:
        if self.h is not None:
            return np.full(np.shape(x), float(self.h))
        return np.minimum(self.h_max, np.abs(x) / 10.0)


def _richardson(rows: list) -> tuple[np.ndarray, np.ndarray]:
    """Eliminate h^2, h^4, ... from estimates at h, h/2, h/4, ...

    Returns the best value and the per-level correction sizes.
    """
    table = [np.asarray(r) for r in rows]
    corrections = []
    for m in range(1, len(table)):
        fac = 4.0 ** m
        new = [(fac * table[j + 1] - table[j]) / (fac - 1.0) for j in range(len(table) - 1)]
        corrections.append(np.abs(new[-1] - table[-1]))
        table = new
    return table[0], np.array(corrections)


def derivative(f: Callable, x, order: int = 1, cfg: StencilConfig | None = None, axis: int | None = None):
    """First or second derivative by Richardson-extrapolated central differences.

    Parameters
    ----------
    f : callable
        Vectorized handle.  For ``axis`` not None the points carry a
        trailing coordinate axis and the partial derivative along that
        coordinate is returned.
    x : array_like
    order : {1, 2}
    cfg : StencilConfig, optional

    Raises
    ------
    ConvergenceError
        If the extrapolation corrections stop decreasing, the sign of a
        non-smooth input.
    """
    cfg = cfg or StencilConfig()
    if order not in (1, 2):
        raise UsageError("only first and second derivatives are provided")
    x = np.asarray(x, dtype=float)
    coord = x if axis is None else x[..., axis]
    h0 = cfg.step(coord)
    if np.any(h0 <= 0):
        raise DomainError("stencil touches the origin")

    def shifted(d):
        if axis is None:
            return f(x + d)
        e = np.zeros(x.shape)
        e[..., axis] = d
        return f(x + e)

    f0 = f(x) if order == 2 else None
    rows = []
    for j in range(cfg.levels):
        h = h0 / 2.0 ** j
        fp, fm = shifted(h), shifted(-h)
        if order == 1:
            rows.append((fp - fm) / (2.0 * h))
        else:
            rows.append((fp - 2.0 * f0 + fm) / (h * h))
    val, corr = _richardson(rows)
    if cfg.check_smoothness and corr.shape[0] >= 2:
        scale = np.maximum(np.abs(val), 1.0) * 1e-9
        bad = (corr[-1] > corr[0]) & (corr[-1] > scale)
        if np.any(bad):
            raise ConvergenceError("derivative extrapolation failed to converge (non-smooth input?)")
    return val


def _as_points(op: OperatorSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if op.dim > 1 and (x.ndim == 0 or x.shape[-1] != op.dim):
        raise DomainError(f"points need a trailing axis of length {op.dim}")
    if np.any(x == 0):
        raise DomainError("operators are singular on the coordinate hyperplanes")
    return x


def _handle(f):
    if isinstance(f, CatalogFunction) or callable(f):
        return f
    raise UsageError("operators act on callables or catalog functions")


def apply(op: OperatorSpec, f, x, cfg: StencilConfig | None = None):
    """Apply the operator to ``f`` at the points ``x``.

    Returns a sum over axes of the per-axis expression; for ``dim > 1`` the
    last axis of ``x`` holds the coordinates.
    """
    cfg = cfg or StencilConfig()
    f = _handle(f)
    x = _as_points(op, x)
    axes = [None] if op.dim == 1 else list(range(op.dim))
    fx = f(x)
    out = np.zeros(np.shape(fx), dtype=np.result_type(fx, float))
    for ax in axes:
        xa = x if ax is None else x[..., ax]
        d1 = derivative(f, x, 1, cfg, ax)
        if op.second_order:
            d2 = derivative(f, x, 2, cfg, ax)
            out = out + d2 + op.first_order_coeff / xa * d1 + op.zeroth_order_coeff / xa ** 2 * fx
        else:
            out = out + d1 + op.shift / xa * fx
    return out


def apply_form(alpha: float, l: float, f, x, form: str = "explicit", cfg: StencilConfig | None = None):
    """``K_{alpha,l} f`` in D = 1 through one of three equivalent forms.

    ``explicit``
        ``f'' - (1-alpha)/x f' + c0/x^2 f``.
    ``sturm_liouville``
        ``(1/v) (v f')' + c0/x^2 f`` with ``v = |x|^(alpha-1)``.
    ``conjugated``
        ``v^(-1/2) [u'' - (l^2 - 1/4)/x^2 u]`` with ``u = v^(1/2) f``.
    """
    cfg = cfg or StencilConfig()
    x = np.asarray(x, dtype=float)
    op = OperatorSpec.Kal(alpha, l)
    if form == "explicit":
        return apply(op, f, x, cfg)

    def v(t):
        return np.abs(t) ** (alpha - 1.0)

    if form == "sturm_liouville":
        flux = lambda t: v(t) * derivative(f, t, 1, cfg)  # noqa: E731
        return derivative(flux, x, 1, cfg) / v(x) + op.zeroth_order_coeff / x ** 2 * f(x)
    if form == "conjugated":
        u = lambda t: np.sqrt(v(t)) * f(t)  # noqa: E731
        return (derivative(u, x, 2, cfg) - (l * l - 0.25) / x ** 2 * u(x)) / np.sqrt(v(x))
    raise UsageError(f"unknown form {form!r}")


def default_probes(lo: float = 0.5, hi: float = 10.0, n: int = 40) -> np.ndarray:
    return np.linspace(lo, hi, n)


def eigenfunction(alpha: float, order: float, k: float, bilateral: bool = False) -> Callable:
    """The kernel ``c_alpha^order(k, .)`` as a handle of x.

    Unilateral handles need ``order > -1``; bilateral ones take half-integer
    orders of either sign and accept negative x.
    """
    if bilateral:
        half_integer_n(abs(order))
        return lambda x: bilateral_factor(alpha, order, k * np.asarray(x, dtype=float))
    if not order > -1:
        raise DomainError(f"unilateral eigenfunctions need order > -1, got {order}")
    return lambda x: unilateral_factor(alpha, order, k * np.asarray(x, dtype=float))


def eigen_residual(alpha: float, l: float, k: float, sign: int = 1, x_probe=None,
                   cfg: StencilConfig | None = None, *, bilateral: bool = False,
                   tol: float = 1e-5) -> CheckReport:
    """Normalized residual of ``(K_{alpha,l} + k^2) c_alpha^{sign*l}``.

    The residual at each probe is divided by ``k^2 (|c(x)| + 0.01 max|c|)``
    so that zeros of the eigenfunction do not inflate it.
    """
    if sign not in (1, -1):
        raise UsageError("sign must be +1 or -1")
    if not k > 0:
        raise DomainError("k must be positive")
    x = default_probes() if x_probe is None else np.asarray(x_probe, dtype=float)
    c = eigenfunction(alpha, sign * l, k, bilateral)
    cx = c(x)
    res = apply(OperatorSpec.Kal(alpha, l), c, x, cfg) + k * k * cx
    denom = k * k * (np.abs(cx) + 0.01 * np.max(np.abs(cx)))
    rel = np.abs(res) / denom
    gap = float(np.max(rel))
    return CheckReport(
        "eigen", {"alpha": alpha, "l": l, "k": k, "sign": sign, "bilateral": bilateral},
        gap, 0.0, gap, tol, {"argmax": float(x[int(np.argmax(rel))]), "n_probes": int(x.size)},
    )


def factorization_gap(alpha: float, l: float, f, x_probe=None, cfg: StencilConfig | None = None,
                      *, tol: float = 1e-6) -> CheckReport:
    """``max |D(D f) - K f| / max |K f|`` over the probes, D and K of the
    same (alpha, l).  The first-order coefficients differ by (2l - 1)/x, so
    the gap vanishes only at l = 1/2."""
    x = default_probes() if x_probe is None else np.asarray(x_probe, dtype=float)
    D = OperatorSpec.Dal(alpha, l)
    Df = lambda t: apply(D, f, t, cfg)  # noqa: E731
    DDf = apply(D, Df, x, cfg)
    Kf = apply(OperatorSpec.Kal(alpha, l), f, x, cfg)
    scale = float(np.max(np.abs(Kf)))
    gap = float(np.max(np.abs(DDf - Kf))) / scale
    return CheckReport(
        "factorization", {"alpha": alpha, "l": l, "function": _fname(f)},
        gap, 0.0, gap, tol,
        {"scale": scale, "coefficient_mismatch": 2.0 * l - 1.0},
    )


def ladder_check(alpha: float, k: float, x_probe=None, cfg: StencilConfig | None = None,
                 *, tol: float = 1e-6) -> CheckReport:
    """``D c_alpha = -k s_alpha`` and ``D s_alpha = k c_alpha`` with
    ``D = D_{alpha,1/2}``; the gap is the larger relative deviation."""
    x = default_probes() if x_probe is None else np.asarray(x_probe, dtype=float)
    D = OperatorSpec.Dal(alpha, 0.5)
    c = eigenfunction(alpha, -0.5, k)
    s = eigenfunction(alpha, 0.5, k)
    cx, sx = c(x), s(x)
    g1 = float(np.max(np.abs(apply(D, c, x, cfg) + k * sx))) / (k * float(np.max(np.abs(sx))))
    g2 = float(np.max(np.abs(apply(D, s, x, cfg) - k * cx))) / (k * float(np.max(np.abs(cx))))
    gap = max(g1, g2)
    return CheckReport("ladder", {"alpha": alpha, "k": k}, gap, 0.0, gap, tol,
                       {"D_c": g1, "D_s": g2})


def _fname(f) -> str:
    return f.spec() if isinstance(f, CatalogFunction) else getattr(f, "__name__", "function")


def _boundary_power(alpha: float, *betas) -> float:
    return alpha - 1.0 + sum(betas)


def _half_line(integrand, lo, cutoff, qcfg, sigma):
    if lo > 0:
        return integrate_finite(integrand, lo, cutoff, qcfg, endpoint_power=None)
    return integrate_finite(integrand, 0.0, cutoff, qcfg, endpoint_power=sigma)


def _jacobi_exponent(s: float):
    if abs(s - round(s)) < 1e-12 and s >= 0:
        return None
    return float(s)


def quadratic_form_gap(alpha: float, l: float, f: CatalogFunction, cfg: QuadratureConfig | None = None,
                       stencil: StencilConfig | None = None, *, tol: float = 1e-6,
                       truncations: Sequence[float] = (1e-3, 1e-4, 1e-5)) -> CheckReport:
    """Integration-by-parts identity ``int v (D f)^2 = -int v f K f`` in D = 1.

    The gap is ``|I_DD + I_fK| / |I_DD|``.  The boundary term
    ``v f D f`` behaves like ``x^(alpha + 2 beta - 2)`` at the origin
    (``beta`` the origin power of f), so it vanishes exactly when
    ``beta > 1 - alpha/2``.  Then both integrals run from 0.  Otherwise they
    diverge at the origin; they are truncated at each entry of
    `truncations` and the gap at the smallest truncation is reported,
    together with the boundary term there.
    """
    qcfg = cfg or QuadratureConfig(rel_tol=1e-11, abs_tol=1e-14)
    if not isinstance(f, CatalogFunction):
        raise UsageError("quadratic_form_gap needs a catalog function")
    beta = f.origin_power
    D = OperatorSpec.Dal(alpha, l)
    K = OperatorSpec.Kal(alpha, l)
    cutoff = float(f.cutoff)

    def v(t):
        return power_weight(alpha, t)

    def i_dd(t):
        d = apply(D, f, t, stencil)
        return v(t) * d * d

    def i_fk(t):
        return v(t) * f(t) * apply(K, f, t, stencil)

    if beta is None:
        bpow = math.inf
    else:
        # D f ~ (beta + a) x^(beta-1); when that cancels the next term of the
        # cofactor leads (x^2 for a function of definite parity)
        dpow = beta - 1.0
        if abs(beta + D.shift) < 1e-12:
            dpow += 2.0 if f.parity in ("even", "odd") else 1.0
        bpow = _boundary_power(alpha, beta, dpow)
    diag = {"boundary_power": bpow, "origin_power": beta, "condition": 1.0 - alpha / 2.0}
    if bpow > 0:
        sigma = _jacobi_exponent(bpow - 1.0) if beta is not None else None
        a = _half_line(i_dd, 0.0, cutoff, qcfg, sigma)
        b = _half_line(i_fk, 0.0, cutoff, qcfg, sigma)
        gap = abs(a.value + b.value) / abs(a.value)
        diag.update(I_DD=a.value, I_fK=b.value, converged=a.converged and b.converged)
        return CheckReport("quadratic_form", {"alpha": alpha, "l": l, "function": f.spec()},
                           gap, 0.0, gap, tol, diag)
    trunc = []
    for lo in truncations:
        a = _half_line(i_dd, lo, cutoff, qcfg, None)
        b = _half_line(i_fk, lo, cutoff, qcfg, None)
        bt = float(v(lo) * f(lo) * apply(D, f, np.array([lo]), stencil)[0])
        trunc.append({"lower": lo, "I_DD": a.value, "I_fK": b.value, "boundary": bt,
                      "gap": abs(a.value + b.value) / abs(a.value)})
    gap = trunc[-1]["gap"]
    diag.update(truncated=trunc, divergent_at_origin=True)
    return CheckReport("quadratic_form", {"alpha": alpha, "l": l, "function": f.spec()},
                       gap, 0.0, gap, tol, diag)


def antisymmetry_gap(alpha: float, f: CatalogFunction, g: CatalogFunction,
                     cfg: QuadratureConfig | None = None, stencil: StencilConfig | None = None,
                     *, tol: float = 1e-6) -> CheckReport:
    """``|int v g D f + int v (D g) f| / (|int v g D f| + |int v (D g) f|)``
    with ``D = D_{alpha,1/2}`` on the half-line."""
    qcfg = cfg or QuadratureConfig(rel_tol=1e-11, abs_tol=1e-14)
    D = OperatorSpec.Dal(alpha, 0.5)
    cutoff = float(min(f.cutoff, g.cutoff))

    def v(t):
        return power_weight(alpha, t)

    bf, bg = f.origin_power or 0.0, g.origin_power or 0.0
    bpow = _boundary_power(alpha, bf, bg)
    if bpow <= 0:
        raise DomainError("boundary term v f g does not vanish at the origin for these functions")
    sigma = _jacobi_exponent(alpha - 1.0 + bf + bg - 1.0)
    a = _half_line(lambda t: v(t) * g(t) * apply(D, f, t, stencil), 0.0, cutoff, qcfg, sigma)
    b = _half_line(lambda t: v(t) * f(t) * apply(D, g, t, stencil), 0.0, cutoff, qcfg, sigma)
    gap = abs(a.value + b.value) / (abs(a.value) + abs(b.value))
    return CheckReport("antisymmetry", {"alpha": alpha, "f": f.spec(), "g": g.spec()},
                       gap, 0.0, gap, tol, {"gDf": a.value, "fDg": b.value})
