"""Integration engines.

* :func:`integrate_finite` -- vectorized adaptive Gauss-Kronrod (G10/K21)
  with a Gauss-Jacobi first panel for algebraic endpoint singularities.
* :func:`integrate_bessel_semiinfinite` -- semi-infinite integrals with
  Bessel-type oscillation: partition at zeros of the oscillator, plain
  summation of the structured part, iterated averaging of the tail.
* :func:`integrate_regularized` -- Gaussian damping ladder with polynomial
  extrapolation to zero damping, for distributional integrands.

All integrands are vectorized callables ``f(t: ndarray) -> ndarray``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError, UsageError
from .specfun import _bessel_j_unchecked, _zeros_unchecked

__all__ = [
    "QuadratureConfig",
    "IntegralResult",
    "Strategy",
    "Oscillator",
    "integrate_finite",
    "integrate_bessel_semiinfinite",
    "integrate_regularized",
    "damped_bessel_ladder",
    "neville_at_zero",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and strategy knobs shared by all engines."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_panels: int = 20000
    zero_partition_terms: int = 40
    acceleration_order: int = 10
    regularization_ladder: tuple = (1e-2, 3e-3, 1e-3, 3e-4, 1e-4)
    k_max: float = 1e4
    max_extensions: int = 4

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")
        lad = tuple(float(e) for e in self.regularization_ladder)
        if any(e <= 0 for e in lad) or any(b >= a for a, b in zip(lad, lad[1:])):
            raise DomainError("regularization ladder must be positive and strictly decreasing")
        if len(lad) < 3:
            raise DomainError("the regularization ladder needs at least three rungs")
        object.__setattr__(self, "regularization_ladder", lad)
        if self.zero_partition_terms <= self.acceleration_order + 2:
            raise DomainError("zero_partition_terms must exceed acceleration_order + 2")

    def with_(self, **kw) -> "QuadratureConfig":
        return replace(self, **kw)


class Strategy(str, enum.Enum):
    FINITE = "finite"
    ZERO_PARTITION = "zero_partition"
    ACCELERATED = "accelerated"
    REGULARIZED = "regularized"


@dataclass
class IntegralResult:
    """Outcome of an integration.

    ``converged`` implies ``error_estimate <= max(rel_tol*|value|, abs_tol)``
    for the configuration that produced it.
    """

    value: complex | float
    error_estimate: float
    strategy: Strategy
    converged: bool
    trace: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        v = self.value
        val = {"re": float(np.real(v)), "im": float(np.imag(v))} if np.iscomplexobj(v) else float(v)
        return {
            "value": val,
            "error_estimate": float(self.error_estimate),
            "strategy": self.strategy.value,
            "converged": bool(self.converged),
            "trace": _jsonable(self.trace),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


# ---------------------------------------------------------------------------
# Gauss-Kronrod 10/21 (QUADPACK qk21 constants)

_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067366220, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
# full symmetric node/weight vectors on [-1, 1]
GK_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[:-1][::-1]])
GK_WK = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[:-1][::-1]])
GK_WG = np.zeros(21)
_gidx = np.array([1, 3, 5, 7, 9])
GK_WG[_gidx] = _WG
GK_WG[20 - _gidx] = _WG
_EPS = np.finfo(float).eps


def gk21(f: Callable, a: np.ndarray, b: np.ndarray):
    """Apply the 21-point Kronrod rule to each panel [a_i, b_i].

    Returns
    -------
    value, error : ndarray
        Kronrod estimates and QUADPACK-style error estimates per panel.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    t = c[:, None] + h[:, None] * GK_NODES[None, :]
    y = np.asarray(f(t))
    if y.shape != t.shape:
        y = np.broadcast_to(y, t.shape)
    return gk21_from_values(y, h)


def gk21_from_values(y: np.ndarray, h: np.ndarray):
    """Kronrod values and error estimates from samples at the GK21 nodes."""
    k = (y @ GK_WK) * h
    g = (y @ GK_WG) * h
    mean = k / np.where(h == 0, 1.0, 2.0 * h)
    resasc = (np.abs(y - mean[:, None]) @ GK_WK) * np.abs(h)
    resabs = (np.abs(y) @ GK_WK) * np.abs(h)
    diff = np.abs(k - g)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        ratio = np.minimum(1.0, (200.0 * diff / np.where(resasc == 0, 1, resasc)) ** 1.5)
        err = np.where((resasc != 0) & (diff != 0), resasc * ratio, diff)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    if not np.all(np.isfinite(k)):
        err = np.where(np.isfinite(k), err, np.inf)
    return k, err


@lru_cache(maxsize=256)
def _jacobi_rule(n: int, sigma: float):
    x, w = roots_jacobi(n, 0.0, sigma)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _jacobi_panel(f: Callable, a: float, b: float, sigma: float, n: int):
    """Integrate f over [a, b] assuming f ~ (t-a)^sigma * smooth."""
    x, w = _jacobi_rule(n, sigma)
    L = b - a
    t = a + 0.5 * L * (1.0 + x)
    y = np.asarray(f(t[None, :]))[0]
    g = y / (t - a) ** sigma
    return (0.5 * L) ** (sigma + 1.0) * np.sum(w * g)


def _first_panel(f, a, b, sigma, tol):
    """Gauss-Jacobi on the singular first panel with bisection toward `a`.

    Returns (value, error, list of regular panels still to integrate).
    """
    rest = []
    total = 0.0
    err_total = 0.0
    lo, hi = a, b
    for _ in range(60):
        v1 = _jacobi_panel(f, lo, hi, sigma, 20)
        v2 = _jacobi_panel(f, lo, hi, sigma, 40)
        e = abs(v2 - v1)
        if e <= tol or hi - lo <= 1e-14 * max(1.0, abs(a)):
            return total + v2, err_total + e, rest
        mid = lo + 0.5 * (hi - lo)
        rest.append((mid, hi))
        hi = mid
        tol *= 0.5
    return total + v2, err_total + e, rest


def _estimate_power(f, a, b) -> float | None:
    """Estimate sigma in f ~ (t-a)^sigma near `a` from three probes."""
    L = b - a
    t = a + L * np.array([1e-9, 1e-7, 1e-5])
    y = np.abs(np.asarray(f(t[None, :]))[0])
    if not np.all(np.isfinite(y)) or np.any(y == 0):
        return None
    s1 = math.log(y[1] / y[0]) / math.log(100.0)
    s2 = math.log(y[2] / y[1]) / math.log(100.0)
    if abs(s1 - s2) > 0.05 or s1 <= -1.0:
        return None
    if abs(s1) < 0.02:
        return None
    return s1


def _adaptive(f, a, b, cfg: QuadratureConfig, offset=0.0, offset_err=0.0, max_panels=None):
    """Globally adaptive GK21 over an initial list of panels."""
    max_panels = max_panels or cfg.max_panels
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0:
        return offset, offset_err, True, 0
    vals, errs = gk21(f, a, b)
    npan = a.size
    stall = 0
    best = np.inf
    while True:
        total = offset + np.sum(vals)
        err = offset_err + float(np.sum(errs))
        target = max(cfg.rel_tol * abs(total), cfg.abs_tol)
        if err <= target:
            return total, err, True, npan
        if a.size >= max_panels or stall >= 6:
            return total, err, False, npan
        if err < 0.5 * best:
            best = err
            stall = 0
        else:
            stall += 1
        share = target / (2.0 * a.size)
        sel = errs > share
        sel[np.argmax(errs)] = True
        # never split below roundoff resolution
        sel &= (b - a) > 64 * _EPS * np.maximum(np.abs(a), np.abs(b))
        if not np.any(sel):
            return total, err, False, npan
        idx = np.flatnonzero(sel)
        if a.size + idx.size > max_panels:
            idx = idx[np.argsort(errs[idx])[::-1][: max(1, max_panels - a.size)]]
        am, bm = a[idx], b[idx]
        mid = 0.5 * (am + bm)
        ca = np.concatenate([am, mid])
        cb = np.concatenate([mid, bm])
        cv, ce = gk21(f, ca, cb)
        npan += ca.size
        keep = np.ones(a.size, dtype=bool)
        keep[idx] = False
        a = np.concatenate([a[keep], ca])
        b = np.concatenate([b[keep], cb])
        vals = np.concatenate([vals[keep], cv])
        errs = np.concatenate([errs[keep], ce])
        order = np.argsort(a, kind="stable")
        a, b, vals, errs = a[order], b[order], vals[order], errs[order]


def integrate_finite(
    f: Callable,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    *,
    endpoint_power: float | None | str = "auto",
    breakpoints: Sequence[float] = (),
) -> IntegralResult:
    """Adaptive integral of `f` over the finite interval [a, b].

    Parameters
    ----------
    f : callable
        Vectorized integrand.  Only the open interior is sampled.
    a, b : float
        Limits, ``a < b``.
    cfg : QuadratureConfig, optional
    endpoint_power : float, None or "auto"
        Exponent ``sigma`` of an algebraic endpoint behaviour
        ``f ~ (t-a)^sigma`` at the lower limit.  When given, the first panel
        uses Gauss-Jacobi nodes with that weight.  ``"auto"`` estimates it
        from probe values and falls back to plain Kronrod panels.
    breakpoints : sequence of float
        Interior points where the integrand changes character.
    """
    cfg = cfg or QuadratureConfig()
    if not a < b:
        raise DomainError("integrate_finite requires a < b")
    edges = np.unique(np.concatenate([[a, b], [p for p in breakpoints if a < p < b]]))
    return _integrate_edges(f, edges, cfg, endpoint_power)


def _integrate_edges(f, edges, cfg, endpoint_power, max_panels=None) -> IntegralResult:
    a0, a1 = float(edges[0]), float(edges[1])
    sigma = endpoint_power
    if sigma == "auto":
        sigma = _estimate_power(f, a0, a1)
    offset = 0.0
    off_err = 0.0
    pa = list(edges[:-1])
    pb = list(edges[1:])
    if sigma is not None and sigma != 0.0:
        if sigma <= -1.0:
            raise DomainError("endpoint power must exceed -1 for integrability")
        # tolerance for the singular panel: a fraction of the crude total
        crude = _jacobi_panel(f, a0, a1, float(sigma), 20)
        tol = 0.1 * max(cfg.rel_tol * abs(crude), cfg.abs_tol)
        offset, off_err, rest = _first_panel(f, a0, a1, float(sigma), tol)
        pa = [r[0] for r in rest] + pa[1:]
        pb = [r[1] for r in rest] + pb[1:]
    val, err, ok, npan = _adaptive(f, np.array(pa), np.array(pb), cfg, offset, off_err, max_panels)
    return IntegralResult(val, err, Strategy.FINITE, ok, {"panels": npan, "endpoint_power": sigma})


# ---------------------------------------------------------------------------
# Bessel-oscillatory semi-infinite integrals


@dataclass(frozen=True)
class Oscillator:
    """Product of Bessel factors ``prod_i J_{orders[i]}(arguments[i] * t)``.

    An empty oscillator describes a non-oscillatory integrand.
    """

    orders: tuple = ()
    arguments: tuple = ()

    def __post_init__(self):
        if len(self.orders) != len(self.arguments):
            raise DomainError("orders and arguments must have equal length")
        if any(a <= 0 for a in self.arguments):
            raise DomainError("oscillator arguments must be positive")

    def __call__(self, t: np.ndarray) -> np.ndarray:
        out = np.ones_like(t)
        for nu, a in zip(self.orders, self.arguments):
            out = out * _bessel_j_unchecked(nu, a * t)
        return out

    def partition_zeros(self, count: int) -> np.ndarray:
        """Zeros of the fastest factor, in the integration variable."""
        i = int(np.argmax(self.arguments))
        nu = float(self.orders[i])
        while nu <= -1.0:
            nu += 2.0  # same asymptotic zero spacing and phase
        return _zeros_unchecked(nu, count) / self.arguments[i]


def _euler_average(partial: np.ndarray, order: int):
    s = np.asarray(partial)
    history = [s[-1]]
    for _ in range(order):
        s = 0.5 * (s[:-1] + s[1:])
        history.append(s[-1])
    est = s[-1]
    err = max(abs(s[-1] - s[-2]), abs(history[-1] - history[-2]))
    return est, err


def _grade(edges: np.ndarray, scale: Callable[[float], float]) -> np.ndarray:
    """Insert points so that no panel is wider than the local envelope scale."""
    out = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        t = lo
        while True:
            h = scale(max(t, 1e-300))
            if t + h >= hi - 1e-12 * hi:
                break
            t = t + h
            out.append(t)
        out.append(hi)
    return np.array(out)


def _scale_callable(envelope_scale):
    if envelope_scale is None:
        return lambda t: max(0.5, 0.25 * t)
    if callable(envelope_scale):
        return envelope_scale
    h0 = float(envelope_scale)
    return lambda t: h0


def integrate_bessel_semiinfinite(
    envelope: Callable | None,
    oscillator: Oscillator,
    cfg: QuadratureConfig | None = None,
    *,
    integrand: Callable | None = None,
    endpoint_power: float | None | str = "auto",
    breakpoints: Sequence[float] = (),
    envelope_scale=None,
    cutoff: float = math.inf,
    accelerate: bool = True,
) -> IntegralResult:
    """Integrate ``envelope(t) * oscillator(t)`` over [0, inf).

    Parameters
    ----------
    envelope : callable or None
        Smooth, algebraic-at-zero factor.  Ignored when `integrand` is given.
    oscillator : Oscillator
        Bessel factors; the partition uses zeros of the fastest one.
    integrand : callable, optional
        Full integrand, if the oscillation is already built in (the
        oscillator then only drives the partition).
    endpoint_power : float, None or "auto"
        Algebraic exponent of the integrand at t = 0.
    breakpoints : sequence of float
        Points where the envelope has structure; acceleration starts beyond
        the last of them.
    envelope_scale : float or callable, optional
        Length over which the envelope changes appreciably (possibly
        t-dependent).  Default ``max(0.5, t/4)``.
    cutoff : float
        The envelope is negligible beyond this point.
    accelerate : bool
        Apply iterated averaging to the tail; if False, `cutoff` must be
        finite and all panels up to it are summed.

    Returns
    -------
    IntegralResult
        ``converged`` is False if the accelerated tail stagnates, which
        signals a distributional integrand.
    """
    cfg = cfg or QuadratureConfig()
    if integrand is None:
        if envelope is None:
            raise UsageError("need an envelope or a full integrand")

        def integrand(t):
            return envelope(t) * oscillator(t)

    scale = _scale_callable(envelope_scale)
    bps = sorted(float(p) for p in breakpoints if p > 0)
    t_special = bps[-1] if bps else 0.0

    if not oscillator.orders:
        return _nonoscillatory(integrand, cfg, bps, scale, cutoff, endpoint_power)

    nz = 256
    zeros = oscillator.partition_zeros(nz)
    # first zero beyond the structured region whose panel is narrow enough
    while True:
        widths = np.diff(zeros)
        ok = (zeros[:-1] >= t_special) & (widths <= np.array([scale(z) for z in zeros[:-1]]))
        if np.any(ok) or zeros[-1] > cutoff:
            break
        nz *= 4
        zeros = oscillator.partition_zeros(nz)
    m0 = int(np.argmax(ok)) if np.any(ok) else len(zeros) - 1
    t0 = float(zeros[m0])

    if cutoff <= t0:
        edges = np.unique(np.concatenate([[0.0], bps, zeros[zeros < cutoff], [cutoff]]))
        edges = edges[edges <= cutoff]
        edges = _grade(edges, scale)
        res = _integrate_edges(integrand, edges, cfg, endpoint_power)
        res.strategy = Strategy.ZERO_PARTITION
        return res

    head_edges = np.unique(np.concatenate([[0.0], [p for p in bps if p < t0], zeros[: m0 + 1]]))
    head_edges = _grade(head_edges, scale)

    # tail panels: plain summation up to a finite cutoff when affordable
    n_to_cut = None
    if math.isfinite(cutoff):
        while zeros[-1] < cutoff and len(zeros) < 200000:
            zeros = oscillator.partition_zeros(2 * len(zeros))
        n_to_cut = int(np.searchsorted(zeros, cutoff)) - m0
        if not accelerate or n_to_cut <= 4 * cfg.zero_partition_terms:
            tail_edges = np.concatenate([zeros[m0: m0 + n_to_cut + 1], [cutoff]])
            tail_edges = np.unique(tail_edges[tail_edges <= cutoff])
            edges = np.unique(np.concatenate([head_edges, tail_edges]))
            res = _integrate_edges(integrand, edges, cfg, endpoint_power,
                                   max_panels=max(cfg.max_panels, 4 * len(edges)))
            res.strategy = Strategy.ZERO_PARTITION
            res.trace["tail_panels"] = int(n_to_cut)
            return res
    elif not accelerate:
        raise UsageError("unaccelerated summation needs a finite cutoff")

    head = _integrate_edges(integrand, head_edges, cfg, endpoint_power)
    M = cfg.zero_partition_terms
    done = 0
    panel_vals = np.zeros(0, dtype=complex)
    panel_err = 0.0
    est = err = None
    for ext in range(cfg.max_extensions + 1):
        while len(zeros) < m0 + M + 2:
            zeros = oscillator.partition_zeros(2 * len(zeros))
        pa = zeros[m0 + done: m0 + M]
        pb = zeros[m0 + done + 1: m0 + M + 1]
        pv, pe = _panel_integrals(integrand, pa, pb, cfg, abs(head.value))
        panel_vals = np.concatenate([panel_vals, pv])
        panel_err += float(np.sum(pe))
        done = M
        partial = head.value + np.cumsum(panel_vals)
        est, acc_err = _euler_average(partial, cfg.acceleration_order)
        err = acc_err + head.error_estimate + panel_err
        target = max(cfg.rel_tol * abs(est), cfg.abs_tol)
        if err <= target:
            break
        M *= 2
    value = est if np.iscomplexobj(panel_vals) and np.any(np.imag(panel_vals) != 0) else float(np.real(est))
    target = max(cfg.rel_tol * abs(value), cfg.abs_tol)
    conv = bool(err <= target and head.converged)
    return IntegralResult(value, float(err), Strategy.ACCELERATED, conv,
                          {"head_panels": head.trace.get("panels"), "tail_panels": int(done),
                           "t_accel_start": t0})


def _panel_integrals(f, pa, pb, cfg, scale_hint):
    """Per-panel integrals (not summed) to an absolute tolerance."""
    pa = np.asarray(pa, dtype=float)
    pb = np.asarray(pb, dtype=float)
    vals, errs = gk21(f, pa, pb)
    vals = vals.astype(complex)
    ref = max(scale_hint, float(np.max(np.abs(vals))) if vals.size else 0.0)
    tol = max(cfg.rel_tol * ref, cfg.abs_tol) / (4.0 * max(1, pa.size))
    bad = np.flatnonzero(errs > tol)
    for i in bad:
        sub = _adaptive(f, np.array([pa[i]]), np.array([pb[i]]),
                        cfg.with_(rel_tol=1e-15, abs_tol=tol), max_panels=400)
        vals[i], errs[i] = sub[0], sub[1]
    return vals, errs


def _nonoscillatory(integrand, cfg, bps, scale, cutoff, endpoint_power):
    """[0, inf) for a non-oscillatory integrand via t = u/(1-u) on the tail."""
    T = max([1.0] + bps)
    if math.isfinite(cutoff) and cutoff <= T:
        edges = _grade(np.unique(np.concatenate([[0.0], [p for p in bps if p < cutoff], [cutoff]])), scale)
        res = _integrate_edges(integrand, edges, cfg, endpoint_power)
        return res
    edges = _grade(np.unique(np.concatenate([[0.0], bps, [T]])), scale)
    head = _integrate_edges(integrand, edges, cfg, endpoint_power)
    if math.isfinite(cutoff):
        tail_edges = _grade(np.array([T, cutoff]), scale)
        tail = _integrate_edges(integrand, tail_edges, cfg, None)
    else:
        def mapped(u):
            t = T / u
            return integrand(t) * T / (u * u)
        tail = _integrate_edges(mapped, np.array([0.0, 0.25, 0.5, 1.0]), cfg, "auto")
    val = head.value + tail.value
    err = head.error_estimate + tail.error_estimate
    conv = head.converged and tail.converged
    return IntegralResult(val, err, Strategy.FINITE, conv, {"split": T})


# ---------------------------------------------------------------------------
# regularized (distributional) integrals


def neville_at_zero(x: Sequence[float], y: Sequence) -> complex:
    """Value at 0 of the interpolating polynomial through (x_i, y_i)."""
    x = np.asarray(x, dtype=float)
    p = np.array(y, dtype=complex)
    n = len(x)
    for m in range(1, n):
        p[: n - m] = (x[m:] * p[: n - m] - x[: n - m] * p[1: n - m + 1]) / (x[m:] - x[: n - m])
    return p[0]


def _ladder_diverges(eps: np.ndarray, vals: np.ndarray) -> bool:
    mags = np.abs(vals)
    if np.all(mags == 0):
        return False
    if mags[-1] < 10.0 * max(mags[0], 1e-300):
        return False
    slope = np.polyfit(np.log(eps), np.log(np.maximum(mags, 1e-300)), 1)[0]
    growing = np.all(np.diff(mags) > 0)
    return bool(growing and slope < -0.2)


def integrate_regularized(
    evaluate: Callable[[float], IntegralResult | complex | float],
    cfg: QuadratureConfig | None = None,
    *,
    ladder: Sequence[float] | None = None,
) -> IntegralResult:
    """Evaluate a damped integral along the regularization ladder and
    extrapolate polynomially to zero damping.

    Parameters
    ----------
    evaluate : callable
        ``evaluate(eps)`` returns the integral with damping ``exp(-eps k^2)``
        inserted, either as a number or an :class:`IntegralResult`.
    cfg : QuadratureConfig, optional
    ladder : sequence of float, optional
        Overrides ``cfg.regularization_ladder``.

    Returns
    -------
    IntegralResult
        Strategy ``REGULARIZED``; the trace holds the ladder values and the
        successive extrapolants.  A ladder growing without trend is reported
        with ``converged=False`` and a NaN value.
    """
    cfg = cfg or QuadratureConfig()
    eps = np.asarray(ladder if ladder is not None else cfg.regularization_ladder, dtype=float)
    if eps.size < 3:
        raise DomainError("the regularization ladder needs at least three rungs")
    vals = []
    errs = []
    inner_ok = True
    for e in eps:
        r = evaluate(float(e))
        if isinstance(r, IntegralResult):
            vals.append(r.value)
            errs.append(r.error_estimate)
            inner_ok &= r.converged
        else:
            vals.append(r)
            errs.append(0.0)
    vals_a = np.array(vals, dtype=complex)
    trace = {"eps": eps.tolist(), "values": vals_a, "inner_errors": errs}
    if _ladder_diverges(eps, vals_a):
        trace["diverged"] = True
        return IntegralResult(math.nan, math.inf, Strategy.REGULARIZED, False, trace)
    extrap = [neville_at_zero(eps[j:], vals_a[j:]) for j in range(len(eps) - 1)]
    # extrap[0] uses all rungs, extrap[1] drops the largest eps
    value = extrap[0]
    err = abs(extrap[0] - extrap[1]) + max(errs) * 4.0
    trace["extrapolants"] = extrap
    if np.all(vals_a.imag == 0):
        value = float(value.real)
    target = max(cfg.rel_tol * abs(value), cfg.abs_tol)
    return IntegralResult(value, float(err), Strategy.REGULARIZED, bool(err <= target and inner_ok), trace)


def damped_bessel_ladder(
    envelope: Callable,
    oscillator: Oscillator,
    cfg: QuadratureConfig | None = None,
    *,
    endpoint_power: float | None = None,
    ladder: Sequence[float] | None = None,
    envelope_scale=None,
    breakpoints: Sequence[float] = (),
    cutoff: float = math.inf,
    decades: float = 40.0,
    integrand: Callable | None = None,
) -> IntegralResult:
    """Regularized ``int_0^inf envelope(k) exp(-eps k^2) oscillator(k) dk``.

    The undamped integrand is sampled once on a fixed composite rule that
    resolves every panel up to the damping cutoff of the smallest eps and is
    then reweighted for each rung of the ladder.  Accuracy of the fixed rule
    is checked by the embedded Gauss estimate and refined by uniform
    bisection when needed.  A full `integrand` may replace
    ``envelope * oscillator``; the oscillator then only drives the partition.
    """
    cfg = cfg or QuadratureConfig()
    eps = np.asarray(ladder if ladder is not None else cfg.regularization_ladder, dtype=float)
    if eps.size < 3:
        raise DomainError("the regularization ladder needs at least three rungs")
    K = min(math.sqrt(decades * math.log(10.0) / eps.min()), cutoff)
    scale = _scale_callable(envelope_scale)
    n = 64
    zeros = oscillator.partition_zeros(n)
    while zeros[-1] < K:
        n *= 2
        zeros = oscillator.partition_zeros(n)
    edges = np.unique(np.concatenate([[0.0], [p for p in breakpoints if 0 < p < K], zeros[zeros < K], [K]]))
    edges = _grade(edges, scale)

    if integrand is None:
        def integrand(t):
            return envelope(t) * oscillator(t)

    # singular first panel handled once (damping ~ 1 there)
    first_a, first_b = edges[0], edges[1]
    sigma = endpoint_power
    for _refine in range(4):
        pa, pb = edges[1:-1], edges[2:]
        c = 0.5 * (pa + pb)
        h = 0.5 * (pb - pa)
        t = c[:, None] + h[:, None] * GK_NODES[None, :]
        y = np.asarray(integrand(t), dtype=complex)
        ok = True
        vals = []
        errs = []
        for e in eps:
            d = np.exp(-e * t * t)
            kp, ep = gk21_from_values(y * d, h)
            k = np.sum(kp)

            def damped(tt, e=e):
                return integrand(tt) * np.exp(-e * tt * tt)

            if sigma is not None and sigma != 0.0:
                v0, e0, rest = _first_panel(damped, first_a, first_b, float(sigma), cfg.abs_tol * 0.1)
                if rest:
                    r = _adaptive(damped, np.array([q[0] for q in rest]), np.array([q[1] for q in rest]),
                                  cfg.with_(rel_tol=1e-14))
                    v0, e0 = v0 + r[0], e0 + r[1]
            else:
                r = _adaptive(damped, np.array([first_a]), np.array([first_b]), cfg.with_(rel_tol=1e-14))
                v0, e0 = r[0], r[1]
            val = k + v0
            err = float(np.sum(ep)) + e0
            vals.append(val)
            errs.append(err)
            if err > max(cfg.rel_tol * abs(val), cfg.abs_tol):
                ok = False
        if ok:
            break
        mid = 0.5 * (edges[1:-1] + edges[2:])
        edges = np.sort(np.concatenate([edges, mid]))
    results = {float(e): IntegralResult(v, er, Strategy.ZERO_PARTITION, True) for e, v, er in zip(eps, vals, errs)}
    res = integrate_regularized(lambda e: results[e], cfg, ladder=eps)
    res.trace["cutoff"] = K
    res.trace["panels"] = len(edges) - 1
    return res
