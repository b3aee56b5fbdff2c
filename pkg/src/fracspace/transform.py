"""Forward and inverse momentum transforms with round-trip, Parseval and
delta-resolution checks.

Every one-axis transform is computed literally, as an integral of
``v(x) f(x) conj(K(k, x))`` per output node.  Bilateral integrals are folded
onto the half-line and split into parity sectors; on each sector the kernel
behaves like ``(kx)^p`` at the origin, which fixes the algebraic behaviour
of the integrands at both ends.

Off-grid values of a transform (needed by the inverse and by the norm of
``f~``) come from a spectral representation per sector::

    f~_s(k) = k^p (k + s)^(-p - g) r_s(t) / sqrt(w(k)),   t = (k - s)/(k + s)

where ``r_s`` is a Chebyshev interpolant on (-1, 1).  The exponents ``p``
(small k) and ``g`` (large k) are known from the kernel and from the origin
power of ``f``, so ``r_s`` is smooth up to both ends and the weighted norm
of ``f~`` is a Gauss-Jacobi sum that is exact for the interpolant.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import ive, roots_jacobi, roots_legendre

from .errors import ConvergenceError, DomainError, UsageError
from .functions import CatalogFunction, SampledFunction, Separable
from .kernel import KernelSpec, Variant, Weight, bilateral_factor, eval_kernel
from .measure import MeasureKind, MeasureSpec, Support
from .quadrature import (
    IntegralResult,
    Oscillator,
    QuadratureConfig,
    Strategy,
    integrate_bessel_semiinfinite,
    integrate_finite,
    integrate_regularized,
)
from .reports import CheckReport
from .specfun import gamma, recip_gamma_complex

__all__ = [
    "forward",
    "inverse",
    "roundtrip_error",
    "parseval_gap",
    "general_weight_roundtrip",
    "delta_sift",
    "delta_kernel",
    "spectral_transform",
    "SpectralRep",
    "CostWarning",
    "parse_grid",
    "worker_count",
]

_CONJUGATED = {Variant.BILATERAL_E, Variant.CLASSICAL_EXP, Variant.GENERAL_WEIGHT}
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class CostWarning(UserWarning):
    """A non-separable D > 1 transform falls back to tensor quadrature."""


def worker_count() -> int:
    """Default worker count, from the FRACSPACE_WORKERS environment variable."""
    try:
        return max(1, int(os.environ.get("FRACSPACE_WORKERS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))  # map preserves input order


def parse_grid(text: str) -> np.ndarray:
    """Parse the grid mini-language ``lin:a:b:N`` or ``log:a:b:N``."""
    try:
        kind, a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise UsageError(f"grid must look like lin:a:b:N or log:a:b:N, got {text!r}") from None
    if n < 1:
        raise UsageError("grid needs N >= 1")
    if kind == "lin":
        return np.linspace(a, b, n)
    if kind == "log":
        if a <= 0 or b <= 0:
            raise UsageError("log grids need positive limits")
        return np.geomspace(a, b, n)
    raise UsageError(f"unknown grid kind {kind!r}")


# ---------------------------------------------------------------------------
# one-axis problem description


@dataclass(frozen=True)
class _Sector:
    parity: int | None  # 0 even, 1 odd, None on a half-line
    p: float            # small-argument exponent of sqrt(v(x)) K(k, x) sqrt(w(k))
    order: float        # Bessel order driving the zero partition


class _Axis:
    """Kernel, weights and parity sectors of a one-axis transform."""

    def __init__(self, measure: MeasureSpec, kernel: KernelSpec):
        var = kernel.variant
        if var is Variant.COMPLEX_UNILATERAL:
            raise UsageError("complex-measure kernels are available through forward() only")
        if measure.kind is not MeasureKind.SIMPLE:
            raise UsageError("multi-fractional and complex measures are forward-only")
        if measure.bilateral != kernel.bilateral:
            raise UsageError(f"{var.value} kernel needs a {'bilateral' if kernel.bilateral else 'unilateral'} measure")
        self.kernel = kernel
        self.bilateral = kernel.bilateral
        if var is Variant.GENERAL_WEIGHT:
            self.v, self.w = kernel.v, kernel.w
        else:
            if abs(kernel.alpha - measure.alpha) > 1e-12:
                raise UsageError(f"kernel charge {kernel.alpha} differs from measure charge {measure.alpha}")
            if var in (Variant.CLASSICAL_COS, Variant.CLASSICAL_SIN, Variant.CLASSICAL_EXP) and measure.alpha != 1:
                raise UsageError("classical kernels need alpha = 1")
            # the momentum-side measure is the very same object
            self.v = self.w = _power_weight_handle(measure.alpha)
        l = kernel.l
        if var is Variant.UNILATERAL_BESSEL:
            sectors = [_Sector(None, l + 0.5, l)]
        elif var is Variant.CLASSICAL_COS:
            sectors = [_Sector(None, 0.0, -0.5)]
        elif var is Variant.CLASSICAL_SIN:
            sectors = [_Sector(None, 1.0, 0.5)]
        elif var is Variant.BILATERAL_BESSEL:
            n = kernel.n
            sectors = [_Sector(n % 2, float(n), l)]
        elif var is Variant.BILATERAL_E:
            n = kernel.n
            sectors = [_Sector((n - 1) % 2, 1.0 - n, -l), _Sector(n % 2, float(n), l)]
            sectors.sort(key=lambda s: s.parity)
        else:  # classical exp, general weight
            sectors = [_Sector(0, 0.0, -0.5), _Sector(1, 1.0, 0.5)]
        self.sectors = tuple(sectors)
        self.norm = _INV_SQRT_2PI if var is Variant.CLASSICAL_EXP else 1.0
        self.conjugate = var in _CONJUGATED

    @property
    def v_pow(self) -> float:
        return self.v.origin_power

    @property
    def w_pow(self) -> float:
        return self.w.origin_power

    def K(self, k, x):
        return self.norm * np.asarray(eval_kernel(self.kernel, k, x))

    def Kbar(self, k, x):
        out = self.K(k, x)
        return np.conj(out) if self.conjugate else out

    def sector_kernel(self, sec: _Sector, k, x, conj: bool):
        K = self.Kbar if conj else self.K
        var = self.kernel.variant
        if sec.parity is None or var is Variant.BILATERAL_BESSEL:
            return K(k, x)
        # build each sector from its own component: K(x) +- K(-x) leaves
        # rounding residue of the large singular part in the other sector
        z = np.asarray(k, dtype=float) * np.asarray(x, dtype=float)
        if var is Variant.BILATERAL_E:
            if sec.order == -self.kernel.l:  # the c^{-l} part
                return 0.5 * bilateral_factor(self.kernel.alpha, sec.order, z)
            A = np.conj(self.kernel.A) if (conj and self.conjugate) else self.kernel.A
            return 0.5 * A * bilateral_factor(self.kernel.alpha, sec.order, z)
        if var is Variant.CLASSICAL_EXP:
            if sec.parity == 0:
                return self.norm * np.cos(z)
            return (-1j if conj else 1j) * self.norm * np.sin(z)
        sign = 1.0 if sec.parity == 0 else -1.0
        return 0.5 * (K(k, x) + sign * K(k, -x))


@lru_cache(maxsize=None)
def _power_weight_handle(alpha: float) -> Weight:
    return Weight.power(alpha)


def _sector_fn(f, sec: _Sector):
    if sec.parity is None:
        return f
    sign = 1.0 if sec.parity == 0 else -1.0
    return lambda x: 0.5 * (f(x) + sign * f(-x))


def _sector_betas(f, axis: _Axis) -> dict:
    """Origin power of f per sector; None when unknown."""
    if not isinstance(f, CatalogFunction):
        return {s.parity: None for s in axis.sectors}
    if not axis.bilateral:
        b = math.inf if f.origin_power is None else float(f.origin_power)
        return {None: b}
    pw = f.sector_powers()
    return {s.parity: pw[s.parity] for s in axis.sectors if s.parity in pw}


def _jacobi_sigma(sigma):
    """Endpoint exponent to hand to the quadrature (None if analytic)."""
    if sigma is None:
        return "auto"
    if not math.isfinite(sigma):
        return None
    if abs(sigma - round(sigma)) < 1e-12 and sigma >= 0:
        return None
    return float(sigma)


def _f_meta(f):
    scale = float(getattr(f, "scale", 1.0))
    cutoff = float(getattr(f, "cutoff", math.inf))
    bps = tuple(getattr(f, "breakpoints", ()))
    return scale, cutoff, bps


# ---------------------------------------------------------------------------
# forward integrals


def _magnitude(axis: _Axis, f, sec: _Sector, k: float, beta) -> float:
    """Expected size of the sector transform at k, relative to its peak.

    The absolute quadrature tolerance is scaled by it so that the small-
    and large-k ends keep relative accuracy.
    """
    if beta is None or k == 0 or not isinstance(f, CatalogFunction):
        return 1.0
    s = float(f.k_scale)
    g = _gamma_exp(axis, sec, beta)
    p = sec.p
    m = (k / (k + s)) ** p * (s / (k + s)) ** g * 2.0 ** (p + g)
    m *= math.sqrt(float(axis.w(s)) / float(axis.w(k)))
    return min(1.0, m)


def _forward_sector(axis: _Axis, f, sec: _Sector, k: float, beta, cfg: QuadratureConfig) -> IntegralResult:
    scale, cutoff, bps = _f_meta(f)
    cfg = cfg.with_(abs_tol=cfg.abs_tol * _magnitude(axis, f, sec, k, beta))
    fs = _sector_fn(f, sec)
    fac = 1.0 if sec.parity is None else 2.0
    v = axis.v

    def integrand(t):
        return fac * v(t) * fs(t) * axis.sector_kernel(sec, k, t, conj=True)

    sigma = None if beta is None else axis.v_pow / 2.0 + sec.p + beta
    osc = Oscillator() if k == 0 else Oscillator((sec.order,), (abs(k),))
    return integrate_bessel_semiinfinite(
        None, osc, cfg, integrand=integrand, endpoint_power=_jacobi_sigma(sigma),
        breakpoints=bps, envelope_scale=lambda t: max(0.5 * scale, 0.25 * t), cutoff=cutoff,
    )


def _forward_axis(axis: _Axis, f, ks: np.ndarray, cfg: QuadratureConfig):
    """Sector values at |k| for every k; returns (dict parity -> values, errors, converged)."""
    betas = _sector_betas(f, axis)
    active = [s for s in axis.sectors if s.parity in betas]
    if not axis.bilateral and np.any(ks < 0):
        raise DomainError("unilateral transforms need k >= 0")
    ka = np.abs(ks)

    def one(k):
        return [_forward_sector(axis, f, s, float(k), betas[s.parity], cfg) for s in active]

    results = _pmap(one, ka)
    vals = {s.parity: np.array([r[i].value for r in results]) for i, s in enumerate(active)}
    errs = np.array([sum(x.error_estimate for x in r) for r in results]) if results else np.zeros(0)
    conv = bool(all(x.converged for r in results for x in r))
    return active, vals, errs, conv


def _assemble(axis: _Axis, active, vals, ks):
    out = np.zeros(ks.shape, dtype=complex)
    for s in active:
        sign = 1.0 if (s.parity in (None, 0)) else np.sign(ks)
        out = out + sign * vals[s.parity]
    return out


# ---------------------------------------------------------------------------
# spectral representation


def _cheb_nodes(N: int) -> np.ndarray:
    j = np.arange(N)
    return np.cos((2 * j + 1) * math.pi / (2 * N))


def _bary_weights(N: int) -> np.ndarray:
    j = np.arange(N)
    return (-1.0) ** j * np.sin((2 * j + 1) * math.pi / (2 * N))


def _bary_eval(t_nodes, wts, vals, t):
    t = np.asarray(t, dtype=float)
    d = t[..., None] - t_nodes
    exact = d == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        c = wts / d
        num = np.sum(c * vals, axis=-1)
        den = np.sum(c, axis=-1)
        out = num / den
    if np.any(exact):
        hit = np.any(exact, axis=-1)
        out = np.where(hit, np.sum(np.where(exact, vals, 0.0), axis=-1), out)
    return out


@dataclass
class _SectorRep:
    sector: _Sector
    gamma: float
    values: np.ndarray  # r at the Chebyshev nodes


@dataclass
class SpectralRep:
    """Chebyshev representation of a one-axis transform (see module notes).

    Calling the object evaluates ``f~(k)``; :meth:`norm2` returns the
    momentum-side squared norm, exact for the interpolant.
    """

    s: float
    N: int
    bilateral: bool
    w: Weight
    sectors: list
    error_estimate: float = math.nan
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self._t = _cheb_nodes(self.N)
        self._bw = _bary_weights(self.N)

    def _pref(self, sr: _SectorRep, k):
        p, g = sr.sector.p, sr.gamma
        with np.errstate(divide="ignore", invalid="ignore"):
            return k ** p * (k + self.s) ** (-p - g) / np.sqrt(self.w(k))

    def sector_value(self, sr: _SectorRep, k):
        k = np.asarray(k, dtype=float)
        t = (k - self.s) / (k + self.s)
        return self._pref(sr, k) * _bary_eval(self._t, self._bw, sr.values, t)

    def __call__(self, k):
        k = np.asarray(k, dtype=float)
        ka = np.abs(k)
        out = np.zeros(k.shape, dtype=complex)
        for sr in self.sectors:
            sign = np.sign(k) if sr.sector.parity == 1 else 1.0
            out = out + sign * self.sector_value(sr, ka)
        return out

    def _jacobi(self, sr: _SectorRep, M: int):
        a_exp = 2.0 * sr.gamma - 2.0
        b_exp = 2.0 * sr.sector.p
        if a_exp <= -1.0 or b_exp <= -1.0:
            raise DomainError(
                f"transform not square integrable in the parity-{sr.sector.parity} sector "
                f"(momentum exponents {b_exp / 2:g} at 0, {-sr.gamma:g} at infinity)")
        x, wq = roots_jacobi(M, a_exp, b_exp)
        p, g, s = sr.sector.p, sr.gamma, self.s
        const = s ** (2 * p) * (2 * s) ** (-2 * p - 2 * g) * 2 * s
        return x, wq * const

    def norm2(self) -> float:
        total = 0.0
        for sr in self.sectors:
            x, wq = self._jacobi(sr, self.N + 2)
            r = _bary_eval(self._t, self._bw, sr.values, x)
            total += (2.0 if self.bilateral else 1.0) * float(np.sum(wq * np.abs(r) ** 2))
        return total

    def diff_norm2(self, other: "SpectralRep") -> float:
        total = 0.0
        for a, b in zip(self.sectors, other.sectors):
            M = max(self.N, other.N) + 2
            x, wq = self._jacobi(a, M)
            ra = _bary_eval(self._t, self._bw, a.values, x)
            rb = _bary_eval(other._t, other._bw, b.values, x)
            total += (2.0 if self.bilateral else 1.0) * float(np.sum(wq * np.abs(ra - rb) ** 2))
        return total


def _gamma_exp(axis: _Axis, sec: _Sector, beta) -> float:
    if beta is None:
        raise UsageError("the spectral representation needs a catalog function")
    if not math.isfinite(beta):
        return max(sec.p, 0.0) + 2.0
    return axis.v_pow / 2.0 + beta + 1.0


def _spectral(axis: _Axis, f, cfg: QuadratureConfig, N0: int = 40, levels: int = 3,
              tol: float = 1e-10) -> SpectralRep:
    betas = _sector_betas(f, axis)
    active = [s for s in axis.sectors if s.parity in betas]
    gammas = {s.parity: _gamma_exp(axis, s, betas[s.parity]) for s in active}
    s_map = float(f.k_scale)
    cache: dict = {}
    prev = None
    rep = None
    max_err = 0.0
    conv = True
    for lev in range(levels):
        N = N0 * 3 ** lev
        t = _cheb_nodes(N)
        k = s_map * (1.0 + t) / (1.0 - t)
        need = [i for i in range(N) if k[i] not in cache]
        if need:
            _, vals, errs, ok = _forward_axis(axis, f, k[need], cfg)
            conv &= ok
            max_err = max(max_err, float(np.max(errs)))
            for j, i in enumerate(need):
                cache[k[i]] = {p: vals[p][j] for p in vals}
        srs = []
        for sec in active:
            fv = np.array([cache[kk][sec.parity] for kk in k])
            g = gammas[sec.parity]
            pref = k ** sec.p * (k + s_map) ** (-sec.p - g) / np.sqrt(axis.w(k))
            srs.append(_SectorRep(sec, g, fv / pref))
        rep = SpectralRep(s_map, N, axis.bilateral, axis.w, srs)
        if prev is not None:
            n2 = rep.norm2()
            rel = math.sqrt(rep.diff_norm2(prev) / n2) if n2 > 0 else 0.0
            rep.error_estimate = rel
            if rel <= tol:
                break
        prev = rep
    rep.meta = {"forward_max_error": max_err, "forward_converged": conv, "nodes": rep.N}
    return rep


_SPECTRAL_CACHE: dict = {}


def spectral_transform(measure: MeasureSpec, kernel: KernelSpec, f: CatalogFunction,
                       cfg: QuadratureConfig | None = None) -> SpectralRep:
    """Spectral representation of the one-axis transform of a catalog function."""
    cfg = cfg or QuadratureConfig()
    key = (measure, kernel, f, cfg)
    try:
        return _SPECTRAL_CACHE[key]
    except (KeyError, TypeError):
        pass
    rep = _spectral(_Axis(measure, kernel), f, cfg)
    try:
        _SPECTRAL_CACHE[key] = rep
    except TypeError:
        pass
    return rep


# ---------------------------------------------------------------------------
# inverse integrals


def _inverse_sector(axis: _Axis, ft: Callable, sec: _Sector, sigma_k, s_map: float, xa: float,
                    cfg: QuadratureConfig) -> IntegralResult:
    fac = 1.0 if sec.parity is None else 2.0
    w = axis.w

    def integrand(k):
        return fac * w(k) * ft(k) * axis.sector_kernel(sec, k, xa, conj=False)

    return integrate_bessel_semiinfinite(
        None, Oscillator((sec.order,), (xa,)), cfg, integrand=integrand,
        endpoint_power=_jacobi_sigma(sigma_k), breakpoints=(0.5 * s_map, s_map, 2.0 * s_map),
        envelope_scale=lambda k: max(0.25 * s_map, 0.25 * k),
    )


def _sampled_sector(ft: SampledFunction, sec: _Sector):
    if sec.parity is None:
        return ft
    sign = 1.0 if sec.parity == 0 else -1.0
    return lambda k: 0.5 * (ft(k) + sign * ft(-k))


def _inverse_axis(axis: _Axis, ft, xs: np.ndarray, cfg: QuadratureConfig):
    """Reconstruct f at xs from a SpectralRep or a sampled transform."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs == 0):
        raise DomainError("inverse transform is not evaluated at x = 0")
    if not axis.bilateral and np.any(xs < 0):
        raise DomainError("unilateral inverse needs x > 0")
    xa_u, inv_idx = np.unique(np.abs(xs), return_inverse=True)
    if isinstance(ft, SpectralRep):
        parts = [(sr.sector, (lambda k, sr=sr: ft.sector_value(sr, k)), 2.0 * sr.sector.p) for sr in ft.sectors]
        s_map = ft.s
    else:
        parts = [(sec, _sampled_sector(ft, sec), None) for sec in axis.sectors]
        s_map = 1.0 / max(ft.scale, 1e-300)
    for sec, _, sig in parts:
        if sig is not None and sig <= -1.0:
            raise DomainError(f"inverse integral diverges at k = 0 in the parity-{sec.parity} sector "
                              f"(integrand ~ k^{sig:g})")

    def one(xa):
        return [_inverse_sector(axis, fn, sec, sig, s_map, float(xa), cfg) for sec, fn, sig in parts]

    results = _pmap(one, xa_u)
    out = np.zeros(xs.shape, dtype=complex)
    err = np.zeros(xs.shape)
    for j, (sec, _, _) in enumerate(parts):
        v = np.array([r[j].value for r in results])[inv_idx]
        e = np.array([r[j].error_estimate for r in results])[inv_idx]
        sign = np.sign(xs) if sec.parity == 1 else 1.0
        out = out + sign * v
        err = err + e
    conv = bool(all(x.converged for r in results for x in r))
    return out, err, conv


# ---------------------------------------------------------------------------
# public transforms


def _as_grid(grid, dim):
    if isinstance(grid, str):
        grid = parse_grid(grid)
    if grid is None:
        grid = np.geomspace(1e-3, 1e2, 64)
    if dim == 1 or (isinstance(grid, np.ndarray) and grid.ndim == 1) or np.isscalar(grid[0]):
        g = np.atleast_1d(np.asarray(grid, dtype=float))
        return tuple(g for _ in range(dim))
    if len(grid) != dim:
        raise UsageError(f"need {dim} grids, got {len(grid)}")
    return tuple(np.atleast_1d(np.asarray(g, dtype=float)) for g in grid)


def _maybe_real(vals, axis_or_none):
    if np.iscomplexobj(vals) and np.all(vals.imag == 0):
        return vals.real
    return vals


def _finish(vals, conv, errs, label):
    if not conv:
        warnings.warn(f"{label}: some quadratures did not reach tolerance (max error {np.max(errs):.2e})",
                      RuntimeWarning, stacklevel=3)
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError(f"{label}: non-finite values", partial=vals)


def _forward_1d(measure, kernel, f, ks, cfg):
    if measure.kind is MeasureKind.MULTIFRACTIONAL:
        return _forward_multifractional(measure, kernel, f, ks, cfg)
    if measure.kind is MeasureKind.COMPLEX or kernel.variant is Variant.COMPLEX_UNILATERAL:
        return _forward_complex(measure, kernel, f, ks, cfg)
    axis = _Axis(measure, kernel)
    active, vals, errs, conv = _forward_axis(axis, f, ks, cfg)
    out = _assemble(axis, active, vals, ks)
    evaluator = None
    if isinstance(f, CatalogFunction):
        holder = {}

        def evaluator(k, holder=holder):
            if "rep" not in holder:
                holder["rep"] = spectral_transform(measure, kernel, f, cfg)
            return holder["rep"](k)

    meta = {"max_error": float(np.max(errs)) if errs.size else 0.0, "converged": conv,
            "measure": measure, "kernel": kernel, "function": f}
    return out, evaluator, meta


def forward(measure: MeasureSpec, kernel: KernelSpec, f, k_grid=None,
            cfg: QuadratureConfig | None = None) -> SampledFunction:
    """Forward transform ``f~(k) = int drho(x) f(x) conj(K(k, x))``.

    Parameters
    ----------
    measure, kernel : MeasureSpec, KernelSpec
        Must be compatible (same support side and charge).
    f : CatalogFunction, Separable, SampledFunction or callable
        One-axis functions for D = 1; a :class:`Separable` product (or a
        plain callable, with a :class:`CostWarning`) for D > 1.
    k_grid : array_like, str or sequence of those
        Output nodes; default 64 log-spaced nodes on [1e-3, 1e2].
    cfg : QuadratureConfig

    Returns
    -------
    SampledFunction
        Values at the grid; for one-axis catalog inputs the result can be
        evaluated off-grid through its spectral representation.
    """
    cfg = cfg or QuadratureConfig()
    D = measure.dim
    if kernel.dim != D:
        raise UsageError(f"kernel dimension {kernel.dim} differs from measure dimension {D}")
    grids = _as_grid(k_grid, D)
    side = Support.BILATERAL if kernel.bilateral else Support.UNILATERAL
    if D == 1:
        f1 = f.factors[0] if isinstance(f, Separable) else f
        vals, evaluator, meta = _forward_1d(measure, kernel, f1, grids[0], cfg)
        _finish(vals, meta["converged"], np.array([meta["max_error"]]), "forward")
        return SampledFunction(grids, _maybe_real(vals, None), side, evaluator, meta)
    m1 = _axis_measure(measure)
    k1 = _axis_kernel(kernel)
    if isinstance(f, Separable):
        if f.dim != D:
            raise UsageError("separable function dimension mismatch")
        factors = [forward(m1, k1, fm, g, cfg) for fm, g in zip(f.factors, grids)]
        vals = factors[0].values
        for fac in factors[1:]:
            vals = np.multiply.outer(vals, fac.values)
        meta = {"factors": factors, "converged": all(fc.meta["converged"] for fc in factors),
                "max_error": max(fc.meta["max_error"] for fc in factors)}
        return SampledFunction(grids, vals, side, None, meta)
    warnings.warn("non-separable input: full tensor quadrature, cost grows like (nodes per axis)^D",
                  CostWarning, stacklevel=2)
    vals, err = _tensor_forward(_Axis(m1, k1), f, grids, cfg)
    return SampledFunction(grids, _maybe_real(vals, None), side, None,
                           {"max_error": err, "converged": True, "tensor": True})


def _axis_measure(measure: MeasureSpec) -> MeasureSpec:
    return MeasureSpec(measure.support, 1, measure.alpha, measure.kind, measure.components, measure.terms)


def _axis_kernel(kernel: KernelSpec) -> KernelSpec:
    return KernelSpec(kernel.variant, kernel.l, kernel.alpha, kernel.A, kernel.omega, kernel.v, kernel.w, 1)


def inverse(measure: MeasureSpec, kernel: KernelSpec, ft: SampledFunction, x_grid=None,
            cfg: QuadratureConfig | None = None) -> SampledFunction:
    """Inverse transform ``f(x) = int drho(k) f~(k) K(k, x)``.

    The momentum-side measure is the configuration-side one for the
    automorphism variants (the same weight object), ``w`` for general
    weights.  Multi-fractional and complex measures have no inverse.
    """
    cfg = cfg or QuadratureConfig()
    if measure.kind is not MeasureKind.SIMPLE or kernel.variant is Variant.COMPLEX_UNILATERAL:
        raise UsageError("no inverse is offered for multi-fractional or complex measures: "
                         "their cross terms do not resolve the identity")
    D = measure.dim
    grids = _as_grid(x_grid, D)
    side = Support.BILATERAL if kernel.bilateral else Support.UNILATERAL
    if D == 1:
        axis = _Axis(measure, kernel)
        src = ft.meta.get("factors", [ft])[0] if ft.dim == 1 else None
        if src is None:
            raise UsageError("one-axis inverse needs a one-axis transform")
        rep = _rep_of(src, cfg)
        vals, err, conv = _inverse_axis(axis, rep if rep is not None else src, grids[0], cfg)
        _finish(vals, conv, err, "inverse")
        return SampledFunction(grids, _maybe_real(vals, None), side, None,
                               {"max_error": float(np.max(err)), "converged": conv})
    factors = ft.meta.get("factors")
    if not factors:
        raise UsageError("D > 1 inverse needs a separable transform (per-axis factors)")
    m1, k1 = _axis_measure(measure), _axis_kernel(kernel)
    parts = [inverse(m1, k1, fac, g, cfg) for fac, g in zip(factors, grids)]
    vals = parts[0].values
    for p in parts[1:]:
        vals = np.multiply.outer(vals, p.values)
    return SampledFunction(grids, vals, side, None, {"factors": parts})


def _rep_of(ft: SampledFunction, cfg):
    m = ft.meta
    if isinstance(m.get("function"), CatalogFunction) and "measure" in m:
        return spectral_transform(m["measure"], m["kernel"], m["function"], cfg)
    return None


# ---------------------------------------------------------------------------
# forward-only sums


def _forward_multifractional(measure, kernel, f, ks, cfg):
    if kernel.variant is not Variant.UNILATERAL_BESSEL or measure.bilateral:
        raise UsageError("multi-fractional sums use the unilateral Bessel kernel")
    total = np.zeros(ks.shape, dtype=complex)
    conv = True
    err = 0.0
    for g, a in measure.components:
        m = MeasureSpec(Support.UNILATERAL, 1, a)
        kk = KernelSpec(Variant.UNILATERAL_BESSEL, kernel.l, a)
        axis = _Axis(m, kk)
        active, vals, errs, ok = _forward_axis(axis, f, ks, cfg)
        total = total + g * _assemble(axis, active, vals, ks)
        conv &= ok
        err = max(err, float(np.max(errs)) * g)
    return total, None, {"max_error": err, "converged": conv, "forward_only": True}


def _forward_complex(measure, kernel, f, ks, cfg):
    if measure.kind is not MeasureKind.COMPLEX:
        raise UsageError("complex kernels need a complex measure")
    if kernel.variant not in (Variant.COMPLEX_UNILATERAL, Variant.UNILATERAL_BESSEL):
        raise UsageError("complex measures use the unilateral (complex) Bessel kernel")
    if np.any(ks < 0):
        raise DomainError("unilateral transforms need k >= 0")
    alpha, l = measure.alpha, kernel.l
    scale, cutoff, bps = _f_meta(f)
    beta = getattr(f, "origin_power", None)
    total = np.zeros(ks.shape, dtype=complex)
    err = 0.0
    conv = True
    for omega, C in measure.terms:
        kk = KernelSpec(Variant.COMPLEX_UNILATERAL, l, alpha, omega=omega)
        s = complex(alpha, omega)
        rg = recip_gamma_complex(s)
        sigma = None if beta is None else alpha / 2.0 + l + beta
        for i, k in enumerate(ks):
            def integrand(t, k=k, kk=kk, s=s, rg=rg):
                vw = np.exp((s - 1.0) * np.log(t)) * rg
                return vw * f(t) * np.asarray(eval_kernel(kk, k, t))

            osc = Oscillator() if k == 0 else Oscillator((l,), (float(k),))
            r = integrate_bessel_semiinfinite(
                None, osc, cfg, integrand=integrand, endpoint_power=_jacobi_sigma(sigma),
                breakpoints=bps, envelope_scale=lambda t: max(0.5 * scale, 0.25 * t), cutoff=cutoff)
            total[i] += C * r.value
            err = max(err, r.error_estimate * abs(C))
            conv &= r.converged
    return total, None, {"max_error": err, "converged": conv, "forward_only": True}


# ---------------------------------------------------------------------------
# tensor quadrature for non-separable D > 1 inputs


def _axis_rule(axis: _Axis, cutoff: float, kmax: float, scale: float, n: int = 12):
    """Composite rule on (0, cutoff] with the weight v folded in."""
    if not math.isfinite(cutoff):
        raise UsageError("non-separable inputs need a finite cutoff attribute")
    h = min(scale, math.pi / max(kmax, 1e-300) / 2.0, cutoff / 4.0)
    a1 = h
    xj, wj = roots_jacobi(n, 0.0, axis.v_pow)
    x0 = 0.5 * a1 * (1 + xj)
    w0 = wj * (0.5 * a1) ** (axis.v_pow + 1) * axis.v(x0) / x0 ** axis.v_pow
    m = max(1, int(math.ceil((cutoff - a1) / h)))
    edges = np.linspace(a1, cutoff, m + 1)
    xl, wl = roots_legendre(n)
    c = 0.5 * (edges[:-1] + edges[1:])
    hh = 0.5 * np.diff(edges)
    x1 = (c[:, None] + hh[:, None] * xl).ravel()
    w1 = (hh[:, None] * wl).ravel() * axis.v(x1)
    return np.concatenate([x0, x1]), np.concatenate([w0, w1])


def _tensor_forward(axis: _Axis, f, grids, cfg):
    scale, cutoff, _ = _f_meta(f)
    D = len(grids)
    kmax = max(float(np.max(np.abs(g))) for g in grids)

    def run(n):
        x, w = _axis_rule(axis, cutoff, kmax, scale, n)
        if axis.bilateral:
            x = np.concatenate([-x[::-1], x])
            w = np.concatenate([w[::-1], w])
        mesh = np.stack(np.meshgrid(*([x] * D), indexing="ij"), axis=-1)
        fw = np.asarray(f(mesh), dtype=complex)
        # contract one axis at a time with w(x) Kbar(k, x)
        mats = [w[None, :] * axis.Kbar(g[:, None], x[None, :]) for g in grids]
        t = fw
        for mu in range(D):
            t = np.tensordot(mats[mu], t, axes=([1], [0]))
            t = np.moveaxis(t, 0, -1)
        return t

    a = run(12)
    b = run(20)
    err = float(np.max(np.abs(a - b)))
    return b, err


# ---------------------------------------------------------------------------
# verification


def _x_rule(f, axis: _Axis, n_first: int = 24, per_panel: int = 10):
    """Nodes and weights (weight v included) for norms over (0, cutoff]."""
    scale, cutoff, bps = _f_meta(f)
    if not math.isfinite(cutoff):
        raise UsageError("round-trip checks need a function with finite cutoff")
    a1 = min(scale, cutoff / 4.0)
    vp = axis.v_pow
    xj, wj = roots_jacobi(n_first, 0.0, vp)
    x0 = 0.5 * a1 * (1.0 + xj)
    w0 = wj * (0.5 * a1) ** (vp + 1.0) * axis.v(x0) / x0 ** vp
    edges = [a1]
    for b in sorted([p for p in bps if a1 < p < cutoff] + [cutoff]):
        m = max(1, int(math.ceil((b - edges[-1]) / scale)))
        edges.extend(np.linspace(edges[-1], b, m + 1)[1:])
    edges = np.array(edges)
    xl, wl = roots_legendre(per_panel)
    c = 0.5 * (edges[:-1] + edges[1:])
    h = 0.5 * np.diff(edges)
    x1 = (c[:, None] + h[:, None] * xl).ravel()
    w1 = (h[:, None] * wl).ravel() * axis.v(x1)
    return np.concatenate([x0, x1]), np.concatenate([w0, w1])


def _norm_f2(axis: _Axis, f, cfg) -> float:
    scale, cutoff, bps = _f_meta(f)
    betas = _sector_betas(f, axis)
    bmin = min(b for b in betas.values() if b is not None) if betas else 0.0
    sigma = axis.v_pow + 2.0 * bmin if math.isfinite(bmin) else None
    if axis.bilateral:
        def integrand(x):
            return axis.v(x) * (np.abs(f(x)) ** 2 + np.abs(f(-x)) ** 2)
    else:
        def integrand(x):
            return axis.v(x) * np.abs(f(x)) ** 2
    edges = [p for p in bps if 0 < p < cutoff]
    edges += list(np.arange(scale, cutoff, scale))
    r = integrate_finite(integrand, 0.0, cutoff, cfg.with_(rel_tol=1e-13, abs_tol=1e-300),
                         endpoint_power=_jacobi_sigma(sigma), breakpoints=edges)
    return float(r.value)


def _params(measure, kernel, f):
    p = {"support": measure.support.value, "alpha": measure.alpha, "variant": kernel.variant.value,
         "l": kernel.l, "function": f.spec() if isinstance(f, CatalogFunction) else repr(f)}
    if kernel.variant is Variant.BILATERAL_E:
        p["A"] = str(kernel.A)
    if kernel.variant is Variant.GENERAL_WEIGHT:
        p["v"], p["w"] = kernel.v.name, kernel.w.name
    return p


def roundtrip_error(measure: MeasureSpec, kernel: KernelSpec, f, cfg: QuadratureConfig | None = None,
                    *, tol: float = 1e-6, x_grid=None) -> CheckReport:
    """Relative L2(rho) error of inverse(forward(f)) against f.

    The norm is evaluated with a composite rule on (0, cutoff] (mirrored for
    bilateral spaces) whose first panel carries the weight singularity.
    Passing `x_grid` replaces the rule by the plain discrete norm on those
    nodes.
    """
    cfg = cfg or QuadratureConfig()
    if measure.dim != 1:
        return _roundtrip_separable(measure, kernel, f, cfg, tol)
    axis = _Axis(measure, kernel)
    params = _params(measure, kernel, f)
    if x_grid is None:
        x, W = _x_rule(f, axis)
    else:
        x = np.asarray(x_grid, dtype=float)
        W = axis.v(x)
    if axis.bilateral and x_grid is None:
        x = np.concatenate([-x[::-1], x])
        W = np.concatenate([W[::-1], W])
    rep = spectral_transform(measure, kernel, f, cfg)
    try:
        rec, err, conv = _inverse_axis(axis, rep, x, cfg)
    except DomainError as exc:
        return CheckReport("roundtrip", params, math.inf, 0.0, math.inf, tol, {"reason": str(exc)})
    fx = f(x)
    num = math.sqrt(float(np.sum(W * np.abs(rec - fx) ** 2)))
    den = math.sqrt(float(np.sum(W * np.abs(fx) ** 2)))
    gap = num / den
    diag = {"nodes": int(x.size), "spectral_nodes": rep.N, "spectral_error": rep.error_estimate,
            "inverse_converged": conv, "max_inverse_error": float(np.max(err)),
            "max_pointwise_error": float(np.max(np.abs(rec - fx)))}
    return CheckReport("roundtrip", params, gap, 0.0, gap, tol, diag)


def parseval_gap(measure: MeasureSpec, kernel: KernelSpec, f, cfg: QuadratureConfig | None = None,
                 *, tol: float = 1e-6) -> CheckReport:
    """``| ||f~|| - ||f|| | / ||f||`` with the measure-weighted norms."""
    cfg = cfg or QuadratureConfig()
    if measure.dim != 1:
        return _parseval_separable(measure, kernel, f, cfg, tol)
    axis = _Axis(measure, kernel)
    params = _params(measure, kernel, f)
    nf = math.sqrt(_norm_f2(axis, f, cfg))
    rep = spectral_transform(measure, kernel, f, cfg)
    try:
        nft = math.sqrt(rep.norm2())
    except DomainError as exc:
        return CheckReport("parseval", params, math.inf, nf, math.inf, tol, {"reason": str(exc)})
    gap = abs(nft - nf) / nf
    return CheckReport("parseval", params, nft, nf, gap, tol,
                       {"spectral_nodes": rep.N, "spectral_error": rep.error_estimate,
                        "forward_max_error": rep.meta.get("forward_max_error")})


def _roundtrip_separable(measure, kernel, f, cfg, tol):
    if not isinstance(f, Separable) or f.dim != measure.dim:
        raise UsageError("D > 1 checks need a Separable function with one factor per axis")
    m1, k1 = _axis_measure(measure), _axis_kernel(kernel)
    axis = _Axis(m1, k1)
    aa = cc = ac = 1.0 + 0j
    parts = []
    for fm in f.factors:
        x, W = _x_rule(fm, axis)
        if axis.bilateral:
            x = np.concatenate([-x[::-1], x])
            W = np.concatenate([W[::-1], W])
        rep = spectral_transform(m1, k1, fm, cfg)
        rec, _, _ = _inverse_axis(axis, rep, x, cfg)
        fx = fm(x)
        aa *= np.sum(W * np.abs(rec) ** 2)
        cc *= np.sum(W * np.abs(fx) ** 2)
        ac *= np.sum(W * rec * np.conj(fx))
        parts.append(float(np.sqrt(np.sum(W * np.abs(rec - fx) ** 2) / np.sum(W * np.abs(fx) ** 2))))
    num2 = max(float((aa + cc - 2.0 * ac).real), 0.0)
    gap = math.sqrt(num2 / cc.real)
    gap = max(gap, max(parts))  # guard against cancellation in the product formula
    params = _params(measure, kernel, f.factors[0])
    params.update(dim=measure.dim, function=[g.spec() for g in f.factors])
    return CheckReport("roundtrip", params, gap, 0.0, gap, tol, {"per_axis": parts})


def _parseval_separable(measure, kernel, f, cfg, tol):
    if not isinstance(f, Separable) or f.dim != measure.dim:
        raise UsageError("D > 1 checks need a Separable function with one factor per axis")
    m1, k1 = _axis_measure(measure), _axis_kernel(kernel)
    axis = _Axis(m1, k1)
    nf2 = nft2 = 1.0
    for fm in f.factors:
        nf2 *= _norm_f2(axis, fm, cfg)
        nft2 *= spectral_transform(m1, k1, fm, cfg).norm2()
    nf, nft = math.sqrt(nf2), math.sqrt(nft2)
    gap = abs(nft - nf) / nf
    params = _params(measure, kernel, f.factors[0])
    params.update(dim=measure.dim, function=[g.spec() for g in f.factors])
    return CheckReport("parseval", params, nft, nf, gap, tol, {})


def general_weight_roundtrip(v: Weight, w: Weight, f, cfg: QuadratureConfig | None = None,
                             *, tol: float = 1e-6) -> CheckReport:
    """Round-trip and Parseval gaps of the plane-wave transform with
    arbitrary positive weights ``v(x)`` and ``w(k)`` (bilateral, D = 1).

    The reported gap is the round-trip error; the Parseval gap is in the
    diagnostics.
    """
    cfg = cfg or QuadratureConfig()
    measure = MeasureSpec(Support.BILATERAL, 1, 1.0)
    kernel = KernelSpec(Variant.GENERAL_WEIGHT, v=v, w=w)
    rt = roundtrip_error(measure, kernel, f, cfg, tol=tol)
    pg = parseval_gap(measure, kernel, f, cfg, tol=tol)
    rt.check = "general_weight_roundtrip"
    rt.diagnostics["parseval_gap"] = pg.gap
    rt.diagnostics["parseval_pass"] = pg.passed
    return rt


def _weber_terms(axis: _Axis) -> list:
    """(coefficient, order, parity power) triples of the damped reproducing
    kernel; None when the k-integral has no closed form here."""
    var = axis.kernel.variant
    if var in (Variant.GENERAL_WEIGHT, Variant.CLASSICAL_EXP):
        return None
    if var is Variant.UNILATERAL_BESSEL:
        return [(1.0, axis.kernel.l, 0)]
    if var in (Variant.CLASSICAL_COS, Variant.CLASSICAL_SIN):
        return [(1.0, axis.sectors[0].order, 0)]
    if var is Variant.BILATERAL_BESSEL:
        return [(2.0, axis.kernel.l, axis.kernel.n)]
    a2 = abs(axis.kernel.A) ** 2
    n = axis.kernel.n
    return [(0.5, -axis.kernel.l, 1 - n), (0.5 * a2, axis.kernel.l, n)]


def delta_kernel(measure: MeasureSpec, kernel: KernelSpec, x, xp, eps: float):
    """Gaussian-damped reproducing kernel
    ``delta_eps(x, x') = int drho(k) exp(-eps k^2) K(k, x) conj(K(k, x'))``.

    For the Bessel-type kernels the k-integral is Weber's second exponential
    integral ``int_0^inf k exp(-eps k^2) J_nu(ak) J_nu(bk) dk
    = exp(-(a^2+b^2)/(4 eps)) I_nu(ab/(2 eps)) / (2 eps)``, valid for
    ``nu > -1``; the plane-wave kernel gives the heat kernel.  As eps -> 0 it
    tends to ``delta(x - x') / sqrt(v(x) v(x'))``.
    """
    axis = _Axis(measure, kernel)
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    eps = float(eps)
    if not eps > 0:
        raise DomainError("damping must be positive")
    if kernel.variant is Variant.CLASSICAL_EXP:
        return np.exp(-(x - xp) ** 2 / (4.0 * eps)) / math.sqrt(4.0 * math.pi * eps)
    terms = _weber_terms(axis)
    if terms is None:
        raise UsageError("no closed-form damped delta for general-weight kernels")
    a, b = np.abs(x), np.abs(xp)
    sgn = np.sign(x) * np.sign(xp)
    alpha = kernel.alpha
    out = np.zeros(np.broadcast(a, b).shape)
    with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
        base = gamma(alpha) * (a * b) ** (1.0 - alpha / 2.0) / (2.0 * eps) * np.exp(-(a - b) ** 2 / (4.0 * eps))
        for c, nu, m in terms:
            if not nu > -1:
                raise DomainError(f"damped delta diverges at k=0 for Bessel order {nu}")
            out = out + c * sgn ** m * base * ive(nu, a * b / (2.0 * eps))
    return out if out.ndim else float(out)


def delta_sift(measure: MeasureSpec, kernel: KernelSpec, f, x: float,
               cfg: QuadratureConfig | None = None, *, ladder: Sequence[float] | None = None,
               method: str = "auto") -> IntegralResult:
    """Regularized delta applied to f at x.

    ``method="kernel"`` integrates ``v(x') delta_eps(x, x') f(x')`` over x'
    with the closed-form damped kernel of :func:`delta_kernel`;
    ``method="spectral"`` integrates over k first (see
    :func:`_delta_sift_spectral`).  ``"auto"`` picks the kernel route when
    it is available.  Both extrapolate eps -> 0 along the ladder.
    """
    cfg = cfg or QuadratureConfig()
    axis = _Axis(measure, kernel)
    x = float(x)
    if x == 0 or (x < 0 and not axis.bilateral):
        raise DomainError("sifting point must be inside the open domain")
    terms = _weber_terms(axis)
    if method == "auto":
        ok = kernel.variant is Variant.CLASSICAL_EXP or (terms is not None and all(nu > -1 for _, nu, _ in terms))
        method = "kernel" if ok else "spectral"
    if method == "spectral":
        return _delta_sift_spectral(measure, kernel, f, x, cfg, ladder=ladder)
    if method != "kernel":
        raise UsageError(f"unknown sifting method {method!r}")
    v = axis.v
    cutoff = float(f.cutoff)
    bps = [b for b in getattr(f, "breakpoints", ()) if 0 < b < cutoff]
    beta = getattr(f, "origin_power", 0.0)
    if beta is None:
        sigma = None
    else:
        nu_min = min(nu for _, nu, _ in terms) if terms else 0.0
        sigma = _jacobi_sigma(kernel.alpha / 2.0 + nu_min + beta) if not axis.bilateral else "auto"

    def evaluate(eps):
        w = 14.0 * math.sqrt(eps)
        pts = bps + [p for p in (abs(x) - w, abs(x), abs(x) + w) if 0 < p < cutoff]

        def integrand(t):
            out = v(t) * delta_kernel(measure, kernel, x, t, eps) * f(t)
            if axis.bilateral:
                out = out + v(t) * delta_kernel(measure, kernel, x, -t, eps) * f(-t)
            return out

        return integrate_finite(integrand, 0.0, cutoff, cfg, endpoint_power=sigma, breakpoints=pts)

    res = integrate_regularized(evaluate, cfg, ladder=ladder)
    res.trace["x"] = x
    res.trace["method"] = "kernel"
    res.trace["reference"] = complex(f(x))
    return res


def _delta_sift_spectral(measure: MeasureSpec, kernel: KernelSpec, f: CatalogFunction, x: float,
                         cfg: QuadratureConfig, *, ladder: Sequence[float] | None = None) -> IntegralResult:
    """Fubini form of the sifting integral.

    Evaluates ``int drho(x') delta_eps(x, x') f(x')`` along the ladder,
    where ``delta_eps(x, x') = int drho(k) exp(-eps k^2) K(k, x) conj(K(k, x'))``.
    The x' integral is done first (it is the forward transform), which is
    legitimate for every eps > 0 by absolute convergence; the limit eps -> 0
    is then extrapolated.
    """
    axis = _Axis(measure, kernel)
    rep = spectral_transform(measure, kernel, f, cfg)

    def evaluate(eps):
        total = 0.0
        err = 0.0
        ok = True
        for sr in rep.sectors:
            sec = sr.sector
            fac = 1.0 if sec.parity is None else 2.0

            def integrand(k, sr=sr, sec=sec, fac=fac):
                return (fac * np.exp(-eps * k * k) * axis.w(k) * rep.sector_value(sr, k)
                        * axis.sector_kernel(sec, k, abs(x), conj=False))

            cut = math.sqrt(40.0 * math.log(10.0) / eps)
            r = integrate_bessel_semiinfinite(
                None, Oscillator((sec.order,), (abs(x),)), cfg, integrand=integrand,
                endpoint_power=_jacobi_sigma(2.0 * sec.p), breakpoints=(0.5 * rep.s, rep.s, 2.0 * rep.s),
                envelope_scale=lambda k: max(0.25 * rep.s, 0.25 * k), cutoff=cut)
            sign = 1.0 if (sec.parity in (None, 0) or x > 0) else -1.0
            total = total + sign * r.value
            err += r.error_estimate
            ok &= r.converged
        return IntegralResult(total, err, Strategy.ZERO_PARTITION, ok)

    res = integrate_regularized(evaluate, cfg, ladder=ladder)
    res.trace["x"] = x
    res.trace["method"] = "spectral"
    res.trace["reference"] = complex(f(x))
    return res
