"""Special-function primitives: Gamma, Bessel J of real order, the even
entire factor of J, and Bessel zeros.

All routines are vectorized over their argument and have no global mutable
state apart from a read-only-after-fill zero cache.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "BesselOrder",
    "gamma",
    "rgamma",
    "recip_gamma_complex",
    "bessel_j",
    "jcal",
    "bessel_zero",
    "bessel_zeros",
    "SERIES_RADIUS",
]

# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Power series is used for |z| <= SERIES_RADIUS; see bessel_j for the rest.
SERIES_RADIUS = 8.0
_SERIES_TERMS = 90


@dataclass(frozen=True)
class BesselOrder:
    """Real Bessel order, restricted to ``nu > -1``."""

    nu: float

    def __post_init__(self):
        nu = float(self.nu)
        if not np.isfinite(nu) or nu <= -1.0:
            raise DomainError(f"Bessel order must satisfy nu > -1, got {self.nu!r}")
        object.__setattr__(self, "nu", nu)

    def __float__(self) -> float:
        return self.nu


def _as_order(order) -> float:
    if isinstance(order, BesselOrder):
        return order.nu
    return BesselOrder(order).nu


def _is_nonpos_int(x: np.ndarray) -> np.ndarray:
    return (x <= 0) & (x == np.round(x))


def _sin_pi(x: np.ndarray) -> np.ndarray:
    """sin(pi x) with exact zeros at integers."""
    n = np.round(x)
    r = x - n
    s = np.sin(np.pi * r)
    return np.where(np.mod(n, 2) == 0, s, -s)


def _lanczos_real(x: np.ndarray) -> np.ndarray:
    # valid for x >= 0.5
    xm = x - 1.0
    a = np.full_like(xm, _LANCZOS_P[0])
    for i in range(1, len(_LANCZOS_P)):
        a = a + _LANCZOS_P[i] / (xm + i)
    t = xm + _LANCZOS_G + 0.5
    # split the power to postpone overflow up to x ~ 171
    half = t ** ((xm + 0.5) / 2.0)
    return _SQRT_2PI * half * (half * np.exp(-t)) * a


def _gamma_right(x: np.ndarray) -> np.ndarray:
    # For large x the Lanczos power/exponential loses ~x ulps; shift the
    # argument down to [9, 10) and multiply back, which loses at most n ulps.
    out = _lanczos_real(np.minimum(x, 10.0))
    big = x > 10.0
    if np.any(big):
        xb = x[big]
        n = np.floor(xb - 9.0)
        base = xb - n
        val = _lanczos_real(base)
        for j in range(int(n.max())):
            val = np.where(j < n, val * (base + j), val)
        out[big] = val
    return out


def gamma(x):
    """Gamma function of a real argument.

    Parameters
    ----------
    x : float or array_like
        Real argument; non-positive integers are poles.

    Returns
    -------
    float or ndarray

    Raises
    ------
    PoleError
        If any element of `x` is a non-positive integer.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(_is_nonpos_int(xa)):
        raise PoleError("gamma has a pole at non-positive integers")
    out = np.empty_like(xa)
    big = xa >= 0.5
    out[big] = _gamma_right(xa[big])
    small = ~big
    if np.any(small):
        xs = xa[small]
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        out[small] = np.pi / (_sin_pi(xs) * _gamma_right(1.0 - xs))
    return out if out.ndim else float(out)


def rgamma(x):
    """Reciprocal Gamma of a real argument; zero at the poles of Gamma."""
    xa = np.asarray(x, dtype=float)
    out = np.zeros_like(xa)
    big = xa >= 0.5
    out[big] = 1.0 / _gamma_right(xa[big])
    small = ~big
    if np.any(small):
        xs = xa[small]
        out[small] = _sin_pi(xs) * _gamma_right(1.0 - xs) / np.pi
    return out if out.ndim else float(out)


def _lanczos_complex(z: np.ndarray) -> np.ndarray:
    zm = z - 1.0
    a = np.full_like(zm, _LANCZOS_P[0])
    for i in range(1, len(_LANCZOS_P)):
        a = a + _LANCZOS_P[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _SQRT_2PI * np.exp((zm + 0.5) * np.log(t) - t) * a


def recip_gamma_complex(z):
    """Reciprocal Gamma function 1/Gamma(z) for complex `z` (entire).

    Uses the Lanczos approximation on Re z >= 1/2 and the reflection formula
    ``1/Gamma(z) = Gamma(1-z) sin(pi z)/pi`` elsewhere.
    """
    za = np.asarray(z, dtype=complex)
    out = np.empty_like(za)
    right = za.real >= 0.5
    out[right] = 1.0 / _lanczos_complex(za[right])
    left = ~right
    if np.any(left):
        zl = za[left]
        n = np.round(zl.real)
        # sin(pi z) with the integer part of Re z removed for accuracy
        s = np.sin(np.pi * (zl - n))
        s = np.where(np.mod(n, 2) == 0, s, -s)
        val = _lanczos_complex(1.0 - zl) * s / np.pi
        exact_pole = (zl.imag == 0) & _is_nonpos_int(zl.real)
        out[left] = np.where(exact_pole, 0.0, val)
    return out if out.ndim else complex(out)


# ---------------------------------------------------------------------------
# Bessel J


def _jcal_series(nu: float, z2: np.ndarray) -> np.ndarray:
    """Power series of J_nu(z)/z^nu as a function of z**2."""
    q = -0.25 * z2
    term = np.full_like(z2, rgamma(nu + 1.0) * 2.0 ** (-nu))
    total = term.copy()
    for m in range(_SERIES_TERMS):
        term = term * q / ((m + 1.0) * (m + 1.0 + nu))
        total = total + term
        if not np.any(np.abs(term) > 1e-18 * np.abs(total)):
            break
    return total


def _schlaefli(nu: float, z: np.ndarray) -> np.ndarray:
    """Integral representation of J_nu(z), z > 0 (DLMF 10.9.6)."""
    zmax = float(np.max(z))
    n1 = int(1.2 * (zmax + abs(nu))) + 40
    t1, w1 = np.polynomial.legendre.leggauss(n1)
    th = 0.5 * np.pi * (t1 + 1.0)
    w1 = 0.5 * np.pi * w1
    ang = nu * th[None, :] - z[:, None] * np.sin(th)[None, :]
    first = np.cos(ang) @ w1 / np.pi
    snu = math.sin(math.pi * nu)
    if snu == 0.0 or nu == round(nu):
        return first
    # second integral over t in [0, T], four Gauss-Legendre panels
    zmin = float(np.min(z))
    T = math.asinh((45.0 + 2.0 * abs(nu)) / zmin) + 0.5
    tg, wg = np.polynomial.legendre.leggauss(24)
    edges = np.linspace(0.0, T, 5)
    second = np.zeros_like(z)
    for a, b in zip(edges[:-1], edges[1:]):
        tt = 0.5 * (b - a) * (tg + 1.0) + a
        ww = 0.5 * (b - a) * wg
        second += np.exp(-z[:, None] * np.sinh(tt)[None, :] - nu * tt[None, :]) @ ww
    return first - snu / np.pi * second


def _hankel_asymptotic(nu: float, z: np.ndarray) -> np.ndarray:
    mu = 4.0 * nu * nu
    P = np.ones_like(z)
    Q = np.zeros_like(z)
    coef = 1.0
    prev = np.full_like(z, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, 60):
        coef *= (mu - (2 * k - 1) ** 2) / (k * 8.0)
        term = coef / z ** k
        mag = np.abs(term)
        active &= mag < prev
        if not np.any(active):
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        contrib = np.where(active, sign * term, 0.0)
        if k % 2 == 0:
            P = P + contrib
        else:
            Q = Q + contrib
        prev = np.where(active, mag, prev)
        if np.all(mag < 1e-17):
            break
    phi = (0.5 * nu + 0.25) * np.pi
    cw = np.cos(z) * math.cos(phi) + np.sin(z) * math.sin(phi)
    sw = np.sin(z) * math.cos(phi) - np.cos(z) * math.sin(phi)
    return np.sqrt(2.0 / (np.pi * z)) * (P * cw - Q * sw)


def _asymptotic_threshold(nu: float) -> float:
    return max(25.0, 2.0 * nu * nu)


def _bessel_j_pos(nu: float, z: np.ndarray) -> np.ndarray:
    """J_nu(z) for z >= 0 and any real non-negative-integer-free order."""
    out = np.empty_like(z)
    if nu in (0.5, -0.5):
        with np.errstate(divide="ignore", invalid="ignore"):
            pre = np.sqrt(2.0 / (np.pi * z))
            out = pre * (np.sin(z) if nu > 0 else np.cos(z))
        zero = z == 0
        if np.any(zero):
            out[zero] = 0.0 if nu > 0 else np.inf
        return out
    s = z <= SERIES_RADIUS
    if np.any(s):
        zs = z[s]
        with np.errstate(divide="ignore"):
            pw = zs ** nu
        out[s] = pw * _jcal_series(nu, zs * zs)
        if nu < 0:
            out[s & (z == 0)] = np.inf
    zb = _asymptotic_threshold(nu)
    mid = (~s) & (z <= zb)
    if np.any(mid):
        out[mid] = _schlaefli(nu, z[mid])
    far = z > zb
    if np.any(far):
        out[far] = _hankel_asymptotic(nu, z[far])
    return out


def _bessel_j_unchecked(nu: float, z) -> np.ndarray:
    """J_nu for arbitrary real order (internal: no nu > -1 check), z >= 0."""
    za = np.asarray(z, dtype=float)
    if np.any(za < 0):
        raise DomainError("negative argument requires an integer order")
    return _bessel_j_pos(float(nu), za.ravel()).reshape(za.shape)


def bessel_j(order, z):
    """Bessel function of the first kind J_nu(z) for real order nu > -1.

    Parameters
    ----------
    order : BesselOrder or float
        Order ``nu > -1``.
    z : float or array_like
        Argument.  Negative values are accepted only for integer orders.

    Returns
    -------
    float or ndarray
        Absolute error below 1e-12 for ``|z| <= 50`` and below 1e-10 beyond.

    Notes
    -----
    Three regimes are used: the power series for ``|z| <= 8``, the
    Schlaefli integral representation up to ``max(25, 2 nu^2)``, and the
    Hankel asymptotic expansion beyond.
    """
    nu = _as_order(order)
    za = np.asarray(z, dtype=float)
    neg = za < 0
    if np.any(neg):
        if nu != round(nu):
            raise DomainError("J_nu(z) for z < 0 requires integer order; use jcal")
        sign = np.where(neg & (int(round(nu)) % 2 == 1), -1.0, 1.0)
        out = sign * _bessel_j_pos(nu, np.abs(za).ravel()).reshape(za.shape)
    else:
        out = _bessel_j_pos(nu, za.ravel()).reshape(za.shape)
    return out if out.ndim else float(out)


def _jcal_unchecked(nu: float, z) -> np.ndarray:
    za = np.asarray(z, dtype=float)
    flat = za.ravel()
    z2 = flat * flat
    out = np.empty_like(flat)
    s = z2 <= SERIES_RADIUS ** 2
    if np.any(s):
        out[s] = _jcal_series(nu, z2[s])
    if np.any(~s):
        az = np.sqrt(z2[~s])
        out[~s] = _bessel_j_pos(nu, az) / az ** nu
    return out.reshape(za.shape)


def jcal(order, z):
    """Even entire factor of J: ``J_nu(z) = z**nu * jcal(nu, z)``.

    The value depends on `z` only through ``z**2``, so ``jcal(nu, z) ==
    jcal(nu, -z)`` holds bit for bit.
    """
    nu = _as_order(order)
    out = _jcal_unchecked(nu, z)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# zeros


def _mcmahon(nu: float, m: np.ndarray) -> np.ndarray:
    mu = 4.0 * nu * nu
    b = (m + 0.5 * nu - 0.25) * np.pi
    e = 8.0 * b
    return (b - (mu - 1) / e - 4 * (mu - 1) * (7 * mu - 31) / (3 * e ** 3)
            - 32 * (mu - 1) * (83 * mu ** 2 - 982 * mu + 3779) / (15 * e ** 5))


def _jprime(nu: float, z: np.ndarray) -> np.ndarray:
    return nu / z * _bessel_j_pos(nu, z) - _bessel_j_pos(nu + 1.0, z)


def _newton(nu: float, z: np.ndarray, maxiter: int = 50) -> np.ndarray:
    z = z.copy()
    for _ in range(maxiter):
        f = _bessel_j_pos(nu, z)
        step = f / _jprime(nu, z)
        z = z - step
        if np.all(np.abs(step) <= 4e-16 * np.abs(z)):
            return z
    f = _bessel_j_pos(nu, z)
    if np.all(np.abs(f) <= 1e-12):
        return z
    raise ConvergenceError(f"Newton refinement of Bessel zeros failed for nu={nu}")


def _bisect(nu: float, a: float, b: float) -> float:
    fa = float(_bessel_j_pos(nu, np.array([a]))[0])
    for _ in range(200):
        c = 0.5 * (a + b)
        fc = float(_bessel_j_pos(nu, np.array([c]))[0])
        if fc == 0.0:
            return c
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
        if b - a <= 2e-16 * b:
            break
    return 0.5 * (a + b)


def _scan_zeros(nu: float, count: int) -> np.ndarray:
    """Sequential bracket scan from the origin; robust reference path."""
    h = 0.1
    zs = []
    a = 1e-3 if nu != 0.0 else 0.0
    grid_a = max(a, 1e-6)
    fa = float(_bessel_j_pos(nu, np.array([grid_a]))[0])
    x = grid_a
    while len(zs) < count:
        xs = x + h * np.arange(1, 201)
        fs = _bessel_j_pos(nu, xs)
        prev_x, prev_f = x, fa
        for xi, fi in zip(xs, fs):
            if fi == 0.0 or (fi > 0) != (prev_f > 0):
                zs.append(_bisect(nu, prev_x, xi))
                if len(zs) >= count:
                    break
            prev_x, prev_f = xi, fi
        x, fa = float(xs[-1]), float(fs[-1])
    r = np.array(zs[:count])
    return _newton(nu, r)


_zero_cache: dict[float, np.ndarray] = {}
_zero_lock = threading.Lock()


def _compute_zeros(nu: float, count: int) -> np.ndarray:
    m = np.arange(1, count + 1, dtype=float)
    guess = _mcmahon(nu, m)
    # McMahon is only trusted once the leading term dominates
    reliable = guess > 2.0 * abs(nu) + 4.0
    nscan = int(np.argmax(reliable)) if np.any(reliable) else count
    nscan = min(count, max(nscan, 3))
    head = _scan_zeros(nu, nscan)
    if nscan == count:
        return head
    tail = _newton(nu, guess[nscan:])
    zs = np.concatenate([head, tail])
    d = np.diff(zs)
    if np.any(d < 2.0) or np.any(d > 4.5) or abs(zs[nscan] - guess[nscan]) > 0.5:
        # refinement jumped lobes; fall back to the scan for everything
        zs = _scan_zeros(nu, count)
    return zs


def _zeros_unchecked(nu: float, count: int) -> np.ndarray:
    with _zero_lock:
        cached = _zero_cache.get(nu)
        if cached is not None and len(cached) >= count:
            return cached[:count]
    n = max(count, 64, 2 * (0 if cached is None else len(cached)))
    zs = _compute_zeros(nu, n)
    zs.setflags(write=False)
    with _zero_lock:
        _zero_cache[nu] = zs
    return zs[:count]


def bessel_zeros(order, count: int) -> np.ndarray:
    """First `count` positive zeros of J_nu (read-only array)."""
    nu = _as_order(order)
    if count < 1:
        raise DomainError("count must be >= 1")
    return _zeros_unchecked(nu, int(count))


def bessel_zero(order, m: int) -> float:
    """The m-th positive zero j_{nu,m} of J_nu.

    Raises
    ------
    ConvergenceError
        If root refinement does not converge.
    """
    if int(m) != m or m < 1:
        raise DomainError("m must be a positive integer")
    return float(bessel_zeros(order, int(m))[int(m) - 1])
