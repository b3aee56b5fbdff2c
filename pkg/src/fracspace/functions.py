"""Test-function catalog and the sampled-function container.

Catalog members are analytic handles defined on the whole real line; on a
unilateral space only ``x > 0`` is used.  Each member carries the metadata
the transform engine needs: the power of its behaviour at the origin, its
parity, a length scale, a cutoff beyond which it is negligible and any
breakpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, UsageError
from .measure import Support

__all__ = [
    "CatalogFunction",
    "Gaussian",
    "ExpDecay",
    "PowerGaussian",
    "PowerExp",
    "Bump",
    "Separable",
    "SampledFunction",
    "parse_function",
    "CATALOG",
]

# relative size below which a catalog function counts as negligible
_NEGLIGIBLE = 1e-22
_LOG_NEG = -math.log(_NEGLIGIBLE)


class CatalogFunction:
    """Base class for analytic test functions.

    Attributes
    ----------
    origin_power : float or None
        ``beta`` in ``f(x) ~ x^beta`` as ``x -> 0+`` (with an analytic
        cofactor); None when ``f`` vanishes identically near the origin.
    parity : {"even", "odd", None}
        Parity on the real line, None if neither.
    scale : float
        Length over which the function varies.
    cutoff : float
        ``|f(x)|`` is negligible for ``|x| > cutoff``.
    """

    name = "function"
    origin_power: float | None = 0.0
    parity: str | None = "even"

    def __call__(self, x):
        raise NotImplementedError

    @property
    def params(self) -> dict:
        return {}

    @property
    def scale(self) -> float:
        return 1.0

    @property
    def cutoff(self) -> float:
        return math.inf

    @property
    def breakpoints(self) -> tuple:
        return ()

    @property
    def k_scale(self) -> float:
        """Momentum scale at which the transform turns over."""
        return 1.0 / self.scale

    def sector_powers(self) -> dict:
        """Origin powers of the even and odd parts on the half-line.

        Returns a dict ``{0: beta_even, 1: beta_odd}`` holding only the
        parts that are present.  ``math.inf`` marks a part that vanishes
        near the origin.
        """
        beta = math.inf if self.origin_power is None else self.origin_power
        if self.parity == "even":
            return {0: beta}
        if self.parity == "odd":
            return {1: beta}
        if self.origin_power is None:
            return {0: math.inf, 1: math.inf}
        return {0: 0.0, 1: 1.0}

    def spec(self) -> str:
        p = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}:{p}" if p else self.name

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(f'{k}={v:g}' for k, v in self.params.items())})"


@dataclass(frozen=True, repr=False)
class Gaussian(CatalogFunction):
    """``exp(-x^2 / (2 sigma^2))``."""

    sigma: float = 1.0
    name = "gaussian"

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-0.5 * (x / self.sigma) ** 2)

    @property
    def params(self):
        return {"sigma": self.sigma}

    @property
    def scale(self):
        return self.sigma

    @property
    def cutoff(self):
        return self.sigma * math.sqrt(2.0 * _LOG_NEG)


@dataclass(frozen=True, repr=False)
class ExpDecay(CatalogFunction):
    """``exp(-lam |x|)``."""

    lam: float = 1.0
    name = "expdecay"

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError("lam must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-self.lam * np.abs(x))

    @property
    def params(self):
        return {"lam": self.lam}

    @property
    def scale(self):
        return 1.0 / self.lam

    @property
    def cutoff(self):
        return _LOG_NEG / self.lam


def _signed_power(x, p):
    """x^p with the odd/even continuation for integer p, |x|^p otherwise."""
    if float(p).is_integer():
        return np.power(x, int(p))
    return np.abs(x) ** p


@dataclass(frozen=True, repr=False)
class PowerGaussian(CatalogFunction):
    """``x^p exp(-x^2 / sigma^2)``; ``|x|^p`` on the negative axis for
    non-integer p."""

    p: float = 1.0
    sigma: float = 1.0
    name = "powergaussian"

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")
        if self.p < 0:
            raise DomainError("power must be non-negative")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return _signed_power(x, self.p) * np.exp(-((x / self.sigma) ** 2))

    @property
    def origin_power(self):
        return float(self.p)

    @property
    def parity(self):
        if float(self.p).is_integer() and int(self.p) % 2 == 1:
            return "odd"
        return "even"

    @property
    def params(self):
        return {"p": self.p, "sigma": self.sigma}

    @property
    def scale(self):
        return self.sigma

    @property
    def cutoff(self):
        return self.sigma * (math.sqrt(_LOG_NEG) + self.p)


@dataclass(frozen=True, repr=False)
class PowerExp(CatalogFunction):
    """``x^p exp(-lam |x|)``; used for the boundary-term identities."""

    p: float = 1.0
    lam: float = 1.0
    name = "powerexp"

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError("lam must be positive")
        if self.p < 0:
            raise DomainError("power must be non-negative")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return _signed_power(x, self.p) * np.exp(-self.lam * np.abs(x))

    @property
    def origin_power(self):
        return float(self.p)

    @property
    def parity(self):
        if float(self.p).is_integer() and int(self.p) % 2 == 1:
            return "odd"
        return "even"

    @property
    def params(self):
        return {"p": self.p, "lam": self.lam}

    @property
    def scale(self):
        return 1.0 / self.lam

    @property
    def cutoff(self):
        return (_LOG_NEG + 4.0 * self.p) / self.lam


@dataclass(frozen=True, repr=False)
class Bump(CatalogFunction):
    """Smooth compactly supported bump ``exp(1 - 1/(1-u^2))``, ``u = (x-c)/w``.

    The peak value is 1 at ``x = center``.
    """

    center: float = 1.0
    width: float = 0.5
    name = "bump"

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError("width must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.width
        inside = np.abs(u) < 1.0
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = np.where(inside, np.exp(1.0 - 1.0 / (1.0 - u * u)), 0.0)
        return out

    @property
    def origin_power(self):
        return None if abs(self.center) >= self.width else 0.0

    @property
    def parity(self):
        return "even" if self.center == 0 else None

    @property
    def params(self):
        return {"center": self.center, "width": self.width}

    @property
    def scale(self):
        return self.width / 4.0

    @property
    def cutoff(self):
        return abs(self.center) + self.width

    @property
    def breakpoints(self):
        return tuple(sorted({abs(self.center - self.width), abs(self.center + self.width)} - {0.0}))

    @property
    def k_scale(self):
        return 2.0 / self.width


@dataclass(frozen=True)
class Separable:
    """Product ``f(x) = prod_mu f_mu(x^mu)`` of one-axis functions."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise UsageError("separable function needs at least one factor")

    @property
    def dim(self) -> int:
        return len(self.factors)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DomainError(f"points need a trailing axis of length {self.dim}")
        out = np.ones(x.shape[:-1])
        for mu, f in enumerate(self.factors):
            out = out * f(x[..., mu])
        return out


CATALOG: dict[str, type] = {
    "gaussian": Gaussian,
    "expdecay": ExpDecay,
    "powergaussian": PowerGaussian,
    "powerexp": PowerExp,
    "bump": Bump,
}


def parse_function(text: str) -> CatalogFunction:
    """Parse ``name:key=value,...`` or ``name:v1,v2`` into a catalog entry.

    >>> parse_function("gaussian:sigma=2")
    Gaussian(sigma=2)
    """
    name, _, rest = text.strip().partition(":")
    cls = CATALOG.get(name.lower())
    if cls is None:
        raise UsageError(f"unknown catalog function {name!r}; choose from {sorted(CATALOG)}")
    kwargs = {}
    positional = []
    if rest:
        for item in rest.split(","):
            if "=" in item:
                k, v = item.split("=", 1)
                kwargs[k.strip()] = float(v)
            else:
                positional.append(float(item))
    try:
        return cls(*positional, **kwargs)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {name}: {exc}") from None


# ---------------------------------------------------------------------------


@dataclass
class SampledFunction:
    """Values on a tensor-product grid.

    Parameters
    ----------
    axes : sequence of 1-D arrays
        Strictly increasing nodes, one array per dimension.
    values : ndarray
        Real or complex values of shape ``tuple(len(a) for a in axes)``.
    domain_side : Support
        Unilateral grids must have positive nodes.
    evaluator : callable, optional
        Off-grid evaluator ``evaluator(points)`` for one-axis functions (set
        by the transform engine to its spectral representation).  Without
        it, one-axis data are interpolated by a cubic spline, continued by
        a power law toward the origin and by zero beyond the last node.
    meta : dict
        Free-form diagnostics (e.g. quadrature error estimates).
    """

    axes: Sequence[np.ndarray]
    values: np.ndarray
    domain_side: Support = Support.UNILATERAL
    evaluator: Callable | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        self.values = np.asarray(self.values)
        self.domain_side = Support(self.domain_side)
        shape = tuple(a.size for a in self.axes)
        if self.values.shape != shape:
            raise DomainError(f"values shape {self.values.shape} does not match grid {shape}")
        for a in self.axes:
            if a.ndim != 1 or a.size < 2:
                raise DomainError("each axis needs at least two nodes")
            if np.any(np.diff(a) <= 0):
                raise DomainError("axis nodes must be strictly increasing")
            if self.domain_side is Support.UNILATERAL and a[0] <= 0:
                raise DomainError("unilateral nodes must be positive")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("values must be finite")
        self._spline = None

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def grid(self) -> np.ndarray:
        """Node coordinates, trailing axis of length ``dim``."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    @property
    def cutoff(self) -> float:
        return float(max(np.max(np.abs(a)) for a in self.axes))

    @property
    def scale(self) -> float:
        a = self.axes[0]
        return float(8.0 * np.median(np.diff(a)))

    origin_power = None
    parity = None
    breakpoints = ()

    def sector_powers(self) -> dict:
        return {0: None, 1: None}

    def __call__(self, x):
        if self.dim != 1:
            raise UsageError("off-grid evaluation is provided for one-axis data only")
        if self.evaluator is not None:
            return self.evaluator(x)
        return self._interp(np.asarray(x, dtype=float))

    def _interp(self, x):
        nodes = self.axes[0]
        vals = self.values
        if self._spline is None:
            self._spline = CubicSpline(nodes, vals, extrapolate=False)
        out = np.asarray(self._spline(x))
        out = np.where(np.isnan(out), 0.0, out)
        if self.domain_side is Support.UNILATERAL:
            lo = x < nodes[0]
            if np.any(lo):
                y0, y1 = vals[0], vals[1]
                if np.isrealobj(vals) and y0 != 0 and y1 != 0 and np.sign(y0) == np.sign(y1):
                    beta = math.log(y1 / y0) / math.log(nodes[1] / nodes[0])
                    out = np.where(lo, y0 * (np.abs(x) / nodes[0]) ** beta, out)
                else:
                    out = np.where(lo, y0, out)
        return out

    @classmethod
    def from_csv(cls, path, domain_side=Support.UNILATERAL) -> "SampledFunction":
        """Read a one-axis CSV with header ``x,value`` or ``x,re,im``."""
        with open(path) as fh:
            lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise UsageError(f"{path}: empty input")
        header = [h.strip().lower() for h in lines[0].split(",")]
        if header not in (["x", "value"], ["x", "re", "im"]):
            raise UsageError(f"{path}: header must be 'x,value' or 'x,re,im', got {lines[0].strip()!r}")
        try:
            data = np.array([[float(c) for c in ln.split(",")] for ln in lines[1:]])
        except ValueError as exc:
            raise UsageError(f"{path}: {exc}") from None
        if data.ndim != 2 or data.shape[1] != len(header):
            raise UsageError(f"{path}: ragged rows")
        vals = data[:, 1] if len(header) == 2 else data[:, 1] + 1j * data[:, 2]
        return cls((data[:, 0],), vals, domain_side)
