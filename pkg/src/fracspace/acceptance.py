"""The acceptance suite: fourteen numbered criteria, each a function that
returns a :class:`CriterionResult` holding its individual reports."""

from __future__ import annotations

import inspect
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import dawsn

from . import crosscheck as cc
from . import operators as ops
from .functions import Bump, ExpDecay, Gaussian, PowerExp, PowerGaussian
from .kernel import KernelSpec, Variant, Weight, envelope_exponent, figure1_series, normalization_A
from .measure import AlphaRangeWarning, MeasureSpec, dsi_check
from .reports import CheckReport
from .transform import delta_sift, forward, general_weight_roundtrip, parseval_gap, parse_grid, roundtrip_error

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_suite"]

_SQRT_2_PI = math.sqrt(2.0 / math.pi)


@dataclass
class CriterionResult:
    number: int
    title: str
    reports: list = field(default_factory=list)
    seconds: float = 0.0
    note: str = ""
    kind: str = "criterion"

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r.passed for r in self.reports)

    @property
    def worst(self) -> CheckReport | None:
        failing = [r for r in self.reports if not r.passed]
        pool = failing or self.reports
        return max(pool, key=_stress) if pool else None

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        nfail = sum(not r.passed for r in self.reports)
        w = self.worst
        tail = f"worst {w.check} gap={w.gap:.3e} tol={w.tol:.1e}" if w else "no checks"
        return (f"{self.kind} {self.number!s:>2} {flag}  {self.title}: {len(self.reports)} checks, "
                f"{nfail} failing, {tail} ({self.seconds:.1f}s)")

    def to_dict(self) -> dict:
        return {self.kind: self.number, "title": self.title, "pass": self.passed,
                "seconds": self.seconds, "note": self.note,
                "reports": [r.to_dict() for r in self.reports]}


def _stress(r: CheckReport) -> float:
    """How close a report is to its threshold (1 = on the edge)."""
    if isinstance(r, _AtLeast):
        return r.tol / r.gap if r.gap > 0 else math.inf
    if r.tol > 0:
        return r.gap / r.tol
    return math.inf if r.gap > 0 else 0.0


def _simple(alpha, support="unilateral"):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AlphaRangeWarning)
        return MeasureSpec.simple(alpha, support)


def _pointwise(check, params, computed, exact, tol) -> CheckReport:
    computed = np.asarray(computed)
    exact = np.asarray(exact)
    rel = np.abs(computed - exact) / np.abs(exact)
    gap = float(np.max(rel))
    return CheckReport(check, params, computed, exact, gap, tol,
                       {"argmax": int(np.argmax(rel)), "nodes": int(exact.size)})


# -- 1 ----------------------------------------------------------------------

def classical_closed_forms():
    """(label, l, function, closed form, grid spec) for the alpha = 1 reductions."""
    lam = 1.0
    return [
        ("cos/gaussian", -0.5, Gaussian(1.0), lambda k: np.exp(-k * k / 2.0), "log:1e-3:5:64"),
        ("sin/gaussian", 0.5, Gaussian(1.0), lambda k: 2.0 / math.sqrt(math.pi) * dawsn(k / math.sqrt(2.0)),
         "log:1e-3:1e2:64"),
        ("cos/expdecay", -0.5, ExpDecay(lam), lambda k: _SQRT_2_PI * lam / (lam * lam + k * k), "log:1e-3:1e2:64"),
        ("sin/expdecay", 0.5, ExpDecay(lam), lambda k: _SQRT_2_PI * k / (lam * lam + k * k), "log:1e-3:1e2:64"),
    ]


def criterion_1(cfg=None) -> list:
    out = []
    m = _simple(1.0)
    for label, l, f, exact, grid in classical_closed_forms():
        k = parse_grid(grid)
        ft = forward(m, KernelSpec(Variant.UNILATERAL_BESSEL, l=l, alpha=1.0), f, k, cfg)
        out.append(_pointwise("classical_reduction", {"case": label, "grid": grid}, ft.values, exact(k), 1e-8))
    return out


# -- 2 ----------------------------------------------------------------------

def criterion_2(cfg=None) -> list:
    k = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    ft = forward(_simple(2.0), KernelSpec(Variant.UNILATERAL_BESSEL, l=0.0, alpha=2.0), Gaussian(1.0), k, cfg)
    return [_pointwise("hankel_pair", {"alpha": 2.0, "l": 0.0}, ft.values, np.exp(-k * k / 2.0), 1e-8)]


# -- 3, 4 -------------------------------------------------------------------

def inversion_sweep():
    """(measure, kernel, function) triples of the round-trip/Parseval sweep.

    For n = 2 only even functions are used: the odd sector of the bilateral
    transform at n = 2 carries |k|^(-1) at the origin and is not
    normalizable.
    """
    cases = []
    for a in (0.5, 0.75, 1.0):
        ls = []
        for l in (-0.5, 0.5, 1.0 - a / 2.0, a / 2.0):
            if all(abs(l - q) > 1e-12 for q in ls):
                ls.append(l)
        for l in ls:
            for f in (Gaussian(1.0), PowerGaussian(1.0, 1.0)):
                cases.append((_simple(a), KernelSpec(Variant.UNILATERAL_BESSEL, l=l, alpha=a), f))
    for a in (0.5, 0.75, 1.0):
        m = _simple(a, "bilateral")
        cases.append((m, KernelSpec(Variant.BILATERAL_E, l=0.5, alpha=a), Gaussian(1.0)))
        cases.append((m, KernelSpec(Variant.BILATERAL_E, l=0.5, alpha=a), PowerGaussian(1.0, 1.0)))
        cases.append((m, KernelSpec(Variant.BILATERAL_E, l=1.5, alpha=a), Gaussian(1.0)))
        cases.append((m, KernelSpec(Variant.BILATERAL_E, l=1.5, alpha=a), PowerGaussian(2.0, 1.0)))
    return cases


def criterion_3(cfg=None) -> list:
    return [roundtrip_error(m, k, f, cfg, tol=1e-6) for m, k, f in inversion_sweep()]


def criterion_4(cfg=None) -> list:
    return [parseval_gap(m, k, f, cfg, tol=1e-6) for m, k, f in inversion_sweep()]


# -- 5 ----------------------------------------------------------------------

def criterion_5(cfg=None) -> list:
    out = []
    ks = (0.7, 1.3, 3.0)
    probes = ops.default_probes(0.5, 10.0, 40)
    for a in (0.5, 0.75, 1.0):
        for l in sorted({-0.5, 0.5, 1.0 - a / 2.0, a / 2.0}):
            for s in (1, -1):
                for k in ks:
                    out.append(ops.eigen_residual(a, l, k, s, probes, tol=1e-5))
        both = np.concatenate([-probes[::-1], probes])
        for n in (1, 2):
            for s in (1, -1):
                for k in ks:
                    out.append(ops.eigen_residual(a, n - 0.5, k, s, both, bilateral=True, tol=1e-5))
    return out


# -- 6 ----------------------------------------------------------------------

class _AtLeast(CheckReport):
    """A report that passes when the gap is at least the threshold."""

    @property
    def passed(self) -> bool:
        return bool(not math.isnan(self.gap) and self.gap >= self.tol)

    def summary(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.check}: gap={self.gap:.3e} >= {self.tol:.1e}"

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["pass"] = self.passed
        d["direction"] = "at_least"
        return d


def at_least(r: CheckReport, threshold: float) -> CheckReport:
    """Re-express a negative control: pass iff ``gap >= threshold``."""
    return _AtLeast(r.check + "_negative_control", r.params, r.value, r.reference, r.gap, threshold, r.diagnostics)


def criterion_6(cfg=None) -> list:
    out = []
    probes = ops.default_probes(0.5, 10.0, 40)
    f = Gaussian(2.0)
    for a in (0.5, 0.75, 1.0):
        out.append(ops.factorization_gap(a, 0.5, f, probes, tol=1e-6))
        bad = [0.25, 0.75] + ([1.0 - a / 2.0] if a != 1.0 else [])
        for l in bad:
            out.append(at_least(ops.factorization_gap(a, l, f, probes), 1e-2))
    return out


# -- 7 ----------------------------------------------------------------------

def criterion_7(cfg=None) -> list:
    good = ops.quadratic_form_gap(0.5, 0.5, PowerExp(1.0, 1.0), tol=1e-6)
    bad = at_least(ops.quadratic_form_gap(0.5, 0.5, ExpDecay(1.0)), 1e-2)
    return [good, bad]


# -- 8 ----------------------------------------------------------------------

def criterion_8(cfg=None) -> list:
    out = []
    setups = [
        (_simple(0.5), KernelSpec(Variant.UNILATERAL_BESSEL, l=0.75, alpha=0.5), (0.8, 1.5, 2.5)),
        (_simple(0.75, "bilateral"), KernelSpec(Variant.BILATERAL_E, l=0.5, alpha=0.75), (-1.5, 0.8, 2.5)),
    ]
    for m, k, centers in setups:
        for c in centers:
            f = Bump(c, 0.5)
            r = delta_sift(m, k, f, c, cfg)
            ref = float(np.real(f(c)))
            gap = abs(complex(r.value) - ref) / abs(ref)
            out.append(CheckReport("delta_sift", {"variant": k.variant.value, "alpha": k.alpha, "l": k.l,
                                                  "center": c, "width": 0.5},
                                   r.value, ref, gap, 1e-4, {"ladder": r.trace}))
    return out


# -- 9 ----------------------------------------------------------------------

def criterion_9(cfg=None, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    ls = rng.uniform(-3.0, 3.0, 50)
    phases = rng.uniform(0.0, 2.0 * math.pi, 50)
    gaps = [abs(normalization_A(float(l), complex(math.cos(t), math.sin(t))) - math.sin(math.pi * l) ** 2)
            for l, t in zip(ls, phases)]
    r1 = CheckReport("normalization_sin2", {"samples": 50, "seed": seed}, max(gaps), 0.0, max(gaps), 1e-12, {})
    exact = [normalization_A(n - 0.5, 1j) for n in (1, 2, 3)]
    gap = max(abs(e - 1.0) for e in exact)
    r2 = CheckReport("normalization_exact", {"n": [1, 2, 3]}, exact, 1.0, gap, 0.0, {})
    return [r1, r2]


# -- 10 ---------------------------------------------------------------------

def criterion_10(cfg=None) -> list:
    out = []
    holds = [(0.5, 1.0, 0.25, 0.5), (0.75, 1.0, 0.375, 0.5)]
    fails = [(0.5, 1.0, 0.5, 0.5), (0.75, 1.0, 0.5, 0.5)]
    for pts in ((1.0, 2.0), (2.0, 1.0)):
        for a, ap, l, lp in holds:
            spec = cc.CrossTermSpec(a, ap, l, lp, *pts)
            r = cc.cross_term(spec, cfg)
            out.append(CheckReport("cross_term_vanishes", _ct_params(spec), r.value, 0.0,
                                   r.trace["ratio"], 1e-5, {"scale": r.trace["scale"], "error": r.error_estimate}))
        for a, ap, l, lp in fails:
            spec = cc.CrossTermSpec(a, ap, l, lp, *pts)
            r = cc.cross_term(spec, cfg)
            out.append(_AtLeast("cross_term_obstruction", _ct_params(spec), r.value, 0.0,
                                r.trace["ratio"], 1e-2, {"scale": r.trace["scale"], "error": r.error_estimate}))
    return out


def _ct_params(spec) -> dict:
    return {"alpha": spec.alpha, "alpha_prime": spec.alpha_prime, "l": spec.l, "l_prime": spec.l_prime,
            "x": spec.x, "x_prime": spec.x_prime}


# -- 11 ---------------------------------------------------------------------

def criterion_11(cfg=None) -> list:
    good = cc.kasner_check([-1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0])
    bad = cc.kasner_check([0.5, 0.5])
    pair = abs(good.diagnostics["pairwise_sum"]) if good.passed else math.inf
    return [
        good,
        _AtLeast("kasner_negative_control", bad.params, bad.value, bad.reference, bad.gap, 1e-12, bad.diagnostics),
        CheckReport("kasner_pairwise", good.params, pair, 0.0, pair, 1e-12, {}),
    ]


# -- 12 ---------------------------------------------------------------------

def criterion_12(cfg=None) -> list:
    out = []
    xs = np.logspace(-3, 3, 61)
    for a in (0.5, 0.75, 1.0):
        for w in (2.0 * math.pi, 4.0 * math.pi, 5.0):
            for C in (0.05, 0.1, 0.3):
                out.append(dsi_check(a, w, C, xs, tol=1e-12))
    on, off = [], []
    for ws in (2.0 * math.pi, 4.0 * math.pi, 5.0):
        for m in (1, 2, 3):
            for n in (-3, -1, 1, 2, 3):
                k = cc.lattice_point(n, ws)
                on.append(cc.lattice_condition(ws, m * ws, 0.0, k).trivial)
                off.append(not cc.lattice_condition(ws, m * ws, 0.0, k * 1.1).trivial)
                off.append(not cc.lattice_condition(ws, m * ws, 0.0, 2.0 if abs(k - 2.0) > 1e-3 else 3.0).trivial)
    bad = sum(not t for t in on) + sum(not t for t in off)
    out.append(CheckReport("lattice", {"on_lattice": len(on), "off_lattice": len(off)},
                           bad, 0, float(bad), 0.0, {}))
    return out


# -- 13 ---------------------------------------------------------------------

def criterion_13(cfg=None) -> list:
    d = figure1_series(0.5)
    origin = max(abs(float(d["c_alpha"][0])), abs(float(d["s_alpha"][0])))
    out = [CheckReport("figure1_origin", {"alpha": 0.5}, origin, 0.0, origin, 0.0, {"x0": float(d["x"][0])})]
    for l in (-0.5, 0.5):
        fit = envelope_exponent(KernelSpec(Variant.UNILATERAL_BESSEL, l=l, alpha=0.5), (5.0, 200.0))
        gap = abs(fit.fitted - 0.25)
        out.append(CheckReport("figure1_envelope", {"alpha": 0.5, "l": l}, fit.fitted, 0.25, gap, 0.02,
                               {"analytic": fit.analytic, "n_extrema": fit.n_extrema, "stderr": fit.stderr}))
    return out


# -- 14 ---------------------------------------------------------------------

def criterion_14(cfg=None) -> list:
    v_np = Weight(lambda x: 1.0 + np.exp(-np.asarray(x) ** 2), 0.0, "1+exp(-x^2)")
    return [
        general_weight_roundtrip(Weight.power(0.5), Weight.power(0.8), Gaussian(1.0), cfg, tol=1e-6),
        general_weight_roundtrip(v_np, Weight.constant(1.0), Gaussian(1.0), cfg, tol=1e-6),
    ]


CRITERIA: dict[int, tuple[str, Callable]] = {
    1: ("classical reduction", criterion_1),
    2: ("Hankel golden pair", criterion_2),
    3: ("round-trip inversion", criterion_3),
    4: ("Parseval/unitarity", criterion_4),
    5: ("eigenvalue equation", criterion_5),
    6: ("factorization uniqueness", criterion_6),
    7: ("integration by parts", criterion_7),
    8: ("delta sifting", criterion_8),
    9: ("bilateral normalization", criterion_9),
    10: ("obstruction demonstration", criterion_10),
    11: ("Kasner arithmetic", criterion_11),
    12: ("DSI and lattice", criterion_12),
    13: ("figure 1 reproduction", criterion_13),
    14: ("general-weight transform", criterion_14),
}


def run_criterion(number: int, cfg=None, seed: int = 0) -> CriterionResult:
    title, fn = CRITERIA[number]
    t0 = time.perf_counter()
    reports = fn(cfg, seed=seed) if "seed" in inspect.signature(fn).parameters else fn(cfg)
    return CriterionResult(number, title, reports, time.perf_counter() - t0)


def run_suite(numbers=None, cfg=None, progress: Callable[[CriterionResult], None] | None = None,
              seed: int = 0) -> list:
    results = []
    for n in (numbers or sorted(CRITERIA)):
        r = run_criterion(n, cfg, seed)
        if progress:
            progress(r)
        results.append(r)
    return results
