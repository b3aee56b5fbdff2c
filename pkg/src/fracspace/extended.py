"""Checks run by the full suite in addition to the numbered criteria:
consistency identities that are cheap to state but not part of the
acceptance list."""

from __future__ import annotations

import time
import warnings

import numpy as np
from scipy.special import gamma, hyp1f1

from . import operators as ops
from .acceptance import CriterionResult
from .functions import Bump, Gaussian, PowerGaussian
from .kernel import KernelSpec, Variant, Weight
from .measure import AlphaRangeWarning, MeasureSpec, positivity_scan
from .reports import CheckReport
from .transform import forward, general_weight_roundtrip, parseval_gap

__all__ = ["EXTENDED", "run_extended"]


def bump_parseval(cfg=None) -> list:
    m = MeasureSpec.simple(0.75, "bilateral")
    k = KernelSpec(Variant.BILATERAL_E, l=0.5, alpha=0.75)
    return [parseval_gap(m, k, Bump(0.5, 1.0), cfg, tol=1e-6)]


def operator_forms(cfg=None) -> list:
    x = ops.default_probes()
    f = Gaussian(1.5)
    out = []
    for alpha, l in ((0.5, 0.25), (0.75, 0.5), (1.0, 1.3)):
        ref = ops.apply_form(alpha, l, f, x, "explicit")
        scale = float(np.max(np.abs(ref)))
        for form in ("sturm_liouville", "conjugated"):
            gap = float(np.max(np.abs(ops.apply_form(alpha, l, f, x, form) - ref))) / scale
            out.append(CheckReport("operator_form", {"alpha": alpha, "l": l, "form": form},
                                   gap, 0.0, gap, 1e-6, {"scale": scale}))
    return out


def antisymmetry(cfg=None) -> list:
    return [ops.antisymmetry_gap(a, Gaussian(1.0), PowerGaussian(1.0, 1.0), cfg) for a in (0.5, 0.75, 1.0)]


def general_weight_closed_form(cfg=None) -> list:
    """The general-weight transform with v = w = v_alpha of a Gaussian
    against its closed form, plus the round trip for the same weights."""
    alpha = 0.5
    ks = np.array([-2.0, -0.5, 0.3, 1.0, 2.5])
    f = Gaussian(1.0)
    v = Weight.power(alpha)
    gw = forward(MeasureSpec("bilateral", 1, 1.0), KernelSpec(Variant.GENERAL_WEIGHT, v=v, w=v), f, ks, cfg)
    # int |x|^(s-1) exp(-x^2/2) cos(kx) dx over R, s = (alpha + 1)/2
    s = (alpha + 1.0) / 2.0
    moment = 2.0 ** (s / 2.0) * gamma(s / 2.0) * hyp1f1(s / 2.0, 0.5, -ks * ks / 2.0)
    exact = moment / np.sqrt(2.0 * np.pi * gamma(alpha) * v(ks))
    a = np.asarray(gw.values)
    gap = float(np.max(np.abs(a - exact) / np.abs(exact)))
    rt = general_weight_roundtrip(v, v, f, cfg, tol=1e-6)
    return [CheckReport("weight_closed_form", {"alpha": alpha}, a, exact, gap, 1e-8, {}), rt]


def weight_positivity(cfg=None) -> list:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AlphaRangeWarning)
        specs = [MeasureSpec.simple(a) for a in (0.5, 0.75, 1.0)]
        specs.append(MeasureSpec.multifractional([(0.5, 0.5), (0.5, 1.0)]))
    return [positivity_scan(s) for s in specs]


EXTENDED = {
    "E1": ("Parseval on a compactly supported bump", bump_parseval),
    "E2": ("equivalent Laplacian forms", operator_forms),
    "E3": ("derivative antisymmetry", antisymmetry),
    "E4": ("general weight closed form", general_weight_closed_form),
    "E5": ("measure positivity", weight_positivity),
}


def run_extended(cfg=None) -> list:
    out = []
    for key, (title, fn) in EXTENDED.items():
        t0 = time.perf_counter()
        reports = fn(cfg)
        out.append(CriterionResult(key, title, reports, time.perf_counter() - t0, kind="extended"))
    return out
