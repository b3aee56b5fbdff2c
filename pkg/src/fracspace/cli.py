"""Command-line entry point.

Exit codes: 0 success or all checks passed, 1 a check failed, 2 usage or
domain error, 3 numerical non-convergence.  Every output starts with a
header recording the package version and the full parsed configuration
(comment lines for CSV, a ``_header`` member for JSON).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from typing import Sequence

import numpy as np

from . import __version__
from . import crosscheck as cc
from . import operators as ops
from .errors import ConvergenceError, DomainError, FracspaceError, UsageError
from .functions import SampledFunction, parse_function
from .kernel import KernelSpec, Variant, Weight, envelope_exponent, eval_kernel, figure1_series, normalization_A
from .measure import (
    AlphaRangeWarning,
    MeasureSpec,
    Support,
    complex_weight,
    critical_charge,
    dsi_check,
    hausdorff_dimension,
    weight,
)
from .quadrature import QuadratureConfig, _jsonable
from .reports import CheckReport
from .specfun import bessel_j, bessel_zeros, gamma, jcal, recip_gamma_complex
from .transform import forward, parse_grid, parseval_gap, roundtrip_error

__all__ = ["main", "build_parser"]

_VARIANT_ALIASES = {
    "cos": Variant.CLASSICAL_COS,
    "sin": Variant.CLASSICAL_SIN,
    "exp": Variant.CLASSICAL_EXP,
    "fourier": Variant.CLASSICAL_EXP,
}


class _CheckFailed(Exception):
    pass


# -- argument helpers ---------------------------------------------------------

def _values(text: str) -> np.ndarray:
    """A grid spec (lin:/log:) or a comma-separated list of numbers."""
    if text.startswith(("lin:", "log:")):
        return parse_grid(text)
    try:
        return np.array([float(t) for t in text.split(",") if t.strip()])
    except ValueError:
        raise UsageError(f"expected numbers or a grid spec, got {text!r}") from None


def _variant(text: str) -> Variant:
    try:
        return _VARIANT_ALIASES.get(text) or Variant(text)
    except ValueError:
        choices = sorted({v.value for v in Variant} | set(_VARIANT_ALIASES))
        raise UsageError(f"unknown variant {text!r}; choose from {', '.join(choices)}") from None


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def _order(args) -> float:
    if getattr(args, "n", None) is not None:
        return args.n - 0.5
    return args.l


def _specs(args) -> tuple[MeasureSpec, KernelSpec]:
    var = _variant(args.variant)
    l = _order(args)
    if var is Variant.CLASSICAL_COS:
        l = -0.5
    elif var is Variant.CLASSICAL_SIN:
        l = 0.5
    kw = {"variant": var, "l": l, "alpha": args.alpha, "A": _complex(args.A), "dim": args.dim}
    if var is Variant.GENERAL_WEIGHT:
        kw["v"] = Weight.power(args.v_alpha) if args.v_alpha else Weight.power(args.alpha)
        kw["w"] = Weight.power(args.w_alpha) if args.w_alpha else Weight.power(args.alpha)
        kw["alpha"] = 1.0
    if var is Variant.COMPLEX_UNILATERAL:
        kw["omega"] = args.omega
    kernel = KernelSpec(**kw)
    support = Support.BILATERAL if kernel.bilateral else Support.UNILATERAL
    if var is Variant.COMPLEX_UNILATERAL:
        measure = MeasureSpec.complex(args.alpha, [(0.0, 1.0), (args.omega, args.C)])
    elif var is Variant.GENERAL_WEIGHT:
        measure = MeasureSpec(support, args.dim, 1.0)
    else:
        measure = MeasureSpec(support, args.dim, args.alpha)
    return measure, kernel


def _cfg(args) -> QuadratureConfig:
    kw = {}
    if getattr(args, "rel_tol", None):
        kw["rel_tol"] = args.rel_tol
    if getattr(args, "abs_tol", None):
        kw["abs_tol"] = args.abs_tol
    return QuadratureConfig(**kw)


def _function(args, support):
    if getattr(args, "input", None):
        return SampledFunction.from_csv(args.input, support)
    return parse_function(args.function)


# -- output -------------------------------------------------------------------

def _config(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _fmt(v) -> str:
    return repr(float(v))


class _Writer:
    def __init__(self, args):
        self.args = args
        fmt = getattr(args, "format", None)
        out = getattr(args, "out", None)
        if fmt is None:
            fmt = "json" if (out and out.endswith(".json")) else None
        self.fmt = fmt

    def _open(self):
        out = getattr(self.args, "out", None)
        return open(out, "w", newline="") if out else _NoClose(sys.stdout)

    def header_lines(self) -> list:
        return [f"# fracspace {__version__}", "# config: " + json.dumps(_jsonable(_config(self.args)), sort_keys=True)]

    def table(self, columns: dict):
        if self.fmt == "json":
            return self.json({k: np.asarray(v) for k, v in columns.items()})
        names = list(columns)
        cols = [np.asarray(columns[n]) for n in names]
        with self._open() as fh:
            for line in self.header_lines():
                fh.write(line + "\n")
            fh.write(",".join(names) + "\n")
            for row in zip(*cols):
                fh.write(",".join(_fmt(v) for v in row) + "\n")

    def json(self, payload):
        doc = {"_header": {"version": __version__, "config": _config(self.args)}}
        if isinstance(payload, dict):
            doc.update(payload)
        else:
            doc["result"] = payload
        with self._open() as fh:
            fh.write(json.dumps(_jsonable(doc), indent=2, sort_keys=False) + "\n")


class _NoClose:
    def __init__(self, fh):
        self.fh = fh

    def __enter__(self):
        return self.fh

    def __exit__(self, *exc):
        self.fh.flush()
        return False


def _emit_report(args, report: CheckReport) -> int:
    _Writer(args).json(report.to_dict())
    return 0 if report.passed else 1


def _emit_reports(args, reports: Sequence[CheckReport]) -> int:
    _Writer(args).json({"reports": [r.to_dict() for r in reports], "pass": all(r.passed for r in reports)})
    return 0 if all(r.passed for r in reports) else 1


# -- specfun --------------------------------------------------------------------

def cmd_specfun_eval(args) -> int:
    x = _values(args.x)
    fn = args.fn
    if fn == "gamma":
        y = gamma(x)
    elif fn == "rgamma":
        y = np.real(recip_gamma_complex(x.astype(complex)))
    elif fn == "bessel_j":
        y = bessel_j(args.order, x)
    else:
        y = jcal(args.order, x)
    _Writer(args).table({"input": x, "output": np.atleast_1d(y)})
    return 0


def cmd_specfun_zeros(args) -> int:
    z = bessel_zeros(args.order, args.count)
    _Writer(args).table({"input": np.arange(1, args.count + 1), "output": z})
    return 0


# -- measure ------------------------------------------------------------------

def cmd_measure_eval(args) -> int:
    x = _values(args.x)
    if args.omega_star is not None:
        y = complex_weight(args.alpha, args.omega_star, args.C, x)
    else:
        m = MeasureSpec.simple(args.alpha, args.support)
        y = weight(m, x)
    _Writer(args).table({"x": x, "weight": np.atleast_1d(y)})
    return 0


def cmd_measure_dsi(args) -> int:
    xs = _values(args.xs)
    return _emit_report(args, dsi_check(args.alpha, args.omega_star, args.C, xs, lam=args.lam, tol=args.tol))


def cmd_measure_dims(args) -> int:
    cc_ = critical_charge(args.D, args.order, args.alpha)
    d_h = hausdorff_dimension(MeasureSpec("unilateral", args.D, args.alpha))
    _Writer(args).json({"hausdorff_dimension": d_h, "critical_charge": cc_.alpha_star,
                        "scaling_dimension": cc_.scaling_dimension})
    return 0


# -- kernel -------------------------------------------------------------------

def cmd_kernel_eval(args) -> int:
    _, kernel = _specs(args)
    k = _values(args.k)
    x = _values(args.x)
    K, X = np.meshgrid(k, x, indexing="ij")
    vals = np.asarray(eval_kernel(kernel, K, X), dtype=complex)
    _Writer(args).table({"k": K.ravel(), "x": X.ravel(), "re": vals.real.ravel(), "im": vals.imag.ravel()})
    return 0


def cmd_kernel_figure1(args) -> int:
    x = _values(args.x) if args.x else None
    _Writer(args).table(figure1_series(args.alpha, x, args.k))
    return 0


def cmd_kernel_envelope(args) -> int:
    fits = {}
    for l in (-0.5, 0.5):
        fit = envelope_exponent(KernelSpec(Variant.UNILATERAL_BESSEL, l=l, alpha=args.alpha))
        fits["c_alpha" if l < 0 else "s_alpha"] = fit._asdict()
    _Writer(args).json(fits)
    return 0


def cmd_kernel_norm(args) -> int:
    a = normalization_A(_order(args), _complex(args.A))
    _Writer(args).json({"l": _order(args), "A": _complex(args.A), "normalization": a,
                        "sin2": math.sin(math.pi * _order(args)) ** 2})
    return 0


# -- transform ------------------------------------------------------------------

def cmd_transform_run(args) -> int:
    measure, kernel = _specs(args)
    f = _function(args, measure.support)
    k = parse_grid(args.kgrid)
    ft = forward(measure, kernel, f, k, _cfg(args))
    vals = np.asarray(ft.values)
    if not ft.meta.get("converged", True):
        raise ConvergenceError(f"forward transform not converged (max error {ft.meta.get('max_error'):.2e})")
    w = _Writer(args)
    if np.iscomplexobj(vals):
        w.table({"k": k, "re": vals.real, "im": vals.imag})
    else:
        w.table({"k": k, "value": vals})
    return 0


def cmd_transform_check(args) -> int:
    measure, kernel = _specs(args)
    f = parse_function(args.function)
    cfg = _cfg(args)
    reports = []
    if args.which in ("roundtrip", "both"):
        reports.append(roundtrip_error(measure, kernel, f, cfg, tol=args.tol))
    if args.which in ("parseval", "both"):
        reports.append(parseval_gap(measure, kernel, f, cfg, tol=args.tol))
    if len(reports) == 1:
        return _emit_report(args, reports[0])
    return _emit_reports(args, reports)


# -- operators ------------------------------------------------------------------

def cmd_operators_check(args) -> int:
    probes = _values(args.probes)
    which = args.which
    if which == "eigen":
        r = ops.eigen_residual(args.alpha, _order(args), args.k, args.sign, probes, tol=args.tol or 1e-5,
                               bilateral=args.bilateral)
    elif which == "factor":
        r = ops.factorization_gap(args.alpha, _order(args), parse_function(args.function), probes,
                                  tol=args.tol or 1e-6)
    elif which == "ladder":
        r = ops.ladder_check(args.alpha, args.k, probes, tol=args.tol or 1e-6)
    else:
        r = ops.quadratic_form_gap(args.alpha, _order(args), parse_function(args.function), tol=args.tol or 1e-6)
    return _emit_report(args, r)


# -- crosscheck -----------------------------------------------------------------

def _ct_spec(args) -> cc.CrossTermSpec:
    return cc.CrossTermSpec(args.alpha, args.alpha_prime, args.l, args.l_prime, args.x, args.x_prime)


def cmd_cc_condition(args) -> int:
    res = cc.orthogonality_condition(_ct_spec(args))
    _Writer(args).json(res._asdict())
    return 0 if res.holds else 1


def cmd_cc_crossterm(args) -> int:
    """Vanishing is checked where the condition holds; elsewhere the ratio
    must stay above the obstruction threshold."""
    from .acceptance import at_least

    spec = _ct_spec(args)
    res = cc.cross_term(spec, _cfg(args))
    ratio = res.trace["ratio"]
    if cc.orthogonality_condition(spec).holds:
        r = CheckReport("cross_term", vars(spec), res.value, 0.0, ratio, args.tol or 1e-5, res.to_dict())
    else:
        r = at_least(CheckReport("cross_term", vars(spec), res.value, 0.0, ratio, 0.0, res.to_dict()),
                     args.tol or 1e-2)
    return _emit_report(args, r)


def cmd_cc_kasner(args) -> int:
    return _emit_report(args, cc.kasner_check(_values(args.couplings).tolist()))


def cmd_cc_lattice(args) -> int:
    res = cc.lattice_condition(args.omega_star, args.omega, args.omega_prime, args.k)
    _Writer(args).json({"trivial_phase": res.trivial, "phase": res.phase})
    return 0


def cmd_cc_parity(args) -> int:
    return _emit_report(args, cc.bilateral_cross_parity(args.alpha, args.n, args.x, args.x_prime, _cfg(args)))


# -- suite ----------------------------------------------------------------------

def cmd_suite(args) -> int:
    from .acceptance import CRITERIA, run_suite

    numbers = sorted(CRITERIA) if not args.criteria else [int(c) for c in args.criteria.split(",")]
    for n in numbers:
        if n not in CRITERIA:
            raise UsageError(f"no criterion {n}")

    def progress(r):
        print(r.line(), file=sys.stderr if args.out is None and args.format == "json" else sys.stdout, flush=True)

    results = run_suite(numbers, _cfg(args), progress, seed=args.seed)
    if not args.quick and not args.criteria:
        from .extended import run_extended

        for r in run_extended(_cfg(args)):
            progress(r)
            results.append(r)
    ok = all(r.passed for r in results)
    if args.out or args.format == "json":
        _Writer(args).json({"pass": ok, "criteria": [r.to_dict() for r in results]})
    print(f"{sum(r.passed for r in results)}/{len(results)} passed", flush=True)
    return 0 if ok else 1


# -- parser ----------------------------------------------------------------------

def _add_output(p):
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("--format", choices=["csv", "json"], help="output format (default: by extension, else CSV)")


def _add_kernel_args(p, default_variant="unilateral"):
    p.add_argument("--variant", default=default_variant,
                   help="cos, sin, exp, unilateral, bilateral, bilateral_e, complex, general_weight")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--l", type=float, default=0.5, help="kernel order")
    p.add_argument("--n", type=int, help="bilateral index; sets l = n - 1/2")
    p.add_argument("--A", default="1j", help="bilateral mixing constant")
    p.add_argument("--omega", type=float, default=0.0, help="log-oscillation frequency (complex variant)")
    p.add_argument("--C", type=float, default=0.1, help="log-oscillation amplitude (complex variant)")
    p.add_argument("--v-alpha", dest="v_alpha", type=float, help="position weight charge (general_weight)")
    p.add_argument("--w-alpha", dest="w_alpha", type=float, help="momentum weight charge (general_weight)")
    p.add_argument("--dim", type=int, default=1)


def _add_tols(p):
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--abs-tol", dest="abs_tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fracspace", description="Fractional momentum transforms and checks.")
    ap.add_argument("--version", action="version", version=f"fracspace {__version__}")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps (echoed in headers)")
    sub = ap.add_subparsers(dest="command", required=True)

    # specfun
    sp = sub.add_parser("specfun", help="special functions").add_subparsers(dest="action", required=True)
    p = sp.add_parser("eval")
    p.add_argument("--fn", choices=["gamma", "rgamma", "bessel_j", "jcal"], default="gamma")
    p.add_argument("--order", type=float, default=0.0)
    p.add_argument("--x", required=True, help="values: a,b,c or lin:/log: grid")
    _add_output(p)
    p.set_defaults(func=cmd_specfun_eval)
    p = sp.add_parser("zeros")
    p.add_argument("--order", type=float, default=0.0)
    p.add_argument("--count", type=int, default=5)
    _add_output(p)
    p.set_defaults(func=cmd_specfun_zeros)

    # measure
    sp = sub.add_parser("measure", help="measure weights and dimensions").add_subparsers(dest="action", required=True)
    p = sp.add_parser("eval")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--support", choices=["unilateral", "bilateral"], default="unilateral")
    p.add_argument("--omega-star", dest="omega_star", type=float, help="log-oscillating weight frequency")
    p.add_argument("--C", type=float, default=0.0)
    p.add_argument("--x", required=True)
    _add_output(p)
    p.set_defaults(func=cmd_measure_eval)
    p = sp.add_parser("dsi-check")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--omega-star", dest="omega_star", type=float, default=2 * math.pi)
    p.add_argument("--C", type=float, default=0.1)
    p.add_argument("--xs", default="log:1e-3:1e3:61")
    p.add_argument("--lam", type=float, help="override the scale ratio (negative control)")
    p.add_argument("--tol", type=float, default=1e-12)
    _add_output(p)
    p.set_defaults(func=cmd_measure_dsi)
    p = sp.add_parser("dims")
    p.add_argument("--D", type=int, default=4)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--order", type=float, default=2.0, help="Laplacian order")
    _add_output(p)
    p.set_defaults(func=cmd_measure_dims)

    # kernel
    sp = sub.add_parser("kernel", help="transform kernels").add_subparsers(dest="action", required=True)
    p = sp.add_parser("eval")
    _add_kernel_args(p)
    p.add_argument("--k", default="1")
    p.add_argument("--x", default="lin:0.1:10:100")
    _add_output(p)
    p.set_defaults(func=cmd_kernel_eval)
    p = sp.add_parser("figure1")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--x", help="x values (default lin:0:30:601)")
    _add_output(p)
    p.set_defaults(func=cmd_kernel_figure1)
    p = sp.add_parser("envelope")
    p.add_argument("--alpha", type=float, default=0.5)
    _add_output(p)
    p.set_defaults(func=cmd_kernel_envelope)
    p = sp.add_parser("norm")
    p.add_argument("--l", type=float, default=0.5)
    p.add_argument("--n", type=int)
    p.add_argument("--A", default="1j")
    _add_output(p)
    p.set_defaults(func=cmd_kernel_norm)

    # transform
    sp = sub.add_parser("transform", help="forward transforms and checks").add_subparsers(dest="action", required=True)
    p = sp.add_parser("run")
    _add_kernel_args(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--function", default="gaussian:sigma=1", help="catalog entry name:k=v,...")
    src.add_argument("--input", help="CSV with header x,value or x,re,im")
    p.add_argument("--kgrid", default="log:1e-3:1e2:64")
    _add_tols(p)
    _add_output(p)
    p.set_defaults(func=cmd_transform_run)
    p = sp.add_parser("check")
    _add_kernel_args(p)
    p.add_argument("--function", default="gaussian:sigma=1")
    p.add_argument("--which", choices=["roundtrip", "parseval", "both"], default="both")
    p.add_argument("--tol", type=float, default=1e-6)
    _add_tols(p)
    _add_output(p)
    p.set_defaults(func=cmd_transform_check)

    # operators
    sp = sub.add_parser("operators", help="Laplacian identities").add_subparsers(dest="action", required=True)
    p = sp.add_parser("check")
    p.add_argument("--which", choices=["eigen", "factor", "ladder", "quadform"], required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--l", type=float, default=0.5)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=float, default=1.3)
    p.add_argument("--sign", type=int, choices=[1, -1], default=1)
    p.add_argument("--bilateral", action="store_true")
    p.add_argument("--function", default="gaussian:sigma=1")
    p.add_argument("--probes", default="lin:0.5:10:40")
    p.add_argument("--tol", type=float)
    _add_output(p)
    p.set_defaults(func=cmd_operators_check)

    # crosscheck
    sp = sub.add_parser("crosscheck", help="obstruction checks").add_subparsers(dest="action", required=True)
    for name, fn in (("condition", cmd_cc_condition), ("crossterm", cmd_cc_crossterm)):
        p = sp.add_parser(name)
        p.add_argument("--alpha", type=float, default=0.5)
        p.add_argument("--alpha-prime", dest="alpha_prime", type=float, default=1.0)
        p.add_argument("--l", type=float, default=0.25)
        p.add_argument("--l-prime", dest="l_prime", type=float, default=0.5)
        p.add_argument("--x", type=float, default=2.0)
        p.add_argument("--x-prime", dest="x_prime", type=float, default=1.0)
        if name == "crossterm":
            p.add_argument("--tol", type=float)
            _add_tols(p)
        _add_output(p)
        p.set_defaults(func=fn)
    p = sp.add_parser("kasner")
    p.add_argument("--couplings", required=True, help="comma-separated couplings")
    _add_output(p)
    p.set_defaults(func=cmd_cc_kasner)
    p = sp.add_parser("lattice")
    p.add_argument("--omega-star", dest="omega_star", type=float, default=4 * math.pi)
    p.add_argument("--omega", type=float, default=4 * math.pi)
    p.add_argument("--omega-prime", dest="omega_prime", type=float, default=0.0)
    p.add_argument("--k", type=float, default=math.e)
    _add_output(p)
    p.set_defaults(func=cmd_cc_lattice)
    p = sp.add_parser("parity")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--x-prime", dest="x_prime", type=float, default=2.0)
    _add_tols(p)
    _add_output(p)
    p.set_defaults(func=cmd_cc_parity)

    # suite
    p = sub.add_parser("suite", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true", help="acceptance criteria only (skip the extended checks)")
    p.add_argument("--criteria", help="comma-separated criterion numbers")
    _add_tols(p)
    _add_output(p)
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AlphaRangeWarning)
            return int(args.func(args))
    except ConvergenceError as exc:
        print(f"fracspace: not converged: {exc}", file=sys.stderr)
        return 3
    except (UsageError, DomainError) as exc:
        print(f"fracspace: {exc}", file=sys.stderr)
        return 2
    except FracspaceError as exc:
        print(f"fracspace: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"fracspace: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
