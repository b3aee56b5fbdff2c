import math

import numpy as np
import pytest

from fracspace.errors import DomainError, UsageError
from fracspace.functions import Bump, Gaussian, PowerGaussian, Separable
from fracspace.kernel import KernelSpec, Variant, Weight
from fracspace.measure import MeasureSpec
from fracspace.quadrature import Oscillator, damped_bessel_ladder
from fracspace.transform import (
    CostWarning,
    delta_kernel,
    delta_sift,
    forward,
    general_weight_roundtrip,
    inverse,
    parse_grid,
    parseval_gap,
    roundtrip_error,
    worker_count,
)

UNI = Variant.UNILATERAL_BESSEL

# k^(1-alpha/2) int_0^inf x^(alpha/2) exp(-x^2/2) J_l(kx) dx  (mpmath, 25 digits)
FORWARD_REF = [
    (0.75, 0.3, [0.5, 2.0], [0.44225851072802685, 0.58931897682589792]),
    (0.5, -0.25, [0.5, 2.0], [0.79206816169480416, 0.59870413027984602]),
    (1.0, 1.5, [0.5, 2.0], [0.07735353533517303, 0.46280872342469141]),
]


def _uni(alpha, l):
    return MeasureSpec("unilateral", 1, alpha), KernelSpec(UNI, l=l, alpha=alpha)


@pytest.mark.parametrize("alpha, l, ks, ref", FORWARD_REF)
def test_forward_against_reference(alpha, l, ks, ref):
    m, k = _uni(alpha, l)
    ft = forward(m, k, Gaussian(1.0), np.array(ks))
    assert np.allclose(ft.values, ref, rtol=1e-9)
    assert ft.meta["converged"]


def test_forward_off_grid_evaluation():
    m, k = _uni(0.75, 0.3)
    ft = forward(m, k, Gaussian(1.0), np.array([0.1, 1.0]))
    assert ft(2.0) == pytest.approx(0.58931897682589792, rel=1e-8)


@pytest.mark.parametrize("alpha, l", [(0.5, -0.25), (0.75, 0.3), (1.0, 1.5)])
def test_inverse_recovers_function(alpha, l):
    m, k = _uni(alpha, l)
    ft = forward(m, k, Gaussian(1.0), parse_grid("log:1e-2:10:8"))
    x = np.array([0.3, 1.0, 2.2])
    back = inverse(m, k, ft, x)
    assert np.allclose(back.values, np.exp(-x * x / 2), atol=1e-9)


@pytest.mark.parametrize("variant, l, alpha, f", [
    (Variant.UNILATERAL_BESSEL, 0.3, 0.75, Gaussian(1.0)),
    (Variant.BILATERAL_E, 0.5, 0.75, Gaussian(1.0)),
    (Variant.BILATERAL_E, 1.5, 0.75, PowerGaussian(2.0, 1.0)),
])
def test_roundtrip_and_parseval(variant, l, alpha, f):
    support = "unilateral" if variant is Variant.UNILATERAL_BESSEL else "bilateral"
    m = MeasureSpec(support, 1, alpha)
    k = KernelSpec(variant, l=l, alpha=alpha)
    assert roundtrip_error(m, k, f, tol=1e-8).passed
    assert parseval_gap(m, k, f, tol=1e-8).passed


def test_bilateral_bessel_doubles_on_its_parity_sector():
    # the literal kernel integrates both half-lines: each pass doubles
    m = MeasureSpec("bilateral", 1, 0.5)
    k = KernelSpec(Variant.BILATERAL_BESSEL, l=0.5, alpha=0.5)
    f = PowerGaussian(1.0, 1.0)
    x = np.array([-1.3, 0.4, 2.0])
    back = inverse(m, k, forward(m, k, f, parse_grid("lin:-3:3:4")), x)
    assert np.allclose(back.values, 4.0 * f(x), rtol=1e-9)
    r = parseval_gap(m, k, f)
    assert r.value == pytest.approx(2.0 * r.reference, rel=1e-9)


def test_bilateral_bessel_annihilates_wrong_parity():
    # order 3/2 gives an even kernel, blind to odd inputs
    m = MeasureSpec("bilateral", 1, 0.5)
    ft = forward(m, KernelSpec(Variant.BILATERAL_BESSEL, l=1.5, alpha=0.5), PowerGaussian(1.0, 1.0),
                 np.array([0.5, 1.0]))
    assert np.all(ft.values == 0.0)


def test_classical_exp_of_gaussian():
    m = MeasureSpec("bilateral", 1, 1.0)
    ks = np.array([-1.5, 0.0, 0.7])
    ft = forward(m, KernelSpec(Variant.CLASSICAL_EXP, alpha=1.0), Gaussian(1.0), ks)
    assert np.allclose(ft.values, np.exp(-ks * ks / 2), rtol=1e-9)


def test_general_weight_roundtrip():
    r = general_weight_roundtrip(Weight.power(0.5), Weight.power(0.8), Gaussian(1.0), tol=1e-8)
    assert r.passed


def test_separable_two_dimensions():
    m = MeasureSpec("unilateral", 2, 0.75)
    k = KernelSpec(UNI, l=0.3, alpha=0.75, dim=2)
    ft = forward(m, k, Separable((Gaussian(1.0), Gaussian(1.0))), [np.array([0.5, 2.0])] * 2)
    one = np.array([0.44225851072802685, 0.58931897682589792])
    assert np.allclose(ft.values, np.outer(one, one), rtol=1e-9)
    x = np.array([0.5, 1.5])
    back = inverse(m, k, forward(m, k, Separable((Gaussian(1.0), Gaussian(1.0))),
                                 [parse_grid("log:1e-2:10:4")] * 2), [x, x])
    g = np.exp(-x * x / 2)
    assert np.allclose(back.values, np.outer(g, g), atol=1e-8)


def test_non_separable_warns_about_cost():
    m = MeasureSpec("unilateral", 2, 1.0)
    k = KernelSpec(UNI, l=-0.5, alpha=1.0, dim=2)
    f = lambda p: np.exp(-np.sum(np.asarray(p) ** 2, axis=-1) / 2)  # noqa: E731
    f.cutoff = 9.0
    f.scale = 1.0
    with pytest.warns(CostWarning):
        ft = forward(m, k, f, [np.array([0.5, 1.0])] * 2)
    assert ft.values[0, 1] == pytest.approx(math.exp(-(0.25 + 1.0) / 2), rel=1e-6)


def test_multifractional_forward_is_linear_and_has_no_inverse():
    comps = [(0.4, 0.5), (0.6, 1.0)]
    m = MeasureSpec.multifractional(comps)
    ks = np.array([0.5, 2.0])
    ft = forward(m, KernelSpec(UNI, l=0.5, alpha=1.0), Gaussian(1.0), ks)
    parts = [g * forward(*_uni(a, 0.5), Gaussian(1.0), ks).values for g, a in comps]
    assert np.allclose(ft.values, sum(parts), rtol=1e-10)
    with pytest.raises(UsageError):
        inverse(m, KernelSpec(UNI, l=0.5, alpha=1.0), ft)


def test_complex_measure_forward_baseline_term():
    m = MeasureSpec.complex(0.75, [(0.0, 1.0)])
    ks = np.array([0.5, 2.0])
    ft = forward(m, KernelSpec(Variant.COMPLEX_UNILATERAL, l=0.3, alpha=0.75), Gaussian(1.0), ks)
    assert np.allclose(ft.values, [0.44225851072802685, 0.58931897682589792], rtol=1e-9)


def test_delta_kernel_reference():
    m, k = _uni(0.75, 0.3)
    # int drho(k) K(k,1) K(k,1.3) exp(-0.05 k^2) (mpmath)
    assert delta_kernel(m, k, 1.0, 1.3, 0.05) == pytest.approx(1.0251535157934968, rel=1e-12)
    mb = MeasureSpec("bilateral", 1, 0.5)
    kb = KernelSpec(Variant.BILATERAL_BESSEL, l=0.5, alpha=0.5)
    assert delta_kernel(mb, kb, -1.0, 0.8, 0.05) == pytest.approx(-3.4628090935109709, rel=1e-12)


def test_delta_kernel_matches_damped_quadrature():
    alpha, l, x, xp, eps = 0.5, 0.75, 1.2, 2.0, 0.01
    m, k = _uni(alpha, l)
    g = math.gamma(alpha)
    env = lambda q: g * q * (x * xp) ** (1 - alpha / 2)  # noqa: E731
    r = damped_bessel_ladder(env, Oscillator((l, l), (x, xp)), ladder=[eps, eps / 2, eps / 4], endpoint_power=1 + 2 * l)
    assert r.trace["values"][0] == pytest.approx(delta_kernel(m, k, x, xp, eps), rel=1e-8)


@pytest.mark.parametrize("method", ["auto", "kernel"])
def test_delta_sift(method):
    m, k = _uni(0.5, 0.75)
    f = Gaussian(1.0)
    r = delta_sift(m, k, f, 1.5, method=method)
    assert r.value == pytest.approx(f(1.5), rel=1e-6)


def test_delta_sift_rejects_boundary_point():
    m, k = _uni(0.5, 0.75)
    with pytest.raises(DomainError):
        delta_sift(m, k, Bump(1.0, 0.5), 0.0)


@pytest.mark.parametrize("text, n", [("lin:0:1:5", 5), ("log:1e-3:1e2:64", 64)])
def test_parse_grid(text, n):
    g = parse_grid(text)
    assert g.size == n and g[0] == float(text.split(":")[1])


@pytest.mark.parametrize("text", ["lin:0:1", "log:0:1:4", "cubic:0:1:4", "lin:0:1:0"])
def test_parse_grid_errors(text):
    with pytest.raises(UsageError):
        parse_grid(text)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("FRACSPACE_WORKERS", "3")
    assert worker_count() == 3
    monkeypatch.delenv("FRACSPACE_WORKERS")
    assert worker_count() >= 1
