import math

import numpy as np
import pytest

from fracspace import operators as ops
from fracspace.errors import ConvergenceError, DomainError, UsageError
from fracspace.functions import ExpDecay, Gaussian, PowerExp, PowerGaussian
from fracspace.operators import OperatorKind, OperatorSpec, StencilConfig


def test_operator_coefficients():
    op = OperatorSpec.Kal(0.5, 0.25)
    assert op.first_order_coeff == -0.5
    assert op.zeroth_order_coeff == pytest.approx((1.5 ** 2 - 0.25) / 4)
    assert OperatorSpec.Dal(0.5, 0.75).shift == pytest.approx(0.0)
    # the two named Laplacians are members of the family
    assert OperatorSpec.K1(0.5).l == 0.75
    assert OperatorSpec.K2(0.5).l == 0.5
    assert OperatorSpec.K1(1.0).zeroth_order_coeff == 0.0
    assert OperatorSpec.K1(0.5).kind is OperatorKind.K1


@pytest.mark.parametrize("order, exact", [(1, np.cos), (2, lambda t: -np.sin(t))])
def test_derivative(order, exact):
    x = np.linspace(0.5, 5.0, 10)
    assert np.allclose(ops.derivative(np.sin, x, order), exact(x), atol=1e-10)


def test_derivative_detects_kinks():
    with pytest.raises(ConvergenceError):
        ops.derivative(lambda t: np.abs(t - 1.04), np.array([1.0]), 1)


def test_apply_rejects_origin():
    with pytest.raises(DomainError):
        ops.apply(OperatorSpec.Kal(0.5, 0.5), Gaussian(1.0), np.array([0.0, 1.0]))


def test_apply_on_power_law():
    # K x^p = [p(p-1) - (1-alpha) p + c0] x^(p-2)
    alpha, l, p = 0.75, 0.3, 2.5
    op = OperatorSpec.Kal(alpha, l)
    x = np.array([0.7, 1.4, 3.0])
    coeff = p * (p - 1) - (1 - alpha) * p + op.zeroth_order_coeff
    assert np.allclose(ops.apply(op, lambda t: t ** p, x), coeff * x ** (p - 2), rtol=1e-8)


def test_apply_sums_axes_in_two_dimensions():
    op2 = OperatorSpec.Kal(0.75, 0.5, dim=2)
    op1 = OperatorSpec.Kal(0.75, 0.5)
    g = Gaussian(1.0)
    pts = np.array([[0.8, 1.3], [2.0, 0.6]])
    f2 = lambda p: g(p[..., 0]) * g(p[..., 1])  # noqa: E731
    expect = [ops.apply(op1, g, a) * g(b) + g(a) * ops.apply(op1, g, b) for a, b in pts]
    assert np.allclose(ops.apply(op2, f2, pts), np.ravel(expect), rtol=1e-8)


@pytest.mark.parametrize("alpha", [0.5, 0.75, 1.0])
@pytest.mark.parametrize("l", [0.25, 0.5, 0.7])
@pytest.mark.parametrize("sign", [1, -1])
def test_eigen_residual(alpha, l, sign):
    assert ops.eigen_residual(alpha, l, 1.3, sign).passed


def test_eigen_residual_bilateral():
    assert ops.eigen_residual(0.75, 0.5, 2.0, 1, np.array([-3.0, -0.7, 0.9, 4.0]), bilateral=True).passed


def test_factorization_only_at_half():
    f = Gaussian(1.0)
    assert ops.factorization_gap(0.75, 0.5, f).passed
    assert ops.factorization_gap(0.75, 0.9, f).gap > 1e-2


def test_ladder_relations():
    for alpha in (0.5, 0.75, 1.0):
        assert ops.ladder_check(alpha, 1.7).passed


@pytest.mark.parametrize("alpha, l, f", [
    (0.5, 0.5, PowerExp(1.0, 1.0)),
    (1.0, 0.5, Gaussian(1.0)),
    (0.75, 0.5, PowerGaussian(1.0, 1.0)),
])
def test_quadratic_form(alpha, l, f):
    r = ops.quadratic_form_gap(alpha, l, f)
    assert r.passed, r.summary()


def test_quadratic_form_negative_control():
    # the boundary term does not vanish for a function finite at the origin
    r = ops.quadratic_form_gap(0.5, 0.5, ExpDecay(1.0))
    assert r.gap > 1.0


def test_sturm_liouville_and_conjugated_forms_agree():
    x = ops.default_probes()
    f = Gaussian(1.5)
    ref = ops.apply_form(0.75, 0.3, f, x, "explicit")
    for form in ("sturm_liouville", "conjugated"):
        assert np.allclose(ops.apply_form(0.75, 0.3, f, x, form), ref, rtol=1e-6, atol=1e-8)
    with pytest.raises(UsageError):
        ops.apply_form(0.75, 0.3, f, x, "bogus")


def test_antisymmetry():
    assert ops.antisymmetry_gap(0.75, Gaussian(1.0), PowerGaussian(1.0, 1.0)).passed


def test_eigenfunction_closed_form_at_alpha_one():
    c = ops.eigenfunction(1.0, -0.5, 2.0)
    x = np.array([0.3, 1.0])
    assert np.allclose(c(x), math.sqrt(2 / math.pi) * np.cos(2.0 * x), rtol=1e-13)


def test_stencil_validation():
    with pytest.raises(DomainError):
        StencilConfig(levels=0)
    with pytest.raises(DomainError):
        StencilConfig(h=-1.0)
