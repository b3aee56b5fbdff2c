import math

import numpy as np
import pytest

from fracspace.errors import DomainError, ParityError, UsageError
from fracspace.kernel import (
    KernelSpec,
    Variant,
    Weight,
    bilateral_factor,
    c_alpha,
    envelope_exponent,
    eval_kernel,
    figure1_series,
    half_integer_n,
    normalization_A,
    s_alpha,
)


def test_fractional_cosine_sine_reference():
    # Gamma(1/2) 2^(3/4) J_{-+1/2}(2) (mpmath)
    assert c_alpha(0.5, 1.0, 2.0) == pytest.approx(-0.69987276614333103, rel=1e-13)
    assert s_alpha(0.5, 1.0, 2.0) == pytest.approx(1.5292498932342851, rel=1e-13)


def test_alpha_one_reduces_to_trig():
    x = np.linspace(0.0, 20.0, 41)
    assert np.allclose(c_alpha(1.0, 1.0, x), math.sqrt(2.0 / math.pi) * np.cos(x), atol=1e-13)
    assert np.allclose(s_alpha(1.0, 1.0, x), math.sqrt(2.0 / math.pi) * np.sin(x), atol=1e-13)


@pytest.mark.parametrize("nu", [-1.5, -0.5, 0.5, 1.5, 2.5])
def test_bilateral_factor_parity(nu):
    z = np.linspace(0.1, 15, 30)
    sign = (-1) ** int(round(nu + 0.5))
    assert np.allclose(bilateral_factor(0.75, nu, -z), sign * bilateral_factor(0.75, nu, z), rtol=1e-14)


def test_bilateral_factor_needs_half_integer():
    with pytest.raises(ParityError):
        bilateral_factor(0.5, 0.3, 1.0)


def test_bilateral_e_definition():
    spec = KernelSpec(Variant.BILATERAL_E, l=1.5, alpha=0.75, A=2j)
    z = np.array([-2.0, 0.7])
    expect = 0.5 * (bilateral_factor(0.75, -1.5, z) + 2j * bilateral_factor(0.75, 1.5, z))
    assert np.allclose(eval_kernel(spec, 1.0, z), expect, rtol=1e-15)


def test_multi_dimensional_kernel_is_product():
    spec = KernelSpec(Variant.UNILATERAL_BESSEL, l=0.3, alpha=0.75, dim=2)
    one = KernelSpec(Variant.UNILATERAL_BESSEL, l=0.3, alpha=0.75)
    k, x = np.array([1.0, 2.0]), np.array([0.5, 1.5])
    assert eval_kernel(spec, k, x) == pytest.approx(eval_kernel(one, 1.0, 0.5) * eval_kernel(one, 2.0, 1.5))
    with pytest.raises(DomainError):
        eval_kernel(spec, 1.0, 1.0)


def test_general_weight_kernel():
    v = Weight.power(0.5)
    spec = KernelSpec(Variant.GENERAL_WEIGHT, v=v, w=Weight.constant(2.0))
    val = eval_kernel(spec, 1.5, -0.8)
    assert val == pytest.approx(np.exp(-1.2j) / math.sqrt(2 * math.pi * 2.0 * v(-0.8)), rel=1e-14)
    with pytest.raises(UsageError):
        KernelSpec(Variant.GENERAL_WEIGHT, v=v)


@pytest.mark.parametrize("kw, err", [
    ({"variant": Variant.UNILATERAL_BESSEL, "l": -1.0}, DomainError),
    ({"variant": Variant.BILATERAL_BESSEL, "l": 0.3}, ParityError),
    ({"variant": Variant.UNILATERAL_BESSEL, "alpha": 0.0}, DomainError),
])
def test_kernel_spec_validation(kw, err):
    with pytest.raises(err):
        KernelSpec(**kw)


def test_unilateral_rejects_negative_arguments():
    with pytest.raises(DomainError):
        eval_kernel(KernelSpec(Variant.UNILATERAL_BESSEL), 1.0, -1.0)


@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_half_integer_n(n):
    assert half_integer_n(n - 0.5) == n


def test_normalization_exact_at_half_integers():
    for n in (1, 2, 3):
        assert normalization_A(n - 0.5, 1j) == 1.0
    assert normalization_A(0.25, 1.0) == pytest.approx(math.sin(math.pi * 0.25) ** 2, abs=1e-15)


def test_figure1_series_shape():
    s = figure1_series()
    assert list(s) == ["x", "c_alpha", "s_alpha", "c_1", "s_1"]
    assert s["x"].size == 601 and s["x"][0] == 0.0
    # fractional kernels vanish at the origin for alpha < 1
    assert s["c_alpha"][0] == 0.0 and s["s_alpha"][0] == 0.0
    assert s["c_1"][0] == pytest.approx(math.sqrt(2 / math.pi))


@pytest.mark.parametrize("l, expected", [(-0.5, 0.25), (0.5, 0.25)])
def test_envelope_exponent(l, expected):
    # |c_alpha| ~ x^((1-alpha)/2) at large x
    fit = envelope_exponent(KernelSpec(Variant.UNILATERAL_BESSEL, l=l, alpha=0.5))
    assert fit.analytic == expected
    assert fit.fitted == pytest.approx(expected, abs=0.02)
