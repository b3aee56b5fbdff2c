import math

import numpy as np
import pytest

from fracspace.errors import DomainError, UsageError
from fracspace.measure import (
    AlphaRangeWarning,
    DsiScale,
    MeasureSpec,
    complex_weight,
    critical_charge,
    dsi_check,
    hausdorff_dimension,
    positivity_scan,
    weight,
)


def test_simple_weight_reference():
    # 2^(-1/4) / Gamma(3/4)
    assert weight(MeasureSpec.simple(0.75), 2.0) == pytest.approx(0.68621262755932616, rel=1e-14)


def test_bilateral_weight_is_even():
    m = MeasureSpec.simple(0.5, "bilateral")
    x = np.array([0.3, 1.0, 7.0])
    assert np.array_equal(weight(m, x), weight(m, -x))


def test_unilateral_rejects_negative_points():
    with pytest.raises(DomainError):
        weight(MeasureSpec.simple(0.5), -1.0)


def test_product_weight_in_two_dimensions():
    m = MeasureSpec.simple(0.75, dim=2)
    pts = np.array([[1.0, 2.0], [0.5, 3.0]])
    one = MeasureSpec.simple(0.75)
    assert np.allclose(weight(m, pts), [weight(one, a) * weight(one, b) for a, b in pts], rtol=1e-14)


def test_multifractional_is_weighted_sum():
    m = MeasureSpec.multifractional([(0.3, 0.5), (0.7, 1.0)])
    x = np.array([0.2, 2.0])
    expect = 0.3 * weight(MeasureSpec.simple(0.5), x) + 0.7 * weight(MeasureSpec.simple(1.0), x)
    assert np.allclose(weight(m, x), expect, rtol=1e-14)


def test_alpha_outside_preferred_range_warns():
    with pytest.warns(AlphaRangeWarning):
        MeasureSpec.simple(2.0)


@pytest.mark.parametrize("alpha", [0.0, -0.5, float("nan")])
def test_alpha_must_be_positive(alpha):
    with pytest.raises(DomainError):
        MeasureSpec.simple(alpha)


def test_complex_measure_restrictions():
    with pytest.raises(UsageError):
        MeasureSpec("bilateral", 1, 0.5, "complex", (), ((0.0, 1.0),))


def test_complex_weight_reference():
    # x^(alpha-1)[1/Gamma(alpha) + 2C Re(1/Gamma(alpha+iw)) cos(w ln x) + 2C Im(...) sin(w ln x)] (mpmath)
    assert complex_weight(0.5, 2 * math.pi, 0.1, 3.0) == pytest.approx(823.25382021857743, rel=1e-11)


def test_dsi_scale():
    assert DsiScale(2 * math.pi).lam == pytest.approx(math.e, rel=1e-15)
    with pytest.raises(DomainError):
        DsiScale(0.0)


@pytest.mark.parametrize("omega_star", [2 * math.pi, 4 * math.pi, 7.3])
def test_dsi_holds_and_negative_control(omega_star):
    xs = np.logspace(-3, 3, 61)
    assert dsi_check(0.5, omega_star, 0.1, xs).passed
    ctrl = dsi_check(0.5, omega_star, 0.1, xs, lam=1.1 * DsiScale(omega_star).lam)
    assert ctrl.gap > 1e-3


def test_dimensions():
    assert hausdorff_dimension(MeasureSpec.simple(0.5, dim=4)) == 2.0
    cc = critical_charge(4, 2.0, alpha=0.5)
    assert cc.alpha_star == 0.5
    assert cc.scaling_dimension == 0.0
    with pytest.raises(UsageError):
        hausdorff_dimension(MeasureSpec.multifractional([(1.0, 0.5)]))


def test_positivity_scan():
    assert positivity_scan(MeasureSpec.simple(0.75)).passed
    neg = positivity_scan(lambda x: np.cos(np.log(x)))
    assert not neg.passed and neg.gap == pytest.approx(1.0, abs=1e-3)
