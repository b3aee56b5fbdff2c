import math

import numpy as np
import pytest

from fracspace.errors import DomainError, PoleError
from fracspace.specfun import SERIES_RADIUS, bessel_j, bessel_zero, bessel_zeros, gamma, jcal, recip_gamma_complex, rgamma

# Reference values computed with mpmath at 30 digits.
GAMMA_REF = [
    (0.75, 1.2254167024651776),
    (0.3, 2.9915689876875907),
    (-0.5, -3.5449077018110321),
    (2.5, 1.329340388179137),
    (7.25, 1155.3810139199897),
]

BESSEL_REF = [
    (0.25, 1.0, 0.75223133334079006),
    (-0.25, 3.0, -0.38750665401061038),
    (0.5, 10.0, -0.13726373575505048),
    (1.3, 20.0, -0.012530333619979312),
    (0.0, 50.0, 0.055812327669251815),
    (2.5, 0.1, 0.00016808871900334129),
    (-0.75, 7.9, -0.12576028518235619),
    (-0.75, 8.1, -0.17161506434352564),
    (3.5, 35.0, -0.11050655237711016),
]

ZEROS_REF = {
    0.0: [2.4048255576957728, 5.5200781102863106, 8.6537279129110122],
    0.25: [2.7808877239949776, 5.9061426988424923, 9.0423836635832604],
    1.5: [4.4934094579090642, 7.7252518369377072, 10.9041216594289],
}


@pytest.mark.parametrize("x, ref", GAMMA_REF)
def test_gamma_reference(x, ref):
    assert gamma(x) == pytest.approx(ref, rel=1e-13)
    assert rgamma(x) == pytest.approx(1.0 / ref, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -4.0])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma(x)


def test_rgamma_is_zero_at_poles():
    assert rgamma(-3.0) == 0.0


def test_recip_gamma_complex():
    r = recip_gamma_complex(0.5 + 2j)
    assert r == pytest.approx(7.6580369317474152 + 5.1556679029940514j, rel=1e-12)
    # |Gamma(1+i)|^2 = pi / sinh(pi)
    g = 1.0 / recip_gamma_complex(1 + 1j)
    assert abs(g) ** 2 == pytest.approx(math.pi / math.sinh(math.pi), rel=1e-13)


@pytest.mark.parametrize("nu, z, ref", BESSEL_REF)
def test_bessel_reference(nu, z, ref):
    assert bessel_j(nu, z) == pytest.approx(ref, rel=1e-11, abs=1e-15)


def test_bessel_vectorized_across_series_boundary():
    z = np.linspace(SERIES_RADIUS - 0.5, SERIES_RADIUS + 0.5, 11)
    vals = bessel_j(0.3, z)
    assert vals.shape == z.shape
    # continuity across the switch between series and large-argument branch
    assert np.max(np.abs(np.diff(vals))) < 0.05


def test_bessel_half_order_closed_form():
    z = np.array([0.5, 3.0, 17.0, 60.0])
    assert np.allclose(bessel_j(0.5, z), np.sqrt(2 / (np.pi * z)) * np.sin(z), rtol=1e-12, atol=1e-15)
    assert np.allclose(bessel_j(-0.5, z), np.sqrt(2 / (np.pi * z)) * np.cos(z), rtol=1e-12, atol=1e-15)


def test_jcal_origin_and_evenness():
    assert jcal(0.25, 0.0) == pytest.approx(0.92772960857900084, rel=1e-14)
    assert jcal(-0.75, 3.0) == pytest.approx(-1.010674482715081, rel=1e-12)
    z = np.linspace(0.1, 20, 50)
    assert np.array_equal(jcal(1.5, z), jcal(1.5, -z))


def test_integer_order_negative_argument():
    assert bessel_j(2.0, -1.0) == pytest.approx(bessel_j(2.0, 1.0), rel=1e-15)
    assert bessel_j(1.0, -1.0) == pytest.approx(-bessel_j(1.0, 1.0), rel=1e-15)


@pytest.mark.parametrize("nu, z", [(-1.5, 1.0), (0.5, -1.0)])
def test_bessel_domain(nu, z):
    with pytest.raises(DomainError):
        bessel_j(nu, z)


@pytest.mark.parametrize("nu", sorted(ZEROS_REF))
def test_zeros_reference(nu):
    assert np.allclose(bessel_zeros(nu, 3), ZEROS_REF[nu], rtol=1e-13)
    assert bessel_zero(nu, 2) == pytest.approx(ZEROS_REF[nu][1], rel=1e-13)


def test_zeros_negative_half_order_are_cosine_zeros():
    assert np.allclose(bessel_zeros(-0.5, 4), (np.arange(4) + 0.5) * np.pi, rtol=1e-13)


def test_zeros_domain():
    with pytest.raises(DomainError):
        bessel_zeros(-1.5, 3)
