import math

import numpy as np
import pytest

from fracspace.errors import DomainError
from fracspace.quadrature import (
    Oscillator,
    QuadratureConfig,
    Strategy,
    damped_bessel_ladder,
    integrate_bessel_semiinfinite,
    integrate_finite,
    neville_at_zero,
)


def test_finite_endpoint_singularity():
    # int_0^1 t^(-1/2) cos t dt (mpmath)
    r = integrate_finite(lambda t: t ** -0.5 * np.cos(t), 0.0, 1.0)
    assert r.converged
    assert r.strategy is Strategy.FINITE
    assert r.value == pytest.approx(1.8090484758005386, rel=1e-12)


def test_finite_breakpoints():
    r = integrate_finite(lambda t: np.abs(t - 0.3), 0.0, 1.0, breakpoints=[0.3])
    assert r.value == pytest.approx(0.5 * (0.3 ** 2 + 0.7 ** 2), rel=1e-13)


def test_finite_rejects_empty_interval():
    with pytest.raises(DomainError):
        integrate_finite(np.sin, 1.0, 1.0)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.5, 3.0])
def test_semi_infinite_bessel_integral(nu):
    # int_0^inf J_nu(t) dt = 1
    r = integrate_bessel_semiinfinite(lambda t: np.ones_like(t), Oscillator((nu,), (1.0,)))
    assert r.converged
    assert r.value == pytest.approx(1.0, rel=1e-8)


def test_damped_ladder_conditionally_convergent():
    # int_0^inf J_{3/2}(k)/k dk = 2/3
    r = damped_bessel_ladder(lambda k: 1.0 / k, Oscillator((1.5,), (1.0,)), endpoint_power=0.5)
    assert r.strategy is Strategy.REGULARIZED
    assert r.value == pytest.approx(2.0 / 3.0, rel=1e-8)


def test_neville_extrapolates_polynomial():
    x = [0.1, 0.2, 0.3]
    y = [2 + 3 * t - t * t for t in x]
    assert neville_at_zero(x, y) == pytest.approx(2.0, abs=1e-13)


def test_oscillator_partition_uses_fastest_factor():
    osc = Oscillator((0.0, 0.5), (1.0, 2.0))
    z = osc.partition_zeros(3)
    assert np.allclose(z, np.arange(1, 4) * math.pi / 2.0)


@pytest.mark.parametrize("kw", [{"rel_tol": 0.0}, {"regularization_ladder": (1e-3, 1e-2, 1e-4)},
                                {"regularization_ladder": (1e-3, 1e-4)},
                                {"zero_partition_terms": 5}])
def test_config_validation(kw):
    with pytest.raises(DomainError):
        QuadratureConfig(**kw)


def test_result_to_dict_is_jsonable():
    import json

    r = integrate_finite(np.exp, 0.0, 1.0)
    d = r.to_dict()
    json.dumps(d)
    assert d["strategy"] == "finite"
    assert d["value"] == pytest.approx(math.e - 1.0, rel=1e-14)


def test_ladder_needs_three_rungs():
    with pytest.raises(DomainError):
        damped_bessel_ladder(lambda k: 1.0 / k, Oscillator((1.5,), (1.0,)), ladder=[1e-3, 1e-4])
