"""Property-based checks of algebraic identities."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from fracspace import crosscheck as cc
from fracspace.kernel import KernelSpec, Variant, bilateral_factor, eval_kernel, normalization_A
from fracspace.measure import dsi_check
from fracspace.specfun import bessel_j, gamma, jcal, recip_gamma_complex

alphas = st.floats(0.5, 1.0)
positive = st.floats(0.05, 30.0)
orders = st.floats(-0.95, 6.0)


@given(st.floats(0.1, 20.0))
def test_gamma_recurrence(x):
    assert math.isclose(gamma(x + 1.0), x * gamma(x), rel_tol=1e-13)


@given(st.floats(-5.0, 5.0), st.floats(-10.0, 10.0))
def test_complex_reciprocal_gamma_conjugation(a, b):
    z = complex(a, b)
    lhs = recip_gamma_complex(z.conjugate())
    rhs = np.conj(recip_gamma_complex(z))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


@given(st.floats(0.05, 6.0), positive)
def test_bessel_recurrence(nu, z):
    lhs = bessel_j(nu - 1.0, z) + bessel_j(nu + 1.0, z)
    rhs = 2.0 * nu / z * bessel_j(nu, z)
    scale = abs(bessel_j(nu - 1.0, z)) + abs(bessel_j(nu + 1.0, z)) + 1e-300
    assert abs(lhs - rhs) <= 1e-10 * scale


@given(orders, st.floats(-30.0, 30.0))
def test_jcal_even_bitwise(nu, z):
    assert jcal(nu, z) == jcal(nu, -z)


@given(st.floats(-3.0, 3.0), st.floats(0.0, 2 * math.pi))
def test_normalization_unit_modulus(l, theta):
    a = normalization_A(l, complex(math.cos(theta), math.sin(theta)))
    assert abs(a - math.sin(math.pi * l) ** 2) <= 1e-12


@given(alphas, st.integers(0, 4), positive)
def test_bilateral_parity(alpha, n, z):
    nu = n - 0.5
    assert bilateral_factor(alpha, nu, -z) == (-1) ** n * bilateral_factor(alpha, nu, z)


@given(alphas, orders, positive, positive)
def test_unilateral_kernel_symmetric(alpha, l, k, x):
    spec = KernelSpec(Variant.UNILATERAL_BESSEL, l=l, alpha=alpha)
    assert eval_kernel(spec, k, x) == eval_kernel(spec, x, k)


@settings(max_examples=40)
@given(alphas, st.floats(1.0, 20.0), st.floats(0.0, 0.5))
def test_discrete_scale_invariance(alpha, omega_star, C):
    assert dsi_check(alpha, omega_star, C, np.logspace(-2, 2, 9), tol=1e-11).passed


@given(st.floats(0.01, 100.0), st.permutations([0, 1, 2]))
def test_kasner_family(u, perm):
    d = 1.0 + u + u * u
    p = [-u / d, (1.0 + u) / d, u * (1.0 + u) / d]
    r = cc.kasner_check([p[i] for i in perm], tol=1e-13)
    assert r.passed
    assert abs(r.diagnostics["pairwise_sum"]) <= 1e-13


@given(st.floats(0.5, 1.0), st.floats(0.5, 1.0), st.floats(-0.4, 3.0), st.integers(0, 2))
def test_orthogonality_constructed(alpha, alpha_p, lp, n):
    l = lp + (alpha - alpha_p) / 2.0 - 2 * n
    if l <= -1.0 or l + lp + (alpha - alpha_p) / 2.0 + 1.0 <= -1.0:
        return
    res = cc.orthogonality_condition(cc.CrossTermSpec(alpha, alpha_p, l, lp))
    assert res.holds


@given(st.floats(1.0, 20.0), st.integers(-3, 3), st.integers(-3, 3))
def test_lattice_points(omega_star, n, m):
    k = cc.lattice_point(n, omega_star)
    assert cc.lattice_condition(omega_star, m * omega_star, 0.0, k, tol=1e-9).trivial
