import math

import pytest

from fracspace import crosscheck as cc
from fracspace.errors import DomainError

# sqrt(2) * int_0^inf k^(3/4) J_{1/4}(k) J_{1/2}(2k) dk, the (alpha, alpha') = (1/2, 1),
# (l, l') = (1/4, 1/2) cross term at (x, x') = (1, 2) normalized by the unit
# diagonal: closed form through 2F1 (mpmath, confirmed by damped quadrature)
CROSS_TERM_1_2 = 0.20349347148290179


@pytest.mark.parametrize("a, ap, l, lp, holds, n, branch", [
    (0.5, 1.0, 0.25, 0.5, True, 0, "first"),
    (0.75, 1.0, 0.375, 0.5, True, 0, "first"),
    (0.5, 1.0, 0.5, 0.5, False, None, None),
    (1.0, 1.0, 0.5, 4.5, True, 2, "first"),
    (1.0, 1.0, 2.5, 0.5, True, 1, "second"),
])
def test_orthogonality_condition(a, ap, l, lp, holds, n, branch):
    res = cc.orthogonality_condition(cc.CrossTermSpec(a, ap, l, lp))
    assert res == (holds, n, branch)


def test_condition_swap_symmetric_at_n_zero():
    spec = cc.CrossTermSpec(0.5, 1.0, 0.25, 0.5)
    assert cc.orthogonality_condition(spec.swapped()).holds
    assert cc.orthogonality_condition(spec.swapped()).n == 0


@pytest.mark.parametrize("kw", [
    {"alpha": 0.0},
    {"x": -1.0},
    {"l": -1.5},
])
def test_cross_term_spec_validation(kw):
    base = dict(alpha=0.5, alpha_prime=1.0, l=0.25, l_prime=0.5)
    base.update(kw)
    with pytest.raises(DomainError):
        cc.CrossTermSpec(**base)


def test_cross_term_needs_distinct_points():
    with pytest.raises(DomainError):
        cc.cross_term(cc.CrossTermSpec(0.5, 1.0, 0.25, 0.5, 1.0, 1.0), scale=1.0)


def test_cross_term_vanishes_on_one_side():
    r = cc.cross_term(cc.CrossTermSpec(0.5, 1.0, 0.25, 0.5, 2.0, 1.0), scale=1.0)
    assert abs(r.value) < 1e-10


def test_cross_term_other_side_matches_closed_form():
    r = cc.cross_term(cc.CrossTermSpec(0.5, 1.0, 0.25, 0.5, 1.0, 2.0), scale=1.0)
    assert r.value == pytest.approx(CROSS_TERM_1_2, rel=1e-6)


def test_cross_term_obstruction_when_condition_fails():
    r = cc.cross_term(cc.CrossTermSpec(0.5, 1.0, 0.5, 0.5, 2.0, 1.0))
    assert r.trace["ratio"] > 1e-2
    assert not r.trace["condition"]["holds"]


def test_diagonal_scale_is_near_one():
    assert cc.diagonal_scale(0.5, 0.25, 2.0) == pytest.approx(1.0, abs=1e-4)


def test_kasner():
    good = cc.kasner_check([-1 / 3, 2 / 3, 2 / 3])
    assert good.passed
    assert good.diagnostics["sign_flip"]
    assert abs(good.diagnostics["pairwise_sum"]) < 1e-15
    assert not cc.kasner_check([0.5, 0.5]).passed
    with pytest.raises(DomainError):
        cc.kasner_check([])


@pytest.mark.parametrize("n", [-2, 1, 3])
def test_lattice_points_give_trivial_phase(n):
    ws = 4 * math.pi
    assert cc.lattice_point(n, ws) == pytest.approx(math.exp(n))
    assert cc.lattice_condition(ws, ws, 0.0, cc.lattice_point(n, ws)).trivial
    assert not cc.lattice_condition(ws, ws, 0.0, 1.1 * cc.lattice_point(n, ws)).trivial


def test_lattice_requires_multiples():
    with pytest.raises(DomainError):
        cc.lattice_condition(2.0, 3.0, 0.0, 1.0)


@pytest.mark.parametrize("n", [1, 2])
def test_bilateral_cross_parity(n):
    r = cc.bilateral_cross_parity(0.5, n, 1.0, 2.0)
    assert r.passed
    assert r.diagnostics["positive_half"] != 0.0
