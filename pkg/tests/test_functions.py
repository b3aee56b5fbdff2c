import numpy as np
import pytest

from fracspace.errors import DomainError, UsageError
from fracspace.functions import (
    Bump,
    ExpDecay,
    Gaussian,
    PowerExp,
    PowerGaussian,
    SampledFunction,
    Separable,
    parse_function,
)
from fracspace.measure import Support


@pytest.mark.parametrize("text, expected", [
    ("gaussian:sigma=2", Gaussian(2.0)),
    ("expdecay:lam=0.5", ExpDecay(0.5)),
    ("powergaussian:1,1", PowerGaussian(1.0, 1.0)),
    ("powerexp:p=2,lam=1", PowerExp(2.0, 1.0)),
    ("bump:center=1,width=0.5", Bump(1.0, 0.5)),
])
def test_parse_function(text, expected):
    f = parse_function(text)
    assert f == expected
    assert parse_function(f.spec()) == f


@pytest.mark.parametrize("text", ["nosuch", "gaussian:bogus=1"])
def test_parse_function_errors(text):
    with pytest.raises(UsageError):
        parse_function(text)


def test_bump_support_and_peak():
    b = Bump(2.0, 0.5)
    assert b(2.0) == 1.0
    assert np.all(b(np.array([1.5, 2.5, 0.0, 3.0])) == 0.0)
    assert b.origin_power is None
    assert b.breakpoints == (1.5, 2.5)
    with pytest.raises(DomainError):
        Bump(1.0, 0.0)


def test_sector_powers():
    assert Gaussian(1.0).sector_powers() == {0: 0.0}
    assert PowerGaussian(1.0, 1.0).sector_powers() == {1: 1.0}
    assert Bump(1.0, 0.5).sector_powers() == {0: np.inf, 1: np.inf}


def test_separable_product():
    f = Separable((Gaussian(1.0), ExpDecay(2.0)))
    pts = np.array([[0.5, 1.0], [1.0, 0.2]])
    assert np.allclose(f(pts), Gaussian(1.0)(pts[:, 0]) * ExpDecay(2.0)(pts[:, 1]))
    with pytest.raises(DomainError):
        f(np.array([1.0, 2.0, 3.0]))


def test_sampled_function_interpolates():
    x = np.linspace(0.1, 6.0, 200)
    s = SampledFunction((x,), np.exp(-x * x / 2))
    t = np.array([0.33, 1.7, 4.2])
    assert np.allclose(s(t), np.exp(-t * t / 2), atol=1e-6)
    assert s(7.0) == 0.0


@pytest.mark.parametrize("axes, vals", [
    ((np.array([0.0, 1.0]),), np.ones(2)),       # unilateral needs positive nodes
    ((np.array([1.0, 0.5]),), np.ones(2)),       # not increasing
    ((np.array([1.0, 2.0]),), np.ones(3)),       # shape mismatch
    ((np.array([1.0, 2.0]),), np.array([1.0, np.nan])),
])
def test_sampled_function_validation(axes, vals):
    with pytest.raises(DomainError):
        SampledFunction(axes, vals)


def test_sampled_function_csv_roundtrip(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("# comment\nx,re,im\n-1,1,0\n0,2,0.5\n1,3,1\n")
    s = SampledFunction.from_csv(p, Support.BILATERAL)
    assert s.values.dtype.kind == "c"
    assert s.values[1] == 2 + 0.5j
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(UsageError):
        SampledFunction.from_csv(bad)
