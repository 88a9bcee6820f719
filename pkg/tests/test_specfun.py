import math

import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, strategies as st

from hardy_sharp import specfun as sf
from hardy_sharp.quadrature import quad

EG = 0.5772156649015329


def test_gamma_values():
    assert sf.gamma(0.5).value == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert sf.gamma(5).value == 24
    assert sf.gamma(-0.5).value == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-14)


@pytest.mark.parametrize("x", [0, -1, -2, -7])
def test_gamma_poles_flagged(x):
    g = sf.gamma(x)
    assert g.is_pole
    assert sf.rec_gamma(x) == 0.0


def test_rec_gamma():
    assert sf.rec_gamma(1) == 1.0
    assert sf.rec_gamma(200.0) == pytest.approx(math.exp(-math.lgamma(200.0)), rel=1e-12)
    assert sf.rec_gamma(-150.5) == pytest.approx(float(sc.rgamma(-150.5)), rel=1e-10)
    # beyond double range the magnitude saturates with the correct sign
    for x in (-200.5, -201.5):
        assert sf.rec_gamma(x) == math.copysign(math.inf, math.sin(math.pi * x))


def test_gamma_recurrence_dense():
    x = np.linspace(0.1, 20, 2000)
    lhs = np.array([sf.gamma(v + 1).value for v in x])
    rhs = x * np.array([sf.gamma(v).value for v in x])
    assert np.max(np.abs(lhs / rhs - 1)) < 1e-12


def test_beta_overflow_is_infinite_not_error():
    assert sf.beta_ext(1.0, 1e-311).value == math.inf


def test_beta_values():
    assert sf.beta_ext(1, 1).value == 1.0
    assert sf.beta_ext(2, -0.5).value == pytest.approx(-4.0, rel=1e-14)
    assert sf.beta_ext(0.75, -0.5).value == sf.beta_ext(-0.5, 0.75).value
    assert sf.beta_ext(-1, 0.5).is_pole


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_beta_symmetric(a, b):
    x, y = sf.beta_ext(a, b), sf.beta_ext(b, a)
    assert x.is_pole == y.is_pole
    if not x.is_pole:
        assert x.value == y.value


def test_digamma_values():
    assert sf.digamma(1).value == pytest.approx(-EG, rel=1e-14)
    assert sf.digamma(2).value == pytest.approx(1 - EG, rel=1e-14)
    refl = sf.digamma(0.75).value - sf.digamma(0.25).value
    assert refl == pytest.approx(math.pi, rel=1e-13)
    assert sf.digamma(-3).is_pole


@given(st.floats(0.1, 10))
def test_digamma_recurrence(z):
    assert abs(sf.digamma(1 + z).value - sf.digamma(z).value - 1 / z) < 1e-11


@given(st.floats(-30, 60).filter(lambda x: abs(x - round(x)) > 1e-3 or x > 0.5))
def test_digamma_against_scipy(x):
    ours = sf.digamma(x).value
    assert ours == pytest.approx(float(sc.digamma(x)), rel=1e-12, abs=1e-12)


def test_hyp2f1_basic():
    assert sf.hyp2f1(0.3, 1.2, 2.5, 0.0).value == 1.0
    for d in (1, 2, 3, 5):
        for z in (0.1, 0.6, 0.95):
            assert sf.hyp2f1(d / 2, 1, d / 2, z).value == pytest.approx(1 / (1 - z), rel=1e-12)


def test_hyp2f1_against_t_integral():
    d, sp, r = 3, 1.0, 0.9
    q = (d + sp) / 2

    def f(t, ta, tb):
        return (ta * tb) ** ((d - 3) / 2) * ((1 - r) ** 2 + 2 * r * tb) ** (-q)

    res = quad(f, -1.0, 1.0, tol=1e-13, gaps=True, max_level=12)
    # t-integral of Phi divided by |S^{d-2}| equals the 2F1 form divided by |S^{d-1}|
    via_integral = sf.sphere_area(d - 1) * res.value
    via_f = sf.sphere_area(d) * sf.hyp2f1(q, (2 + sp) / 2, d / 2, r * r).value
    assert via_integral == pytest.approx(via_f, rel=1e-9)


@pytest.mark.parametrize("d,sp", [(2, 0.5), (3, 1.0), (3, 1.7), (4, 0.3)])
@pytest.mark.parametrize("z", [0.3, 0.7, 0.99])
def test_euler_transformation(d, sp, z):
    a, b, c = (d + sp) / 2, (2 + sp) / 2, d / 2
    direct = sf.hyp2f1(a, b, c, z).value
    transformed = (1 - z) ** (c - a - b) * float(sf.euler_transformed_2f1(a, b, c, z))
    assert direct == pytest.approx(transformed, rel=1e-9)
    assert direct == pytest.approx(float(sc.hyp2f1(a, b, c, z)), rel=1e-9)


def test_hyp2f1_rejects_bad_input():
    with pytest.raises(ValueError):
        sf.hyp2f1(1, 1, -2, 0.3)
    with pytest.raises(ValueError):
        sf.hyp2f1(1, 1, 2, 1.0)


def test_sphere_area():
    assert sf.sphere_area(1) == pytest.approx(2)
    assert sf.sphere_area(2) == pytest.approx(2 * math.pi)
    assert sf.sphere_area(3) == pytest.approx(4 * math.pi)
