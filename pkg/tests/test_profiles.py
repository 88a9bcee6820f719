import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hardy_sharp.core import HardyError
from hardy_sharp.profiles import T0_FLOOR, Piece, ProfileFunction, ProfileKind


def test_tent_values():
    u = ProfileFunction.tent(1.0, 1.5, 2.0)
    assert u.kind is ProfileKind.TENT
    assert u.support == (1.0, 2.0)
    assert np.allclose(u([0.5, 1.0, 1.25, 1.5, 1.75, 2.0, 3.0]), [0, 0, 0.5, 1, 0.5, 0, 0])


def test_truncated_power_and_plateau():
    u = ProfileFunction.truncated_power(0.5, 0.4, 0.8, 1.6, 2.0)
    x = np.array([0.9, 1.2, 1.5])
    assert np.allclose(u(x), x ** 0.5, rtol=1e-15)
    assert u(np.array([0.6]))[0] == pytest.approx(0.5 * 0.8 ** 0.5)
    p = ProfileFunction.plateau(1, 2, 3, 4)
    assert np.allclose(p([1.5, 2.5, 3.5]), [0.5, 1.0, 0.5])


def test_smooth_bump_shape():
    u = ProfileFunction.smooth_bump(0.5, 1.5, k=4)
    assert u(np.array([1.0]))[0] == pytest.approx(1.0)
    assert u(np.array([0.75]))[0] == pytest.approx((1 - 0.25) ** 4)
    # vanishes to fourth order at the ends
    x = 0.5 + 1e-3
    assert u.increment(x, 1e-3)[()] == pytest.approx((1 - ((x - 1) / 0.5) ** 2) ** 4, rel=1e-9)


@pytest.mark.parametrize("bad", [
    lambda: ProfileFunction.tent(1, 0.5, 2),
    lambda: ProfileFunction.truncated_power(1, 0, 1, 2, 3),
    lambda: ProfileFunction.smooth_bump(-1, 1),
    lambda: ProfileFunction.near_optimal(0.3, 0.0, 2),
    lambda: ProfileFunction(ProfileKind.TENT, {}, ()),
    lambda: ProfileFunction(ProfileKind.TENT, {}, (Piece(1, 2, 0, (1.0,)),)),
    lambda: ProfileFunction(ProfileKind.TENT, {}, (Piece(0, 1, 1, (1.0, -1.0)),)),
])
def test_invalid_profiles_rejected(bad):
    with pytest.raises(HardyError):
        bad()


def test_noncontiguous_rejected():
    pcs = (Piece(1, 2, 0, (-1.0, 1.0)), Piece(2.5, 3, 0, (3.0, -1.0)))
    with pytest.raises(HardyError):
        ProfileFunction(ProfileKind.TENT, {}, pcs)


def test_near_optimal_construction():
    g, d, p = 0.2, 0.1, 2.0
    u = ProfileFunction.near_optimal(g, d, p)
    t0 = d ** (2 / (p * d))
    assert u.params["t0"] == pytest.approx(t0)
    assert u.support == pytest.approx((t0 / 2, 2 / t0))
    x = np.array([0.5, 2.0])
    assert np.allclose(u(x), [0.5 ** (-g + d), 2.0 ** (-g - d)])
    tiny = ProfileFunction.near_optimal(g, 0.01, p)
    assert tiny.params["t0"] == T0_FLOOR


def test_times_power_and_scaled():
    u = ProfileFunction.tent(1.0, 1.5, 2.0)
    v = u.times_power(0.7).scaled(3.0)
    x = np.linspace(1.01, 1.99, 9)
    assert np.allclose(v(x), 3 * x ** 0.7 * u(x), rtol=1e-14)
    assert u.times_power(0) is u


@given(st.floats(0.2, 5.0))
def test_dilation(lam):
    u = ProfileFunction.truncated_power(-0.3, 0.4, 0.8, 1.6, 2.0)
    v = u.dilated(lam)
    x = np.linspace(0.41, 1.99, 17) / lam
    assert np.allclose(v(x), u(lam * x), rtol=1e-12, atol=1e-14)


def test_reflection():
    u = ProfileFunction.tent(0.1, 0.3, 0.9)
    r = u.reflected(1.0)
    x = np.linspace(0.05, 0.95, 31)
    assert np.allclose(r(x), u(1 - x), atol=1e-14)
    with pytest.raises(HardyError):
        ProfileFunction.truncated_power(0.5, 0.1, 0.2, 0.4, 0.6).reflected()


def test_scaled_derivatives_match_finite_differences():
    pc = Piece(0.5, 2.0, 0.7, (1.0, -0.5, 0.25))
    x = np.array([1.1])
    D = pc.scaled_derivatives(x)
    h = 1e-4
    f = lambda y: pc.value(np.array([y]))[0]  # noqa: E731
    d1 = (f(1.1 + h) - f(1.1 - h)) / (2 * h)
    d2 = (f(1.1 + h) - 2 * f(1.1) + f(1.1 - h)) / h ** 2
    scale = 1.1 ** 0.7
    assert D[0][0] * scale == pytest.approx(f(1.1), rel=1e-14)
    assert D[1][0] * scale / 1.1 == pytest.approx(d1, rel=1e-7)
    assert D[2][0] * scale / 1.1 ** 2 == pytest.approx(d2, rel=1e-5)


def _tent_exact(a):
    # tent(1, 1.5, 2) in exact rationals
    if a <= 1 or a >= 2:
        return Fraction(0)
    return 1 - 2 * abs(a - Fraction(3, 2))


@pytest.mark.parametrize("x,gap", [(1.3, 1e-9), (1.5 + 1e-10, 3e-10), (2.0 - 1e-12, 1e-11),
                                   (1.0 + 5e-11, 1e-10), (1.7, 1e-3), (1.2, 0.5)])
def test_increment_of_tent_exact(x, gap):
    u = ProfileFunction.tent(1.0, 1.5, 2.0)
    fx, fg = Fraction(x), Fraction(gap)
    expect = float(_tent_exact(fx) - _tent_exact(fx - fg))
    assert u.increment(x, gap)[()] == pytest.approx(expect, rel=1e-9)


def test_increment_power_piece_tiny_gap():
    u = ProfileFunction.near_optimal(0.3, 0.2, 2.0)
    x, gap = 0.5, 1e-14
    e = -0.3 + 0.2
    expect = x ** e * -math.expm1(e * math.log1p(-gap / x))
    assert u.increment(x, gap)[()] == pytest.approx(expect, rel=1e-10)


def test_increment_uses_exact_lower_point():
    u = ProfileFunction.near_optimal(0.3, 0.2, 2.0)
    x, t = 3.0, 1e-200
    got = u.increment(x, x * (1 - t), y=x * t)[()]
    assert got == pytest.approx(u(np.array([x]))[0], rel=1e-14)


def test_increment_vectorized_shape():
    u = ProfileFunction.smooth_bump(0.5, 1.5)
    out = u.increment(np.full((3, 4), 1.2), np.logspace(-12, -1, 4))
    assert out.shape == (3, 4)


def test_describe():
    assert ProfileFunction.tent(1, 1.5, 2).describe().startswith("tent(")
