"""Real Gamma, reciprocal Gamma, digamma, Beta and Gauss 2F1.

Poles are reported through ``SpecialValue.is_pole`` rather than raised, so
callers can resolve removable singularities themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as sc

from .core import NumericalError, QuadResult

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class SpecialValue:
    value: float
    is_pole: bool = False

    def __float__(self) -> float:
        return self.value


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma(x: float) -> SpecialValue:
    if math.isnan(x):
        raise ValueError("gamma of NaN")
    if _is_nonpositive_int(x):
        return SpecialValue(math.inf, True)
    try:
        return SpecialValue(math.gamma(x))
    except OverflowError:
        return SpecialValue(math.inf)


def rec_gamma(x: float) -> float:
    """1/Gamma(x), entire: exactly zero at 0, -1, -2, ..."""
    if _is_nonpositive_int(x):
        return 0.0
    if x > 170.0:
        return math.exp(-math.lgamma(x))
    if x < -170.0:
        # reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi, beyond double range
        sgn = math.sin(math.pi * x)
        log_mag = math.log(abs(sgn)) + math.lgamma(1.0 - x) - math.log(math.pi)
        return math.copysign(math.exp(log_mag) if log_mag < 709.0 else math.inf, sgn)
    return 1.0 / math.gamma(x)


def log_gamma(x: float) -> SpecialValue:
    """log|Gamma(x)|."""
    if _is_nonpositive_int(x):
        return SpecialValue(math.inf, True)
    return SpecialValue(math.lgamma(x))


def beta_ext(a: float, b: float) -> SpecialValue:
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b), finite wherever a, b are not poles."""
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        return SpecialValue(math.inf, True)
    try:
        return SpecialValue(math.gamma(a) * math.gamma(b) * rec_gamma(a + b))
    except OverflowError:
        # finite but beyond double range; sign from the factors
        sign = math.copysign(1.0, sc.gamma(a)) * math.copysign(1.0, sc.gamma(b)) \
            * math.copysign(1.0, sc.gamma(a + b))
        return SpecialValue(sign * math.inf)


# Bernoulli numbers B_{2k} / (2k) for the asymptotic digamma series
_DIGAMMA_ASYMP = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12)


def _digamma_positive(x: float) -> float:
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    term = inv2
    for c in _DIGAMMA_ASYMP:
        series += c * term
        term *= inv2
    return acc + math.log(x) - 0.5 / x - series


def digamma(x: float) -> SpecialValue:
    if math.isnan(x):
        raise ValueError("digamma of NaN")
    if _is_nonpositive_int(x):
        return SpecialValue(math.nan, True)
    if x == 1.0:
        return SpecialValue(-EULER_GAMMA)
    if x < 0.5:
        # psi(1-x) - psi(x) = pi cot(pi x)
        return SpecialValue(_digamma_positive(1.0 - x) - math.pi / math.tan(math.pi * x))
    return SpecialValue(_digamma_positive(x))


def _hyp2f1_series(a, b, c, z, tol=1e-16, max_terms=5000):
    term = 1.0
    total = 1.0
    n = 0
    while n < max_terms:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        n += 1
        if term == 0.0:
            return total, 0.0, n
        # tail of a geometric-like series once the ratio settles below 1
        ratio = abs((a + n) * (b + n) / ((c + n) * (n + 1.0)) * z)
        if n > abs(a * b / c) + 2 and ratio < 1.0:
            tail = abs(term) * ratio / (1.0 - ratio)
            if tail <= tol * max(abs(total), 1e-300):
                return total, tail + 1e-16 * abs(total) * n, n
    raise NumericalError(f"2F1({a}, {b}; {c}; {z}) series did not converge")


def hyp2f1(a: float, b: float, c: float, z: float) -> QuadResult:
    """Gauss hypergeometric function for real z in [0, 1).

    Direct power series for z <= 1/2. Above that the Euler transformation
    ``(1-z)^(c-a-b) 2F1(c-a, c-b; c; z)`` is used; the transformed function
    is bounded at z = 1 whenever a+b-c > 0 and is evaluated with
    ``scipy.special.hyp2f1``.
    """
    if _is_nonpositive_int(c):
        raise ValueError("c must not be a nonpositive integer")
    if not (0.0 <= z < 1.0):
        raise ValueError("z must lie in [0, 1)")
    if z <= 0.5:
        val, err, n = _hyp2f1_series(a, b, c, z)
        return QuadResult(val, err, n)
    factor = (1.0 - z) ** (c - a - b)
    inner = float(sc.hyp2f1(c - a, c - b, c, z))
    if not math.isfinite(inner):
        raise NumericalError(f"2F1({a}, {b}; {c}; {z}) transform failed")
    val = factor * inner
    return QuadResult(val, 1e-13 * abs(val), 1)


def euler_transformed_2f1(a, b, c, z):
    """Vectorized ``2F1(c-a, c-b; c; z)`` = ``(1-z)^(a+b-c) 2F1(a, b; c; z)``."""
    return sc.hyp2f1(c - a, c - b, c, np.asarray(z, dtype=float))


def sphere_area(d: int) -> float:
    """Surface measure of the unit sphere S^{d-1} in R^d (2 for d = 1)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
