"""Sharp constants of the weighted fractional Hardy inequalities.

Every constant has an integral route (tanh-sinh quadrature of its defining
one-dimensional integral) and, where available, a closed form for p = 2 or
a digamma formula for the s -> 0 limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun as sf
from .core import (QUAD_ACCEPT, QUAD_TOL, ConstantReport, HardyParams, Method,
                   NumericalError, QuadResult, Regime, require)
from .quadrature import integrate_piecewise, quad

# half-width of the window around s = 1/2 handled by the cot formula
COT_WINDOW = 1e-4


@dataclass(frozen=True)
class PhiEval:
    d: int
    s: float
    p: float
    r: float
    value: float


@dataclass(frozen=True)
class RemainderCoeff:
    p: float
    c_p: float
    tau: float


def _log_t(t, tc):
    """log t, accurate both near 0 (from t) and near 1 (from tc = 1 - t)."""
    t = np.asarray(t, dtype=float)
    tc = np.asarray(tc, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(t < 0.5, np.log(np.maximum(t, 1e-300)), np.log1p(-np.minimum(tc, 0.5)))


def phi_regular(d, s, p, r, rc=None):
    """(1-r)^(1+sp) * Phi_{d,s,p}(r), bounded on [0, 1); vectorized.

    `rc` is 1 - r when known exactly.
    """
    r = np.asarray(r, dtype=float)
    rc = 1.0 - r if rc is None else np.asarray(rc, dtype=float)
    sp = s * p
    if d == 1:
        return 1.0 + (rc / (1.0 + r)) ** (1.0 + sp)
    a, b, c = (d + sp) / 2.0, (2.0 + sp) / 2.0, d / 2.0
    g = sf.euler_transformed_2f1(a, b, c, r * r)
    return sf.sphere_area(d) * (1.0 + r) ** (-1.0 - sp) * g


def phi(d: int, s: float, p: float, r: float) -> PhiEval:
    """Phi_{d,s,p}(r) from the two-term form (d = 1) or the 2F1 form."""
    if not (0.0 <= r < 1.0):
        raise ValueError("r must lie in [0, 1)")
    if d < 1:
        raise ValueError("d must be >= 1")
    sp = s * p
    if d == 1:
        val = (1.0 - r) ** (-1.0 - sp) + (1.0 + r) ** (-1.0 - sp)
    else:
        f = sf.hyp2f1((d + sp) / 2.0, (2.0 + sp) / 2.0, d / 2.0, r * r)
        val = sf.sphere_area(d) * f.value
    return PhiEval(d, s, p, r, val)


def phi_integral(d: int, s: float, p: float, r: float, tol: float = 1e-12) -> QuadResult:
    """Phi_{d,s,p}(r) for d >= 2 by quadrature of its t-integral."""
    if d < 2:
        raise ValueError("the t-integral form needs d >= 2")
    q = (d + s * p) / 2.0
    e = (d - 3) / 2.0

    def f(t, ta, tb):
        # 1 - 2tr + r^2 = (1-r)^2 + 2r(1-t), 1 - t^2 = (1+t)(1-t)
        base = (1.0 - r) ** 2 + 2.0 * r * tb
        return (ta * tb) ** e * base ** (-q)

    res = quad(f, -1.0, 1.0, tol=tol, gaps=True, sigma_a=e, sigma_b=e, max_level=12)
    area = sf.sphere_area(d - 1)
    return QuadResult(area * res.value, area * res.abs_err, res.n_evals, res.converged)


def halfspace_prefactor(d: int, sp: float) -> float:
    """pi^((d-1)/2) Gamma((1+sp)/2) / Gamma((d+sp)/2), the integral of
    (|y'|^2 + 1)^(-(d+sp)/2) over R^{d-1}."""
    return math.pi ** ((d - 1) / 2.0) * math.gamma((1.0 + sp) / 2.0) / math.gamma((d + sp) / 2.0)


def _checked(res: QuadResult, what: str) -> QuadResult:
    if not res.converged and res.abs_err > QUAD_ACCEPT * max(1.0, abs(res.value)):
        raise NumericalError(f"{what}: quadrature error {res.abs_err:.3g} above tolerance", res)
    return res


def _power_factor(g, p, t, tc):
    """|1 - t^g|^p / (1-t)^p, finite on (0, 1), with t^g overflow avoided.

    Returns (factor, shift) with |1 - t^g|^p = factor * (1-t)^p * t^shift.
    """
    logt = _log_t(t, tc)
    if g >= 0:
        diff = -np.expm1(g * logt)  # 1 - t^g in [0, 1)
        shift = 0.0
    else:
        diff = -np.expm1(-g * logt)  # 1 - t^{-g}; |1 - t^g| = t^g (1 - t^{-g})
        shift = g * p
    return np.abs(diff / tc) ** p, shift


def constant_C(params: HardyParams, tol: float = QUAD_TOL,
               allow_degenerate: bool = False) -> ConstantReport:
    """Full-space constant from its radial integral with the Phi kernel."""
    require(params, Regime.FULL, allow_degenerate)
    d, s, p, a, b = params.d, params.s, params.p, params.alpha, params.beta
    sp = s * p
    g = params.gamma_full

    def f(r, ra, rb):
        fac, shift = _power_factor(g, p, r, rb)
        lead = r ** (sp - 1.0 + a + shift) + r ** (sp - 1.0 + b + shift)
        return lead * fac * rb ** (p - 1.0 - sp) * phi_regular(d, s, p, r, rb)

    sigma0 = sp - 1.0 + min(a, b) + min(g * p, 0.0)
    res = quad(f, 0.0, 1.0, tol=tol, gaps=True, sigma_a=sigma0, sigma_b=p - 1.0 - sp,
               max_level=11)
    _checked(res, "constant_C")
    return ConstantReport(params, res.value, Method.INTEGRAL, res)


def constant_C_closed_p2(params: HardyParams, allow_degenerate: bool = False) -> ConstantReport:
    """Gamma-ratio form of the full-space constant for p = 2, s > 0."""
    if params.p != 2:
        raise ValueError("closed form requires p = 2")
    if params.s <= 0:
        raise ValueError("closed form requires s > 0")
    require(params, Regime.FULL, allow_degenerate)
    d, s, a, b = params.d, params.s, params.alpha, params.beta
    G, rg = math.gamma, sf.rec_gamma

    def lam(w):
        return G((w + 2 * s) / 2) * G((d - w) / 2) * rg((d - w - 2 * s) / 2) * rg(w / 2)

    cross = (2.0 * G((d - a + b + 2 * s) / 4) * G((d + a - b + 2 * s) / 4)
             * rg((d + a - b - 2 * s) / 4) * rg((d - a + b - 2 * s) / 4))
    pre = math.pi ** (d / 2.0) * abs(G(-s)) / G((d + 2 * s) / 2)
    return ConstantReport(params, pre * (cross - lam(a) - lam(b)), Method.CLOSED_FORM)


def constant_D(params: HardyParams, tol: float = QUAD_TOL,
               allow_degenerate: bool = False) -> ConstantReport:
    """Half-space constant: Gamma prefactor times a one-dimensional integral."""
    require(params, Regime.HALF, allow_degenerate)
    d, s, p, a, b = params.d, params.s, params.p, params.alpha, params.beta
    sp = s * p
    g = params.gamma_half

    def f(t, ta, tb):
        fac, shift = _power_factor(-g, p, t, tb)
        lead = t ** (a + shift) + t ** (b + shift)
        return lead * fac * tb ** (p - 1.0 - sp)

    sigma0 = min(a, b) - max(g * p, 0.0)
    res = quad(f, 0.0, 1.0, tol=tol, gaps=True, sigma_a=sigma0, sigma_b=p - 1.0 - sp,
               max_level=11)
    _checked(res, "constant_D")
    pre = halfspace_prefactor(d, sp)
    scaled = QuadResult(pre * res.value, pre * res.abs_err, res.n_evals, res.converged)
    return ConstantReport(params, scaled.value, Method.INTEGRAL, scaled)


def _xcot(x: float, c: float) -> float:
    """x cot(c x), continuous at x = 0 where it equals 1/c."""
    if abs(x) < 1e-8:
        return 1.0 / c - c * x * x / 3.0
    return x / math.tan(c * x)


def constant_D_cot(params: HardyParams) -> float:
    """Half-space constant at s = 1/2, p = 2."""
    d, a, b = params.d, params.alpha, params.beta
    pre = math.pi ** ((d + 1) / 2.0) / math.gamma((d + 1) / 2.0)
    return pre * (_xcot(a - b, math.pi / 2) - _xcot(a, math.pi) - _xcot(b, math.pi))


def constant_D_beta(params: HardyParams) -> float:
    """Six-Beta-term form of the half-space constant (p = 2, s != 1/2)."""
    d, s, a, b = params.d, params.s, params.alpha, params.beta
    terms = [
        (1.0, a + 1.0), (1.0, b + 1.0), (1.0, 2 * s - a), (1.0, 2 * s - b),
        (-2.0, s + (a - b + 1.0) / 2.0), (-2.0, s + (b - a + 1.0) / 2.0),
    ]
    total = 0.0
    for coef, x in terms:
        bv = sf.beta_ext(x, -2.0 * s)
        if bv.is_pole:
            raise NumericalError(f"Beta pole at ({x}, {-2 * s})")
        total += coef * bv.value
    return halfspace_prefactor(d, 2 * s) * total


def constant_D_closed_p2(params: HardyParams, branch: str = "auto",
                         allow_degenerate: bool = False) -> ConstantReport:
    """Closed form for p = 2; the cot formula is used within COT_WINDOW of s = 1/2."""
    if params.p != 2:
        raise ValueError("closed form requires p = 2")
    require(params, Regime.HALF, allow_degenerate)
    if branch == "auto":
        branch = "cot" if abs(params.s - 0.5) < COT_WINDOW else "beta"
    if branch == "cot":
        val = constant_D_cot(params)
    elif branch == "beta":
        val = constant_D_beta(params)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return ConstantReport(params, val, Method.CLOSED_FORM)


def fgamm_beta(a: float, b: float) -> float:
    """B(b+1, -a) + B(a-b, -a) + 1/a."""
    b1, b2 = sf.beta_ext(b + 1.0, -a), sf.beta_ext(a - b, -a)
    if b1.is_pole or b2.is_pole:
        raise NumericalError(f"Beta pole for a={a}")
    return b1.value + b2.value + 1.0 / a


def fgamm_integral(a: float, b: float, tol: float = 1e-12) -> QuadResult:
    def f(t, ta, tb):
        logt = _log_t(t, tb)
        return (np.expm1(b * logt) / tb) * (-np.expm1((a - b - 1.0) * logt) / tb) * tb ** (1.0 - a)

    return quad(f, 0.0, 1.0, tol=tol, gaps=True, max_level=11,
                sigma_a=min(b, 0.0) + min(a - b - 1.0, 0.0), sigma_b=1.0 - a)


def fgamm(a: float, b: float) -> float:
    """The power-function eigenvalue integral for a in (0, 2), b in (-1, a).

    Uses the Beta form except at its pole a = 1, where quadrature is used.
    """
    if not (0.0 < a < 2.0 and -1.0 < b < a):
        raise ValueError("need a in (0, 2) and b in (-1, a)")
    if a == 1.0:
        return _checked(fgamm_integral(a, b), "fgamm").value
    return fgamm_beta(a, b)


def constant_C_s0_integral(params: HardyParams, tol: float = QUAD_TOL) -> QuadResult:
    d, p, a, b = params.d, params.p, params.alpha, params.beta
    e = (d - a - b) / p

    def f(r, ra, rb):
        logr = _log_t(r, rb)
        one_minus = -np.expm1(e * logr) / rb
        return (r ** (a - 1) + r ** (b - 1)) * one_minus ** p * rb ** (p - 1.0) / (1.0 + r)

    res = quad(f, 0.0, 1.0, tol=tol, gaps=True, sigma_a=min(a, b) - 1.0, sigma_b=p - 1.0,
               max_level=11)
    k = sf.sphere_area(d)
    return QuadResult(k * res.value, k * res.abs_err, res.n_evals, res.converged)


def constant_C_s0_digamma(params: HardyParams) -> float:
    d, a, b = params.d, params.alpha, params.beta
    psi = lambda x: sf.digamma(x).value  # noqa: E731
    bracket = (2 * psi((d - a + b) / 4) + 2 * psi((d + a - b) / 4)
               - psi(a / 2) - psi(b / 2) - psi((d - a) / 2) - psi((d - b) / 2))
    return math.pi ** (d / 2) / math.gamma(d / 2) * bracket


def constant_C_s0(params: HardyParams, route: str = "auto") -> ConstantReport:
    """Full-space constant at s = 0 (kernel |x-y|^-d)."""
    params = params.with_(s=0.0)
    require(params, Regime.FULL)
    if route == "auto":
        route = "closed" if params.p == 2 else "integral"
    if route == "closed":
        if params.p != 2:
            raise ValueError("digamma formula requires p = 2")
        return ConstantReport(params, constant_C_s0_digamma(params), Method.LIMIT_S0)
    res = _checked(constant_C_s0_integral(params), "constant_C_s0")
    return ConstantReport(params, res.value, Method.LIMIT_S0, res)


def constant_D_s0(params: HardyParams) -> ConstantReport:
    """Half-space constant at s = 0, p = 2, from the digamma formula."""
    params = params.with_(s=0.0)
    if params.p != 2:
        raise ValueError("digamma formula requires p = 2")
    require(params, Regime.HALF)
    d, a, b = params.d, params.alpha, params.beta
    psi = lambda x: sf.digamma(x).value  # noqa: E731
    bracket = (2 * psi((a - b + 1) / 2) + 2 * psi((b - a + 1) / 2)
               - psi(a + 1) - psi(-a) - psi(b + 1) - psi(-b))
    return ConstantReport(params, math.pi ** (d / 2) / math.gamma(d / 2) * bracket,
                          Method.LIMIT_S0)


def sharp_constant(params: HardyParams, regime) -> float:
    """The constant on the right of the inequality for `regime` (integral route)."""
    regime = Regime.parse(regime)
    if regime is Regime.FULL:
        return constant_C(params).constant
    # half-space, intervals and convex domains share the half-space constant
    require(params, regime)
    return constant_D(params).constant


def _remainder_objective(p, tau):
    return (1.0 - tau) ** p - tau ** p + p * tau ** (p - 1.0)


def remainder_coeff(p: float) -> RemainderCoeff:
    """min over tau in (0, 1/2) of (1-tau)^p - tau^p + p tau^(p-1), p >= 2."""
    if not p >= 2:
        raise ValueError("remainder coefficient needs p >= 2")
    if p == 2:
        # the objective is identically 1
        return RemainderCoeff(p, 1.0, 0.25)

    def deriv(tau):
        return p * (-(1.0 - tau) ** (p - 1) - tau ** (p - 1) + (p - 1.0) * tau ** (p - 2))

    cands = [(1.0, 0.0), (_remainder_objective(p, 0.5), 0.5)]
    grid = np.linspace(0.0, 0.5, 4001)[1:-1]
    dv = deriv(grid)
    for i in np.nonzero((dv[:-1] < 0) & (dv[1:] >= 0))[0]:
        lo, hi = grid[i], grid[i + 1]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if deriv(mid) < 0:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15:
                break
        tau = 0.5 * (lo + hi)
        cands.append((_remainder_objective(p, tau), tau))
    c, tau = min(cands)
    return RemainderCoeff(p, float(c), float(tau))
