"""Numerical verification of the weighted fractional Hardy inequalities.

The energies of radial (full space) and x_d-dependent (half-space) test
functions reduce to two-dimensional integrals over pairs of radii. Both
kernels are homogeneous, so on the triangle {rho < r} we write rho = t*r and
factor the ground state w = r^(-gamma) out of the profile:

    E = int dr/r int_0^1 |t^gamma V(r) - V(t r)|^p K(t) dt,    V = r^gamma u,

which keeps every factor of moderate size even for profiles spread over
hundreds of decades. The part of the square with r beyond the support of u
is folded back onto the support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import specfun as sf
from .constants import _log_t, constant_C, constant_D, halfspace_prefactor, phi_regular, remainder_coeff
from .core import (HardyError, HardyParams, NumericalError, QuadResult, Regime,
                   ValidationError, Violation, require)
from .profiles import ProfileFunction
from .quadrature import combine, integrate_piecewise, ratio_breaks, ratio_integral

ENERGY_TOL = 1e-10
# kernel factors below this abscissa are dropped (their share is < TINY_T^(1+e))
TINY_T = 1e-290
DELTA_GRID = (0.4, 0.2, 0.1, 0.05, 0.02, 0.01)


@dataclass(frozen=True)
class SeminormBreakdown:
    """E[u] >= constant * integral, optionally with the ground-state remainder."""

    lhs: QuadResult
    rhs_constant: float
    rhs_integral: QuadResult
    remainder: Optional[QuadResult] = None

    def __post_init__(self):
        parts = [self.lhs.value, self.rhs_constant, self.rhs_integral.value]
        if self.remainder is not None:
            parts.append(self.remainder.value)
        # quadrature noise may leave an exact zero slightly negative
        if min(parts) < -1e-12 * max(1.0, max(abs(v) for v in parts)):
            raise NumericalError(f"negative seminorm part in {parts}")

    @property
    def quotient(self) -> float:
        if self.rhs_integral.value <= 0:
            raise ValidationError([Violation("nonzero", "quotient of the zero function is undefined")])
        return self.lhs.value / self.rhs_integral.value

    @property
    def margin(self) -> float:
        """lhs - constant * integral."""
        return self.lhs.value - self.rhs_constant * self.rhs_integral.value

    @property
    def relative_margin(self) -> float:
        return self.margin / self.lhs.value if self.lhs.value > 0 else 0.0


@dataclass(frozen=True)
class TriangleKernel:
    """K(t) = pref * sum_i t^(e_i) * D(t) on 0 < t < 1 with D(t) = (1-t)^(-1-sp)
    for the half-space and D = Phi (full space). ``regular`` returns
    K(t) (1-t)^(1+sp)."""

    terms: tuple
    pref: float
    sp: float
    phi_dim: int = 0  # 0 for the half-space kernel, else the dimension d
    s: float = 0.0
    p: float = 2.0

    def regular(self, t, tc):
        t = np.asarray(t, dtype=float)
        tiny = t < TINY_T
        ts = np.where(tiny, 1.0, t)
        acc = 0.0
        for e in self.terms:
            acc = acc + ts ** e
        out = self.pref * acc
        if self.phi_dim:
            out = out * phi_regular(self.phi_dim, self.s, self.p, ts, np.where(tiny, 0.0, tc))
        return np.where(tiny, 0.0, out)


def _full_kernel(params: HardyParams, alpha: float, beta: float, gamma: float) -> TriangleKernel:
    d, p = params.d, params.p
    shift = d - 1 - p * gamma
    return TriangleKernel((shift - alpha, shift - beta), sf.sphere_area(d), params.sp,
                          phi_dim=d, s=params.s, p=p)


def _half_kernel(params: HardyParams, alpha: float, beta: float, gamma: float) -> TriangleKernel:
    pg = params.p * gamma
    return TriangleKernel((alpha - pg, beta - pg), halfspace_prefactor(params.d, params.sp),
                          params.sp)


def _check_profile(profile: ProfileFunction):
    if not isinstance(profile, ProfileFunction):
        raise ValidationError([Violation("profile", "expected a ProfileFunction")])


def is_zero(profile: ProfileFunction) -> bool:
    lo, hi = profile.support
    probe = np.linspace(lo, hi, 257)[1:-1]
    return not np.any(profile(probe) != 0.0)


def homogeneous_energy(V: ProfileFunction, p: float, gamma: float, kernel: TriangleKernel,
                       tol: float = ENERGY_TOL) -> QuadResult:
    """int_0^inf dr/r int_0^1 |t^gamma V(r) - V(t r)|^p K(t) dt."""
    sp = kernel.sp
    knots = V.knots
    a, b = V.support
    inner_tol = tol * 0.1

    def inner(r):
        u_pts, s_pts = ratio_breaks(r, knots)

        def g(t, tc):
            logt = _log_t(t, tc)
            vr = V(np.array([r]))[0]
            delta = V.increment(r, r * tc, r * t) + np.expm1(gamma * logt) * vr
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                core = np.abs(delta / tc) ** p * tc ** (p - 1.0 - sp)
            return np.where(delta == 0.0, 0.0, core) * kernel.regular(t, tc)

        return ratio_integral(g, u_pts, inner_tol, 10, s_pts)

    evals = {"n": 0, "ok": True}

    def main(r, da, db):
        out = np.empty_like(r)
        for i, ri in enumerate(r):
            res = inner(ri)
            evals["n"] += res.n_evals
            evals["ok"] &= res.converged
            out[i] = res.value / ri
        return out

    e_main = integrate_piecewise(main, knots, tol=tol)

    # r > b: only V(t r) is nonzero; with rho = t r the inner integral over
    # r becomes the primitive of K up to x = rho / b.
    def prim_scaled(rho, xc):
        # (1-x)^sp * int_0^x K(t) dt with x = rho / b, 1 - x = xc exact
        # integrate in s = 1 - t over (xc, 1), log-spaced near the peak at
        # s = xc; t is exact as the distance to s = 1 on the last panel
        def g(sv, da, db, last):
            t = db if last else 1.0 - sv
            with np.errstate(over="ignore"):
                return kernel.regular(t, sv) * (xc / sv) ** sp / sv

        pts = [xc, 0.5, 1.0] if xc < 0.25 else [xc, 1.0]
        parts = [integrate_piecewise(lambda sv, da, db, last=(hi == 1.0): g(sv, da, db, last),
                                     [lo, hi], tol=inner_tol, max_level=10)
                 for lo, hi in zip(pts[:-1], pts[1:])]
        res = combine(parts)
        evals["n"] += res.n_evals
        evals["ok"] &= res.converged
        return res.value

    def tail(rho, da, db):
        out = np.empty_like(rho)
        for i, (ri, gi) in enumerate(zip(rho, db)):
            # profiles vanish at the end of their support; V(rho) from the
            # exact gap b - rho keeps v / xc accurate
            v = -V.increment(b, gi, ri)
            if v == 0.0:
                out[i] = 0.0
                continue
            xc = gi / b
            out[i] = np.abs(v / xc) ** p * xc ** (p - sp) * prim_scaled(ri, xc) / ri
        return out

    # db from the last panel is exact; elsewhere b - rho is computed
    tail_parts = []
    for lo, hi in zip(knots[:-1], knots[1:]):
        last = hi == b
        res = integrate_piecewise(
            lambda rho, da, db, last=last: tail(rho, da, db if last else b - rho),
            [lo, hi], tol=tol)
        tail_parts.append(res)
    e_tail = combine(tail_parts)
    total = combine([e_main, e_tail])
    return QuadResult(total.value, total.abs_err, total.n_evals + evals["n"],
                      total.converged and evals["ok"])


def _log_moment(V: ProfileFunction, p: float, tol: float) -> QuadResult:
    """int |V(r)|^p dr / r."""
    return integrate_piecewise(lambda r, da, db: np.abs(V(r)) ** p / r, V.knots, tol=tol)


def _zero_breakdown(constant: float, with_remainder: bool) -> SeminormBreakdown:
    z = QuadResult(0.0, 0.0, 0)
    return SeminormBreakdown(z, constant, z, z if with_remainder else None)


def rayleigh_full_radial(params: HardyParams, profile: ProfileFunction,
                         with_remainder: bool = False, tol: float = ENERGY_TOL) -> SeminormBreakdown:
    """Weighted seminorm of the radial function u(|x|) on R^d minus the origin,
    the weighted L^p integral and (optionally) the remainder E_w[v]."""
    require(params, Regime.FULL)
    _check_profile(profile)
    const = constant_C(params).constant
    if is_zero(profile):
        return _zero_breakdown(const, with_remainder)
    gamma, p = params.gamma_full, params.p
    V = profile.times_power(gamma)
    lhs = homogeneous_energy(V, p, gamma, _full_kernel(params, params.alpha, params.beta, gamma), tol)
    mom = _log_moment(V, p, tol)
    area = sf.sphere_area(params.d)
    rhs = QuadResult(area * mom.value, area * mom.abs_err, mom.n_evals, mom.converged)
    rem = None
    if with_remainder:
        shift = p * gamma / 2.0
        kern = _full_kernel(params, params.alpha + shift, params.beta + shift, 0.0)
        rem = homogeneous_energy(V, p, 0.0, kern, tol)
    return SeminormBreakdown(lhs, const, rhs, rem)


def rayleigh_half_profile(params: HardyParams, profile: ProfileFunction,
                          with_remainder: bool = False, tol: float = ENERGY_TOL) -> SeminormBreakdown:
    """Same for u(x) = phi(x_d) on the half-space; the x' integration is the
    Gamma-function prefactor of the kernel."""
    require(params, Regime.HALF)
    _check_profile(profile)
    const = constant_D(params).constant
    if is_zero(profile):
        return _zero_breakdown(const, with_remainder)
    gamma, p = params.gamma_half, params.p
    V = profile.times_power(gamma)
    lhs = homogeneous_energy(V, p, gamma, _half_kernel(params, params.alpha, params.beta, gamma), tol)
    rhs = _log_moment(V, p, tol)
    rem = None
    if with_remainder:
        shift = p * gamma / 2.0
        kern = _half_kernel(params, params.alpha - shift, params.beta - shift, 0.0)
        rem = homogeneous_energy(V, p, 0.0, kern, tol)
    return SeminormBreakdown(lhs, const, rhs, rem)


def _breakdown(regime, params, profile, with_remainder=False, tol=ENERGY_TOL):
    regime = Regime.parse(regime)
    if regime is Regime.FULL:
        return rayleigh_full_radial(params, profile, with_remainder, tol)
    if regime is Regime.HALF:
        return rayleigh_half_profile(params, profile, with_remainder, tol)
    raise HardyError(f"no radial reduction for regime {regime.value}")


def ground_state_identity_p2(params: HardyParams, profile: ProfileFunction,
                             regime=Regime.FULL, tol: float = ENERGY_TOL,
                             eps: float = 1e-300) -> float:
    """|E[u] - C int|u|^2 weight - E_w[v]| / max(E[u], eps) for p = 2."""
    if params.p != 2:
        raise ValidationError([Violation("p=2", "the ground-state identity needs p = 2")])
    br = _breakdown(regime, params, profile, True, tol)
    resid = br.lhs.value - br.rhs_constant * br.rhs_integral.value - br.remainder.value
    return abs(resid) / max(br.lhs.value, eps)


@dataclass(frozen=True)
class RemainderReport:
    breakdown: SeminormBreakdown
    c_p: float
    margin: float

    @property
    def relative_margin(self) -> float:
        lhs = self.breakdown.lhs.value
        return self.margin / lhs if lhs > 0 else 0.0


def remainder_positivity(params: HardyParams, profile: ProfileFunction,
                         regime=Regime.FULL, tol: float = ENERGY_TOL) -> RemainderReport:
    """E[u] - C int|u|^p weight - c_p E_w[v], which should be >= 0 for p >= 2."""
    if not params.p >= 2:
        raise ValidationError([Violation("p>=2", "the remainder bound needs p >= 2")])
    br = _breakdown(regime, params, profile, True, tol)
    cp = remainder_coeff(params.p).c_p
    return RemainderReport(br, cp, br.margin - cp * br.remainder.value)


@dataclass(frozen=True)
class ChainReport:
    """Mixed-weight seminorm of v >= its {x_d > y_d} part with the ratio
    weight >= the same part without it = half the symmetric seminorm."""

    mixed: QuadResult
    upper_ratio: QuadResult
    upper_plain: QuadResult
    half_symmetric: QuadResult

    @property
    def gaps(self) -> tuple[float, float, float]:
        return (self.mixed.value - self.upper_ratio.value,
                self.upper_ratio.value - self.upper_plain.value,
                self.upper_plain.value - self.half_symmetric.value)

    def tolerance(self) -> float:
        return 1e-8 * max(1.0, self.mixed.value) + self.mixed.abs_err + self.upper_ratio.abs_err


def hsm_positivity_chain(params: HardyParams, profile: ProfileFunction,
                         tol: float = ENERGY_TOL) -> ChainReport:
    """The chain of lower bounds for the half-space remainder term of v = x_d^gamma u."""
    require(params, Regime.HALF)
    if not params.p >= 2 or not params.sp < params.d:
        raise ValidationError([Violation("p>=2, sp<d", "chain needs p >= 2 and sp < d")])
    _check_profile(profile)
    if params.alpha < params.beta:
        params = params.swapped()  # the seminorm is symmetric in (alpha, beta)
    z = QuadResult(0.0, 0.0, 0)
    if is_zero(profile):
        return ChainReport(z, z, z, z)
    sp, p = params.sp, params.p
    a1 = -(1 - params.alpha + params.beta - sp) / 2.0
    b1 = -(1 + params.alpha - params.beta - sp) / 2.0
    c = (sp - 1.0) / 2.0
    A = halfspace_prefactor(params.d, sp)
    V = profile.times_power(params.gamma_half)

    def energy(terms, pref=A):
        return homogeneous_energy(V, p, 0.0, TriangleKernel(tuple(terms), pref, sp), tol)

    # on {x_d > y_d} with y_d = t x_d the weight x^a1 y^b1 becomes t^b1;
    # the mirrored triangle contributes t^a1
    mixed = energy((a1, b1))
    upper_ratio = energy((b1,))
    upper_plain = energy((c,))
    sym = energy((c, c), A / 2.0)
    return ChainReport(mixed, upper_ratio, upper_plain, sym)


def interval_inequality(params: HardyParams, profile: ProfileFunction,
                        tol: float = ENERGY_TOL) -> SeminormBreakdown:
    """Seminorm on J = (0, 1) with weights d_J(x)^alpha d_J(y)^beta against
    D(1, s, p, alpha, beta) times int |u|^p d_J^(alpha+beta-sp)."""
    require(params, Regime.INTERVAL)
    _check_profile(profile)
    lo, hi = profile.support
    if not (0 < lo and hi < 1):
        raise ValidationError([Violation("support", "profile support must lie inside (0, 1)")])
    one = params.with_(d=1)
    const = constant_D(one).constant
    if is_zero(profile):
        return _zero_breakdown(const, False)
    sp, p, al, be = params.sp, params.p, params.alpha, params.beta
    breaks = sorted(set(profile.knots) | {0.0, 0.5, 1.0})
    evals = {"n": 0, "ok": True}

    def inner(r, omr):
        # rho = u r < r; 1 - rho = (1 - r) + (r - rho) stays exact
        mr = min(r, omr)

        def g(u, uc):
            rho, gap = u * r, uc * r
            du = profile.increment(r, gap, rho)
            mrho = np.minimum(rho, omr + gap)
            w = 0.5 * (mr ** al * mrho ** be + mr ** be * mrho ** al)
            with np.errstate(divide="ignore", invalid="ignore"):
                core = np.abs(du / gap) ** p * gap ** (p - 1.0 - sp)
            return 2.0 * r * np.where(du == 0.0, 0.0, core * w)

        u_pts, s_pts = ratio_breaks(r, breaks)
        res = ratio_integral(g, u_pts, tol, 10, s_pts)
        evals["n"] += res.n_evals
        evals["ok"] &= res.converged
        return res.value

    parts = []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        def outer(r, da, db, last=(hi == 1.0)):
            omr = db if last else 1.0 - r
            return np.array([inner(ri, oi) for ri, oi in zip(r, np.broadcast_to(omr, r.shape))])

        parts.append(integrate_piecewise(outer, [lo, hi], tol=tol))
    tot = combine(parts)
    lhs = QuadResult(tot.value, tot.abs_err, tot.n_evals + evals["n"], tot.converged and evals["ok"])

    def rhs_f(x, da, db, last):
        m = np.minimum(x, db if last else 1.0 - x)
        return np.abs(profile(x)) ** p * m ** (al + be - sp)

    rhs = combine([integrate_piecewise(lambda x, da, db, last=(hi == 1.0): rhs_f(x, da, db, last),
                                       [lo, hi], tol=tol)
                   for lo, hi in zip(breaks[:-1], breaks[1:])])
    return SeminormBreakdown(lhs, const, rhs)


@dataclass(frozen=True)
class SharpnessReport:
    regime: Regime
    params: HardyParams
    deltas: tuple
    quotients: tuple
    constant: float

    @property
    def monotone(self) -> bool:
        q = self.quotients
        return all(b <= a * (1 + 1e-9) for a, b in zip(q[:-1], q[1:]))

    @property
    def final_gap(self) -> float:
        return self.quotients[-1] / self.constant - 1.0


def sharpness_family(params: HardyParams, regime=Regime.HALF,
                     deltas: Sequence[float] = DELTA_GRID, tol: float = ENERGY_TOL) -> SharpnessReport:
    """Quotients of the near-optimal family around the ground state."""
    regime = Regime.parse(regime)
    gamma = params.gamma_full if regime is Regime.FULL else params.gamma_half
    quotients = []
    const = None
    for delta in deltas:
        prof = ProfileFunction.near_optimal(gamma, delta, params.p)
        br = _breakdown(regime, params, prof, False, tol)
        const = br.rhs_constant
        quotients.append(br.quotient)
    return SharpnessReport(regime, params, tuple(deltas), tuple(quotients), const)


def dimension_ratio(params: HardyParams, profile: ProfileFunction, tol: float = ENERGY_TOL):
    """(quotient in dimension d / quotient in dimension 1) and D(d)/D(1)."""
    qd = rayleigh_half_profile(params, profile, tol=tol).quotient
    q1 = rayleigh_half_profile(params.with_(d=1), profile, tol=tol).quotient
    ratio_c = constant_D(params).constant / constant_D(params.with_(d=1)).constant
    return qd / q1, ratio_c


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    n: int


def monte_carlo_full_energy(params: HardyParams, profile: ProfileFunction, n: int = 10 ** 7,
                            seed: int = 12345, chunk: int = 10 ** 6) -> MonteCarloEstimate:
    """Importance-sampled estimate of the d-dimensional E[u] for radial u.

    x is uniform in the ball B of radius sup(supp u) and y = x + z with an
    isotropic z whose radial density is proportional to rho^(lambda-1) below
    1 and rho^(-1-mu) above 1, matched to the diagonal and far-field decay of
    the integrand. Pairs with y outside B count twice (mirror pairs).
    """
    require(params, Regime.FULL)
    d, p, sp = params.d, params.p, params.sp
    al, be = params.alpha, params.beta
    R = profile.support[1]
    lam = max(p - sp, 0.05)
    mu = max(sp + min(al, be), 0.05)
    w_in = 0.5
    vol = math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0) * R ** d
    area = sf.sphere_area(d)
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        m = min(chunk, n - done)
        g = rng.standard_normal((m, d))
        x = g / np.linalg.norm(g, axis=1, keepdims=True) * (R * rng.uniform(size=m) ** (1.0 / d))[:, None]
        inner = rng.uniform(size=m) < w_in
        v = rng.uniform(size=m)
        rho = np.where(inner, v ** (1.0 / lam), v ** (-1.0 / mu))
        dens_r = np.where(inner, w_in * lam * rho ** (lam - 1.0), (1 - w_in) * mu * rho ** (-1.0 - mu))
        dirs = rng.standard_normal((m, d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        y = x + rho[:, None] * dirs
        q = dens_r / (area * rho ** (d - 1))
        nx, ny = np.linalg.norm(x, axis=1), np.linalg.norm(y, axis=1)
        du = np.abs(profile(nx) - profile(ny)) ** p
        wgt = 0.5 * (nx ** -al * ny ** -be + nx ** -be * ny ** -al)
        mult = np.where(ny > R, 2.0, 1.0)
        vals = du * wgt * rho ** (-d - sp) * mult * vol / q
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        done += m
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return MonteCarloEstimate(mean, math.sqrt(var / n), n)
