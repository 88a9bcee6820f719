"""Double-exponential (tanh-sinh) quadrature on finite intervals.

Integrands may ask for the exact distances to both endpoints (``gaps=True``).
This matters for kernels such as ``(1-t)^(-1-sp)``: near t = 1 the
difference ``1 - t`` cannot be recovered from a rounded ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import NumericalError, QuadResult

# nodes are kept while the endpoint distance stays representable
T_MAX = 5.4
LOG_RATIO = 8.0


@dataclass(frozen=True)
class Integrand1D:
    """A (vectorized) integrand on the open interval (a, b).

    ``sigma_a``/``sigma_b`` declare the algebraic behaviour ``(x-a)^sigma_a``
    and ``(b-x)^sigma_b`` at the endpoints. With ``gaps=True`` the callable is
    invoked as ``func(x, x - a, b - x)`` with both distances exact.
    """

    func: Callable
    a: float
    b: float
    sigma_a: float = 0.0
    sigma_b: float = 0.0
    gaps: bool = False
    log_scale: bool = False

    def __post_init__(self):
        if not (self.sigma_a > -1 and self.sigma_b > -1):
            raise ValueError("endpoint exponents must exceed -1 for integrability")
        if not self.b > self.a:
            raise ValueError("need a < b")
        if self.log_scale and not self.a > 0:
            raise ValueError("log_scale needs a > 0")


@dataclass(frozen=True)
class Integrand2D:
    """Integrand on the square (lo, hi)^2, singular along the diagonal.

    ``func(r, rho, gap)`` is called with scalar ``r``, an array ``rho`` and
    ``gap = |r - rho|`` computed exactly. ``breaks`` lists interior points
    where the integrand has kinks in either variable.
    """

    func: Callable
    lo: float
    hi: float
    diag_exponent: float = 0.0
    breaks: Sequence[float] = field(default_factory=tuple)
    symmetric: bool = False

    def __post_init__(self):
        if not self.diag_exponent > -1:
            raise ValueError("diagonal singularity must be integrable (exponent > -1)")
        if not self.hi > self.lo:
            raise ValueError("need lo < hi")


def _level_nodes(level: int):
    """Abscissae t_j of the new nodes at `level` (step 2^-level)."""
    h = 2.0 ** -level
    if level == 0:
        n = int(T_MAX)
        t = np.arange(-n, n + 1, dtype=float)
    else:
        n = int(T_MAX / h)
        k = np.arange(-n, n + 1)
        t = k[k % 2 != 0] * h
    return t, h


def _reference_nodes(level: int):
    """Nodes on (0, 1) as exact distances (ua, ub) to both ends, with weights."""
    t, h = _level_nodes(level)
    q = math.pi * np.sinh(t)
    with np.errstate(over="ignore"):
        ua = 1.0 / (1.0 + np.exp(-q))
        ub = 1.0 / (1.0 + np.exp(q))
    w = math.pi * np.cosh(t) * ua * ub
    keep = (ua > 0) & (ub > 0) & (w > 0)
    return ua[keep], ub[keep], w[keep], h


def tanh_sinh_rule(level: int):
    """Fixed rule on (0, 1) using all nodes up to `level`.

    Returns (x, 1 - x, weights); both distances are exact.
    """
    parts = [_reference_nodes(k) for k in range(level + 1)]
    h = parts[-1][3]
    ua = np.concatenate([p[0] for p in parts])
    ub = np.concatenate([p[1] for p in parts])
    w = np.concatenate([p[2] for p in parts]) * h
    return ua, ub, w


def _map_nodes(f: Integrand1D, ua, ub):
    """Reference nodes mapped to (a, b): x, exact distances da, db, Jacobian."""
    if f.log_scale:
        ya, yb = math.log(f.a), math.log(f.b)
        span = yb - ya
        da_y, db_y = span * ua, span * ub
        y = np.where(ua < 0.5, ya + da_y, yb - db_y)
        x = np.exp(y)
        da = f.a * np.expm1(da_y)
        db = -f.b * np.expm1(-db_y)
        jac = span * x
    else:
        span = f.b - f.a
        da, db = span * ua, span * ub
        x = np.where(ua < 0.5, f.a + da, f.b - db)
        jac = span
    return x, da, db, jac


def _call(f: Integrand1D, x, da, db):
    vals = f.func(x, da, db) if f.gaps else f.func(x)
    return np.broadcast_to(np.asarray(vals, dtype=float), x.shape)


def _eval_level(f: Integrand1D, level: int):
    # exact complementary distances on the reference interval (0, 1)
    ua, ub, w, h = _reference_nodes(level)
    x, da, db, jac = _map_nodes(f, ua, ub)
    contrib = _call(f, x, da, db) * w * jac
    if not np.all(np.isfinite(contrib)):
        bad = x[~np.isfinite(contrib)][:3]
        raise NumericalError(f"non-finite integrand values near x={bad}")
    return float(np.sum(contrib)), float(np.sum(np.abs(contrib))), x.size, h


def _endpoint_tails(f: Integrand1D, level: int) -> tuple[float, float]:
    """Mass beyond the trapezoid cells of `level` at each end, f(x0) |x0 - end| / (1 + sigma)
    for the declared exponent sigma, and its uncertainty.

    The uncertainty compares with the exponent measured between the cell edge
    and a point a quarter step further in (many decades apart in distance).
    """
    h = 2.0 ** -level
    edge = (int(T_MAX / h) + 0.5) * h
    t = np.array([edge, edge - 0.25])
    q = math.pi * np.sinh(t)
    near = 1.0 / (1.0 + np.exp(q))  # distances to the endpoint in reference units
    far = 1.0 / (1.0 + np.exp(-q))
    near = near[near > 0]
    if near.size < 2:
        return 0.0, 0.0
    far = far[:near.size]
    total, unc = 0.0, 0.0
    for ua, ub, sigma, idx in ((near, far, f.sigma_a, 1), (far, near, f.sigma_b, 2)):
        mapped = _map_nodes(f, ua, ub)
        dist = mapped[idx]
        try:
            with np.errstate(all="ignore"):
                vals = _call(f, mapped[0], mapped[1], mapped[2])
        except (NumericalError, ArithmeticError):
            # the integrand cannot be probed this close to the end
            continue
        f0, f1 = float(vals[0]), float(vals[1])
        if f0 == 0.0 or not (math.isfinite(f0) and math.isfinite(f1)):
            continue
        tail = f0 * dist[0] / (1.0 + sigma)
        err = abs(tail)
        if (f1 != 0.0 and (f0 > 0) == (f1 > 0) and dist[0] > 0 and dist[1] > 0
                and dist[1] != dist[0]):
            emp = ((math.log(abs(f1)) - math.log(abs(f0)))
                   / (math.log(dist[1]) - math.log(dist[0])))
            # an inconclusive probe keeps the whole tail as its uncertainty
            if math.isfinite(emp) and emp > -1.0:
                other = abs(f0 * dist[0] / (1.0 + emp) - tail)
                if math.isfinite(other):
                    err = other
        total += tail
        unc += err
    return total, unc


def integrate_1d(f: Integrand1D, tol: float = 1e-10, max_level: int = 10,
                 min_level: int = 3) -> QuadResult:
    """Integrate with successive halving of the tanh-sinh step.

    The mass beyond the outermost nodes is added from the declared endpoint
    exponents. The error estimate is the difference between the last two
    levels plus a rounding allowance and the uncertainty of that tail. If the tolerance is not met the best estimate is
    returned with ``converged=False``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    raw, absum, n, h = _eval_level(f, 0)
    tails, tail_err = _endpoint_tails(f, 0)
    prev = raw * h + tails
    err = math.inf
    total = prev
    for level in range(1, max_level + 1):
        r2, a2, n2, h = _eval_level(f, level)
        raw += r2
        absum += a2
        n += n2
        tails, tail_err = _endpoint_tails(f, level)
        total = raw * h + tails
        rounding = 1e-15 * absum * h * 8
        err = abs(total - prev) + rounding + tail_err
        prev = total
        if level >= min_level and err <= tol * max(1.0, abs(total)):
            return QuadResult(float(total), float(err), n, True)
    return QuadResult(float(total), float(err), n, False)


def quad(func, a, b, tol=1e-10, gaps=False, log_scale=False, sigma_a=0.0,
         sigma_b=0.0, **kw) -> QuadResult:
    return integrate_1d(Integrand1D(func, a, b, sigma_a, sigma_b, gaps, log_scale), tol, **kw)


def combine(results: Sequence[QuadResult]) -> QuadResult:
    if not results:
        return QuadResult(0.0, 0.0, 1)
    return QuadResult(
        math.fsum(r.value for r in results),
        math.fsum(r.abs_err for r in results),
        sum(r.n_evals for r in results),
        all(r.converged for r in results),
    )


def panels(points: Sequence[float]) -> list[tuple[float, float]]:
    pts = sorted(set(float(p) for p in points))
    return [(lo, hi) for lo, hi in zip(pts[:-1], pts[1:]) if hi > lo]


def integrate_piecewise(func, points: Sequence[float], tol: float = 1e-10,
                        gaps: bool = True, **kw) -> QuadResult:
    """Sum of tanh-sinh integrals over consecutive panels of `points`.

    Panels with a large endpoint ratio use the logarithmic variable, which
    keeps power-law integrands spread over many decades well resolved.
    """
    results = []
    for lo, hi in panels(points):
        use_log = lo > 0 and hi / lo > LOG_RATIO
        results.append(quad(func, lo, hi, tol=tol, gaps=gaps, log_scale=use_log, **kw))
    return combine(results)


def ratio_breaks(r: float, points: Sequence[float]):
    """Breaks of u = x / r for the points x in (0, r), split into u-values
    (x <= r/2) and exact distances 1 - u = (r - x) / r (x > r/2)."""
    u_pts = [x / r for x in points if 0 < x <= r / 2]
    s_pts = [(r - x) / r for x in points if r / 2 < x < r]
    return u_pts, s_pts


def ratio_integral(g, u_pts, tol, max_level, s_pts=None, u_lo=0.0) -> QuadResult:
    """Integrate g(u, 1 - u) over u_lo < u < 1 with kinks at the given breaks.

    On [0, 1/2] the variable is u; on [1/2, 1) it is s = 1 - u, so ``1 - u``
    is always exact. ``s_pts`` gives breaks near the diagonal as exact
    distances; when omitted they are derived from the u-values above 1/2.
    Long panels use a logarithmic scale, which resolves the diagonal
    singularity and kinks sitting close to it.
    """
    if s_pts is None:
        s_pts = [1.0 - p for p in u_pts if 0.5 < p < 1.0]
    s_top = min(0.5, 1.0 - u_lo)
    u_b = sorted({u_lo, 0.5} | {p for p in u_pts if u_lo < p < 0.5}) if u_lo < 0.5 else []
    s_b = sorted({0.0, s_top} | {p for p in s_pts if 0.0 < p < s_top})
    results = []
    for lo, hi in panels(u_b):
        results.append(quad(lambda u, da, db: g(u, 1.0 - u), lo, hi, tol=tol, gaps=True,
                            log_scale=lo > 0 and hi / lo > LOG_RATIO, max_level=max_level))
    for lo, hi in panels(s_b):
        results.append(quad(lambda sv, da, db: g(1.0 - sv, sv), lo, hi, tol=tol, gaps=True,
                            log_scale=lo > 0 and hi / lo > LOG_RATIO, max_level=max_level))
    return combine(results)


def integrate_2d(f: Integrand2D, tol: float = 1e-10, max_level: int = 9) -> QuadResult:
    """Iterated tanh-sinh over the square, split along the diagonal.

    Each triangle is parametrized by the ratio u = rho/r (or r/rho), which
    places the diagonal at the endpoint u = 1 of the inner integral.
    """
    inner_tol = tol * 0.1
    outer_pts = [f.lo] + [b for b in f.breaks if f.lo < b < f.hi] + [f.hi]
    state = {"n": 0, "ok": True}

    def lower(r):
        # rho in (lo, r) as u = rho / r
        u_pts, s_pts = ratio_breaks(r, [b for b in f.breaks if f.lo < b < r])
        res = ratio_integral(lambda u, uc: r * f.func(r, u * r, uc * r),
                             u_pts, inner_tol, max_level, s_pts, u_lo=f.lo / r)
        state["n"] += res.n_evals
        state["ok"] &= res.converged
        return res.value

    def upper(r):
        # rho in (r, hi) as u = r / rho, drho = r / u^2 du
        u_pts = [r / b for b in f.breaks if r < b < f.hi]
        s_pts = [(b - r) / b for b in f.breaks if r < b < f.hi]

        def g(u, uc):
            rho = r / u
            return f.func(r, rho, rho * uc) * r / (u * u)

        res = ratio_integral(g, u_pts, inner_tol, max_level, s_pts, u_lo=r / f.hi)
        state["n"] += res.n_evals
        state["ok"] &= res.converged
        return res.value

    def outer(r):
        out = np.empty_like(r)
        for i, ri in enumerate(r):
            v = lower(ri) if ri > f.lo else 0.0
            if f.symmetric:
                v *= 2.0
            elif ri < f.hi:
                v += upper(ri)
            out[i] = v
        return out

    res = integrate_piecewise(lambda r, da, db: outer(r), outer_pts, tol=tol,
                              max_level=max_level)
    return QuadResult(res.value, res.abs_err, res.n_evals + state["n"],
                      res.converged and state["ok"])
