"""One-dimensional trial profiles for radial or x_d-dependent test functions.

A profile is continuous and piecewise of the form ``x**e * P(x)`` with P a
polynomial, which keeps it closed under multiplication by powers of x (the
ground-state substitution) and under dilation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as npoly

from .core import HardyError

# below this relative gap the increment u(x) - u(x-g) uses a Taylor expansion
TAYLOR_GAP = 1e-5
# smallest inner cut of the near-optimal family; keeps all ratios representable
T0_FLOOR = 1e-120


class ProfileKind(str, Enum):
    TRUNCATED_POWER = "truncated_power"
    TENT = "tent"
    SMOOTH_BUMP = "smooth_bump"
    NEAR_OPTIMAL = "near_optimal"


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    exponent: float
    coeffs: tuple  # P(x) = sum coeffs[k] x^k

    def value(self, x):
        return x ** self.exponent * npoly.polyval(x, self.coeffs)

    def scaled_derivatives(self, x, order=3):
        """[x^k f^(k)(x) / x^e for k = 0..order] for f = x^e P(x).

        These stay of the size of P even when x spans hundreds of decades.
        """
        e = self.exponent
        pder = [np.asarray(self.coeffs, dtype=float)]
        for _ in range(order):
            pder.append(npoly.polyder(pder[-1]) if pder[-1].size > 1 else np.zeros(1))
        # x^m P^(m)(x)
        xp = [npoly.polyval(x, np.concatenate([np.zeros(m), c])) if np.any(c) else np.zeros_like(x)
              for m, c in enumerate(pder)]
        fall = [1.0]
        for j in range(1, order + 1):
            fall.append(fall[-1] * (e - j + 1))
        return [sum(math.comb(k, j) * fall[j] * xp[k - j] for j in range(k + 1))
                for k in range(order + 1)]

    def times_power(self, g: float) -> "Piece":
        return Piece(self.lo, self.hi, self.exponent + g, self.coeffs)

    def dilated(self, lam: float) -> "Piece":
        # x -> f(lam x) = lam^e x^e P(lam x)
        c = tuple(ck * lam ** (k) * lam ** self.exponent for k, ck in enumerate(self.coeffs))
        return Piece(self.lo / lam, self.hi / lam, self.exponent, c)

    def scaled(self, c: float) -> "Piece":
        return Piece(self.lo, self.hi, self.exponent, tuple(c * ck for ck in self.coeffs))


def _linear_through(x0, y0, x1, y1):
    slope = (y1 - y0) / (x1 - x0)
    return (y0 - slope * x0, slope)


@dataclass(frozen=True)
class ProfileFunction:
    kind: ProfileKind
    params: dict
    pieces: tuple = field(repr=False)

    def __post_init__(self):
        if not self.pieces:
            raise HardyError("profile has no pieces")
        first, last = self.pieces[0], self.pieces[-1]
        scale = max(abs(float(pc.value(np.array([0.5 * (pc.lo + pc.hi)]))[0])) for pc in self.pieces)
        ends = (abs(float(first.value(np.array([first.lo]))[0])),
                abs(float(last.value(np.array([last.hi]))[0])))
        if max(ends) > 1e-9 * max(scale, 1e-300):
            raise HardyError("profile must vanish at both ends of its support")
        if self.pieces[0].lo <= 0:
            raise HardyError("profile support must lie in (0, inf)")
        for a, b in zip(self.pieces[:-1], self.pieces[1:]):
            if a.hi != b.lo:
                raise HardyError("profile pieces must be contiguous")

    # construction -------------------------------------------------------
    @classmethod
    def tent(cls, a: float, peak: float, b: float, height: float = 1.0) -> "ProfileFunction":
        if not 0 < a < peak < b:
            raise HardyError("tent needs 0 < a < peak < b")
        pieces = (Piece(a, peak, 0.0, _linear_through(a, 0.0, peak, height)),
                  Piece(peak, b, 0.0, _linear_through(peak, height, b, 0.0)))
        return cls(ProfileKind.TENT, dict(a=a, peak=peak, b=b, height=height), pieces)

    @classmethod
    def plateau(cls, a: float, c0: float, c1: float, b: float) -> "ProfileFunction":
        """Constant 1 on [c0, c1] with linear edges down to 0 at a and b."""
        return cls.truncated_power(0.0, a, c0, c1, b)

    @classmethod
    def truncated_power(cls, q: float, a: float, c0: float, c1: float, b: float) -> "ProfileFunction":
        """x^q on [c0, c1], tapered linearly to 0 on [a, c0] and [c1, b]."""
        if not 0 < a < c0 < c1 < b:
            raise HardyError("truncated_power needs 0 < a < c0 < c1 < b")
        pieces = (Piece(a, c0, 0.0, _linear_through(a, 0.0, c0, c0 ** q)),
                  Piece(c0, c1, q, (1.0,)),
                  Piece(c1, b, 0.0, _linear_through(c1, c1 ** q, b, 0.0)))
        return cls(ProfileKind.TRUNCATED_POWER, dict(q=q, a=a, c0=c0, c1=c1, b=b), pieces)

    @classmethod
    def smooth_bump(cls, a: float, b: float, k: int = 4) -> "ProfileFunction":
        """(1 - z^2)^k with z the affine map of [a, b] onto [-1, 1]."""
        if not 0 < a < b:
            raise HardyError("smooth_bump needs 0 < a < b")
        m, h = (a + b) / 2.0, (b - a) / 2.0
        z = npoly.Polynomial([-m / h, 1.0 / h])
        poly = (1 - z * z) ** k
        mid = (Piece(a, m, 0.0, tuple(poly.coef)), Piece(m, b, 0.0, tuple(poly.coef)))
        return cls(ProfileKind.SMOOTH_BUMP, dict(a=a, b=b, k=k), mid)

    @classmethod
    def near_optimal(cls, gamma: float, delta: float, p: float,
                     t0: float | None = None) -> "ProfileFunction":
        """x^(-gamma+delta) on [t0, 1], x^(-gamma-delta) on [1, 1/t0], linear
        tapers to 0 on [t0/2, t0] and [1/t0, 2/t0].

        By default t0 = delta^(2/(p delta)), so the cut-off tails of the ground
        state carry a fraction delta^2 of the weighted mass, floored at T0_FLOOR.
        """
        if not delta > 0:
            raise HardyError("delta must be positive")
        if t0 is None:
            t0 = max(math.exp(2.0 * math.log(delta) / (p * delta)), T0_FLOOR)
        t0 = min(t0, 0.5)
        t1 = 1.0 / t0
        lo_e, hi_e = -gamma + delta, -gamma - delta
        pieces = (Piece(t0 / 2, t0, 0.0, _linear_through(t0 / 2, 0.0, t0, t0 ** lo_e)),
                  Piece(t0, 1.0, lo_e, (1.0,)),
                  Piece(1.0, t1, hi_e, (1.0,)),
                  Piece(t1, 2 * t1, 0.0, _linear_through(t1, t1 ** hi_e, 2 * t1, 0.0)))
        return cls(ProfileKind.NEAR_OPTIMAL, dict(gamma=gamma, delta=delta, p=p, t0=t0), pieces)

    # transformations ----------------------------------------------------
    def _replace(self, pieces, **extra) -> "ProfileFunction":
        params = dict(self.params)
        params.update(extra)
        return ProfileFunction(self.kind, params, tuple(pieces))

    def times_power(self, g: float) -> "ProfileFunction":
        """x^g * u(x)."""
        if g == 0:
            return self
        return self._replace([pc.times_power(g) for pc in self.pieces],
                             power=self.params.get("power", 0.0) + g)

    def dilated(self, lam: float) -> "ProfileFunction":
        """x -> u(lam * x)."""
        return self._replace([pc.dilated(lam) for pc in self.pieces])

    def scaled(self, c: float) -> "ProfileFunction":
        return self._replace([pc.scaled(c) for pc in self.pieces])

    def reflected(self, length: float = 1.0) -> "ProfileFunction":
        """x -> u(length - x); polynomial pieces only."""
        out = []
        flip = npoly.Polynomial([length, -1.0])
        for pc in reversed(self.pieces):
            if pc.exponent != 0:
                raise HardyError("reflection needs polynomial pieces")
            poly = npoly.Polynomial(pc.coeffs)(flip)
            out.append(Piece(length - pc.hi, length - pc.lo, 0.0, tuple(poly.coef)))
        return self._replace(out)

    # evaluation ---------------------------------------------------------
    @property
    def support(self) -> tuple[float, float]:
        return self.pieces[0].lo, self.pieces[-1].hi

    @property
    def knots(self) -> list[float]:
        return [pc.lo for pc in self.pieces] + [self.pieces[-1].hi]

    @property
    def _edges(self) -> np.ndarray:
        return np.array(self.knots)

    def __call__(self, x):
        """Profile values; exactly 0 outside the open support (the pieces
        vanish at both ends, so only rounding is discarded)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for pc in self.pieces:
            m = (x > pc.lo) & (x <= pc.hi)
            if np.any(m):
                out[m] = pc.value(x[m])
        out[x >= self.support[1]] = 0.0
        return out

    def _taylor(self, i, x, g):
        """Increment f(x) - f(x - g) inside piece i (0 for the virtual zero
        pieces i = -1 and i = len(pieces))."""
        if i < 0 or i >= len(self.pieces):
            return np.zeros_like(x)
        pc = self.pieces[i]
        D = pc.scaled_derivatives(x)
        z = g / x
        return x ** pc.exponent * z * (D[1] - D[2] * z / 2.0 + D[3] * z * z / 6.0)

    def increment(self, x, gap, y=None):
        """u(x) - u(x - gap), accurate as gap/x -> 0.

        Small gaps use third-order Taylor expansions on each side of a knot
        crossed by (x - gap, x). ``y`` is x - gap when it is known more
        accurately than the rounded difference (e.g. y = t*x with t tiny);
        it is used for large gaps.
        """
        shape = np.broadcast_shapes(np.shape(x), np.shape(gap))
        x, gap = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=float)),
                                     np.atleast_1d(np.asarray(gap, dtype=float)))
        y = x - gap if y is None else np.broadcast_to(np.asarray(y, dtype=float), x.shape)
        out = np.atleast_1d(self(x) - self(y))
        small = gap < TAYLOR_GAP * x
        if not np.any(small):
            return out.reshape(shape)
        edges = self._edges
        xs, gs = x[small], gap[small]
        ys = xs - gs
        # piece i holds (edges[i], edges[i+1]]; -1 and n are the zero outside
        ix = np.searchsorted(edges, xs, side="left") - 1
        iy = np.searchsorted(edges, ys, side="left") - 1
        res = out[small].copy()
        same = ix == iy
        cross = ix == iy + 1
        for i in np.unique(ix[same]):
            m = same & (ix == i)
            res[m] = self._taylor(i, xs[m], gs[m])
        for i in np.unique(ix[cross]):
            m = cross & (ix == i)
            k = edges[i]
            g1 = xs[m] - k  # exact: x and k agree to within a factor 2
            g2 = np.maximum(gs[m] - g1, 0.0)
            kk = np.full_like(g1, k)
            res[m] = self._taylor(i, xs[m], g1) + self._taylor(i - 1, kk, g2)
        out[small] = res
        return out.reshape(shape)

    def describe(self) -> str:
        args = ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                         for k, v in self.params.items())
        return f"{self.kind.value}({args})"
