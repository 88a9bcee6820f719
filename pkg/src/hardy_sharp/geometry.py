"""Convex bodies, ray distances and the direction-averaged pseudodistance m_a."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .core import HardyError, ValidationError, Violation
from .quadrature import tanh_sinh_rule

SPHERE_LEVEL = 5


class Shape(str, Enum):
    HALF_SPACE = "half_space"
    BALL = "ball"
    BOX = "box"


@dataclass(frozen=True)
class ConvexBody:
    """Half-space {x_d > 0}, centred ball of given radius, or centred box
    [-e_1, e_1] x ... x [-e_d, e_d]."""

    shape: Shape
    d: int
    radius: float = 1.0
    extents: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        if self.d not in (1, 2, 3):
            raise HardyError("bodies are supported in dimensions 1 to 3")
        if self.shape is Shape.BALL and not self.radius > 0:
            raise HardyError("ball radius must be positive")
        if self.shape is Shape.BOX:
            ext = tuple(float(e) for e in self.extents) or (1.0,) * self.d
            if len(ext) != self.d or min(ext) <= 0:
                raise HardyError("box needs d positive half-widths")
            object.__setattr__(self, "extents", ext)

    @classmethod
    def half_space(cls, d: int) -> "ConvexBody":
        return cls(Shape.HALF_SPACE, d)

    @classmethod
    def ball(cls, d: int, radius: float = 1.0) -> "ConvexBody":
        return cls(Shape.BALL, d, radius=radius)

    @classmethod
    def box(cls, extents) -> "ConvexBody":
        return cls(Shape.BOX, len(extents), extents=tuple(extents))

    def boundary_distance(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if self.shape is Shape.HALF_SPACE:
            return float(x[-1])
        if self.shape is Shape.BALL:
            return float(self.radius - np.linalg.norm(x))
        return float(np.min(np.asarray(self.extents) - np.abs(x)))

    def ray_distances(self, x, omega):
        """min{|t| : x + t*omega leaves the body} for each row of omega."""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            if self.shape is Shape.HALF_SPACE:
                return x[-1] / np.abs(omega[:, -1])
            if self.shape is Shape.BALL:
                xw = np.abs(omega @ x)
                slack = self.radius ** 2 - x @ x
                return slack / (np.sqrt(xw * xw + slack) + xw)
            gaps = np.asarray(self.extents) - np.abs(x)
            return np.min(gaps / np.abs(omega), axis=1)

    def sample_points(self, n: int, seed: int = 0, height: float = 1.0) -> np.ndarray:
        """Uniform interior points (half-space: x_d uniform in (0, height))."""
        rng = np.random.default_rng(seed)
        if self.shape is Shape.HALF_SPACE:
            pts = rng.uniform(-1.0, 1.0, size=(n, self.d))
            pts[:, -1] = rng.uniform(0.0, height, size=n)
            return pts
        if self.shape is Shape.BOX:
            return rng.uniform(-1.0, 1.0, size=(n, self.d)) * np.asarray(self.extents)
        g = rng.standard_normal((n, self.d))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        rad = self.radius * rng.uniform(0.0, 1.0, size=n) ** (1.0 / self.d)
        return g * rad[:, None]


def _panel_rule(lo, hi, level):
    ua, ub, w = tanh_sinh_rule(level)
    return lo + (hi - lo) * ua, (hi - lo) * w


@lru_cache(maxsize=16)
def sphere_rule(d: int, level: int = SPHERE_LEVEL):
    """Points and weights on the unit sphere S^{d-1} in R^d.

    d=1 is the exact two-point rule. d=2 uses tanh-sinh in the angle on
    quadrants; d=3 uses tanh-sinh in omega_3 on [-1, 0] and [0, 1] times
    tanh-sinh in the azimuth on quadrants. Panel ends sit where a coordinate
    of omega vanishes, so |omega_i|^a kinks are endpoint behaviour.
    """
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    quarter = math.pi / 2.0
    phis, wphi = zip(*[_panel_rule(k * quarter, (k + 1) * quarter, level) for k in range(4)])
    phi, wphi = np.concatenate(phis), np.concatenate(wphi)
    if d == 2:
        return np.column_stack([np.cos(phi), np.sin(phi)]), wphi
    if d == 3:
        cs, wcs = zip(*[_panel_rule(lo, hi, level) for lo, hi in ((-1.0, 0.0), (0.0, 1.0))])
        c, wc = np.concatenate(cs), np.concatenate(wcs)
        cc, pp = np.meshgrid(c, phi, indexing="ij")
        sin = np.sqrt(np.maximum(1.0 - cc * cc, 0.0))
        pts = np.column_stack([(sin * np.cos(pp)).ravel(), (sin * np.sin(pp)).ravel(), cc.ravel()])
        return pts, np.outer(wc, wphi).ravel()
    raise HardyError("spherical quadrature is implemented for d <= 3")


def sphere_integrate(func, d: int, level: int = SPHERE_LEVEL) -> float:
    pts, w = sphere_rule(d, level)
    return float(np.dot(w, func(pts)))


def vertical_moment(d: int, a: float, level: int = SPHERE_LEVEL) -> float:
    """Integral of |omega_d|^a over the sphere, by quadrature."""
    return sphere_integrate(lambda om: np.abs(om[:, -1]) ** a, d, level)


def vertical_moment_closed(d: int, a: float) -> float:
    """2 pi^((d-1)/2) Gamma((1+a)/2) / Gamma((d+a)/2)."""
    return 2.0 * math.pi ** ((d - 1) / 2.0) * math.gamma((1.0 + a) / 2.0) / math.gamma((d + a) / 2.0)


def pseudo_distance_m(body: ConvexBody, x, a: float, level: int = SPHERE_LEVEL) -> float:
    """m_a(x) = (int |omega_d|^a / int d_omega(x)^(-a))^(1/a)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (body.d,):
        raise ValidationError([Violation("shape", f"point must have {body.d} coordinates")])
    if not a > 0:
        raise ValidationError([Violation("a>0", "exponent a must be positive")])
    if not body.boundary_distance(x) > 0:
        raise ValidationError([Violation("interior", "point must lie in the interior of the body")])
    pts, w = sphere_rule(body.d, level)
    num = np.dot(w, np.abs(pts[:, -1]) ** a)
    with np.errstate(divide="ignore"):
        den = np.dot(w, body.ray_distances(x, pts) ** (-a))
    return float((num / den) ** (1.0 / a))
