"""Parameter records, admissibility checks and shared tolerances."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

# cross-method comparison tolerances
REL_TOL_CLOSED = 1e-8
REL_TOL_REMOVABLE = 1e-4
# quadrature targets for the constants
QUAD_TOL = 1e-10
QUAD_ACCEPT = 1e-8
# parameters this close (relative) to a degenerate hyperplane count as on it
HYPERPLANE_TOL = 1e-12


class HardyError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(HardyError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(v.message for v in self.violations) or "invalid parameters"
        super().__init__(msg)


class NumericalError(HardyError, ArithmeticError):
    """A quadrature or series did not reach its tolerance."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class Regime(str, enum.Enum):
    FULL = "full"
    HALF = "half"
    INTERVAL = "interval"
    CONVEX = "convex"

    @classmethod
    def parse(cls, value) -> "Regime":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "-")
        if key in ("full-punctured", "full-space", "rd"):
            return cls.FULL
        if key in ("half-space", "halfspace"):
            return cls.HALF
        return cls(key)


class Method(str, enum.Enum):
    INTEGRAL = "integral"
    CLOSED_FORM = "closed_form"
    LIMIT_S0 = "limit_s0"


@dataclass(frozen=True)
class HardyParams:
    d: int
    s: float
    p: float
    alpha: float
    beta: float

    @property
    def sp(self) -> float:
        return self.s * self.p

    @property
    def gamma_full(self) -> float:
        return (self.d - self.alpha - self.beta - self.sp) / self.p

    @property
    def gamma_half(self) -> float:
        return (1.0 + self.alpha + self.beta - self.sp) / self.p

    def swapped(self) -> "HardyParams":
        return HardyParams(self.d, self.s, self.p, self.beta, self.alpha)

    def with_(self, **kw) -> "HardyParams":
        vals = dict(d=self.d, s=self.s, p=self.p, alpha=self.alpha, beta=self.beta)
        vals.update(kw)
        return HardyParams(**vals)


@dataclass(frozen=True)
class Violation:
    condition: str
    message: str


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_err: float
    n_evals: int
    converged: bool = True

    def __post_init__(self):
        if not math.isfinite(self.abs_err) or self.abs_err < 0:
            raise ValueError(f"abs_err must be finite and >= 0, got {self.abs_err}")


@dataclass(frozen=True)
class ConstantReport:
    params: HardyParams
    constant: float
    method: Method
    quad: Optional[QuadResult] = field(default=None)


def _open_interval(name, value, lo, hi, out):
    if not (lo < value < hi):
        out.append(Violation(f"{name} in ({lo:g}, {hi:g})",
                             f"{name}={value:g} not in ({lo:g}, {hi:g})"))


def _near(x: float, y: float) -> bool:
    return abs(x - y) <= HYPERPLANE_TOL * max(1.0, abs(x), abs(y))


def validate(params: HardyParams, regime) -> list[Violation]:
    """Return the hypotheses of `regime` that `params` fails (empty if admissible).

    ``s == 0`` switches to the limiting regimes: weights in (0, d) on the
    full space and in (-1, 0) on the half-space.
    """
    regime = Regime.parse(regime)
    d, s, p, a, b = params.d, params.s, params.p, params.alpha, params.beta
    out: list[Violation] = []
    if int(d) != d or d < 1:
        out.append(Violation("d >= 1 integer", f"d={d} is not a positive integer"))
    if not (0.0 <= s < 1.0):
        out.append(Violation("s in [0, 1)", f"s={s:g} not in [0, 1)"))
    if not p >= 1.0:
        out.append(Violation("p >= 1", f"p={p:g} < 1"))
    if any(math.isnan(x) for x in (s, p, a, b)):
        out.append(Violation("finite", "NaN parameter"))
        return out
    if out:
        return out
    sp = s * p
    weights = (("alpha", a), ("beta", b), ("alpha+beta", a + b))
    if regime is Regime.FULL:
        lo, hi = (0.0, float(d)) if s == 0 else (-sp, float(d))
        for name, v in weights:
            _open_interval(name, v, lo, hi, out)
        if _near(sp + a + b, float(d)):
            out.append(Violation("sp+alpha+beta != d", "sp+alpha+beta = d (gamma = 0)"))
    elif regime is Regime.HALF:
        lo, hi = (-1.0, 0.0) if s == 0 else (-1.0, sp)
        for name, v in weights:
            _open_interval(name, v, lo, hi, out)
        if _near(1.0 + a + b, sp):
            out.append(Violation("1+alpha+beta != sp", "1+alpha+beta = sp (gamma = 0)"))
    else:
        if s == 0:
            out.append(Violation("s > 0", f"the {regime.value} regime needs s > 0"))
        hi = 0.0 if regime is Regime.CONVEX else sp
        for name, v in weights:
            if regime is Regime.CONVEX:
                if not (-1.0 < v <= 0.0):
                    out.append(Violation(f"{name} in (-1, 0]", f"{name}={v:g} not in (-1, 0]"))
            else:
                _open_interval(name, v, -1.0, hi, out)
        if not sp > 1.0 + a + b:
            out.append(Violation("sp > 1+alpha+beta", f"sp={sp:g} <= 1+alpha+beta={1 + a + b:g}"))
    return out


DEGENERATE_CONDITIONS = ("sp+alpha+beta != d", "1+alpha+beta != sp")


def is_degenerate(params: HardyParams, regime) -> bool:
    """True if the only failed hypothesis is the gamma = 0 hyperplane."""
    v = validate(params, regime)
    return bool(v) and all(x.condition in DEGENERATE_CONDITIONS for x in v)


def require(params: HardyParams, regime, allow_degenerate: bool = False) -> None:
    """Raise ValidationError unless admissible. With `allow_degenerate` the
    gamma = 0 hyperplane is accepted (the constants vanish there)."""
    violations = validate(params, regime)
    if allow_degenerate:
        violations = [v for v in violations if v.condition not in DEGENERATE_CONDITIONS]
    if violations:
        raise ValidationError(violations)
