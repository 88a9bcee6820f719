"""Shared verification cases; results are cached so that the unit tests and the
acceptance summary compute each breakdown once per session."""

from functools import lru_cache

from hardy_sharp import HardyParams as H, ProfileFunction as PF, Regime
from hardy_sharp import verifier as V

TENT = ("tent", (0.5, 1.0, 1.5))
TENT12 = ("tent", (1.0, 1.5, 2.0))
BUMP = ("smooth_bump", (0.5, 1.5))
TRUNC = ("truncated_power", (0.5, 0.4, 0.8, 1.6, 2.0))


def make(spec):
    kind, args = spec
    return getattr(PF, kind)(*args)


INEQUALITY_CASES = [
    (Regime.FULL, H(1, 0.3, 2, 0.0, 0.0), TENT),
    (Regime.FULL, H(1, 0.3, 2, 0.0, 0.0), BUMP),
    (Regime.FULL, H(1, 0.6, 2, 0.3, -0.2), TRUNC),
    (Regime.FULL, H(2, 0.5, 3, 0.2, -0.1), BUMP),
    (Regime.FULL, H(3, 0.7, 1.5, 0.5, 1.0), TENT),
    (Regime.FULL, H(2, 0.8, 2, 0.7, 0.6), TENT),  # sp + alpha + beta > d
    (Regime.FULL, H(1, 0.4, 2.5, -0.3, 0.2), TENT12),
    (Regime.FULL, H(2, 0.25, 2, 0.0, 0.0), TRUNC),
    (Regime.HALF, H(1, 0.5, 2, 0.2, -0.3), TENT12),
    (Regime.HALF, H(3, 0.8, 4, 0.5, 0.9), BUMP),
    (Regime.HALF, H(1, 0.6, 2, 0.1, -0.3), TRUNC),
    (Regime.HALF, H(2, 0.9, 2, 0.5, 0.5), TENT),
    (Regime.HALF, H(1, 0.3, 3, -0.5, -0.2), BUMP),
    (Regime.HALF, H(2, 0.4, 2, 0.0, 0.0), TENT),
    (Regime.HALF, H(1, 0.7, 2.5, 0.8, 0.3), TRUNC),
    (Regime.HALF, H(3, 0.2, 2, -0.4, -0.1), TENT12),
    (Regime.INTERVAL, H(1, 0.9, 3, 0.5, 0.4), ("tent", (0.1, 0.5, 0.9))),
    (Regime.INTERVAL, H(1, 0.7, 2, 0.1, -0.2), ("smooth_bump", (0.2, 0.8))),
    (Regime.INTERVAL, H(1, 0.8, 2, 0.0, 0.0), ("tent", (0.05, 0.2, 0.6))),
    (Regime.INTERVAL, H(1, 0.6, 2.5, -0.3, 0.2), ("smooth_bump", (0.3, 0.95))),
]

IDENTITY_CASES = [
    (Regime.FULL, H(1, 0.4, 2, 0.1, 0.2), BUMP),
    (Regime.FULL, H(1, 0.4, 2, 0.1, 0.2), TENT),
    (Regime.FULL, H(1, 0.75, 2, -0.5, 0.3), TRUNC),
    (Regime.FULL, H(2, 0.5, 2, 0.3, 0.3), BUMP),
    (Regime.FULL, H(2, 0.8, 2, 0.7, 0.6), TENT12),
    (Regime.FULL, H(3, 0.3, 2, 0.0, 0.5), TENT),
    (Regime.HALF, H(1, 0.5, 2, 0.2, -0.3), TENT),
    (Regime.HALF, H(2, 0.6, 2, 0.1, -0.4), TRUNC),
    (Regime.HALF, H(1, 0.8, 2, 0.5, 0.2), BUMP),
    (Regime.HALF, H(3, 0.3, 2, -0.2, -0.6), TENT12),
    (Regime.HALF, H(2, 0.6, 2, 0.1, -0.4), ("smooth_bump", (0.2, 3.0))),
]


def label(case):
    regime, p, (kind, _) = case
    return f"{regime.value}-d{p.d}-s{p.s}-p{p.p}-a{p.alpha}-b{p.beta}-{kind}"


@lru_cache(maxsize=None)
def inequality(i):
    regime, params, spec = INEQUALITY_CASES[i]
    prof = make(spec)
    if regime is Regime.INTERVAL:
        return V.interval_inequality(params, prof)
    return V._breakdown(regime, params, prof)


@lru_cache(maxsize=None)
def identity(i):
    regime, params, spec = IDENTITY_CASES[i]
    return V.ground_state_identity_p2(params, make(spec), regime)
