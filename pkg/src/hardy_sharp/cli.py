"""Command-line interface: constants, verification suites, grid sweeps, s -> 0 limits.

Exit codes: 0 ok, 1 verification failure, 2 validation failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import constants as C
from . import verifier as V
from .core import (REL_TOL_CLOSED, REL_TOL_REMOVABLE, HardyError, HardyParams, NumericalError,
                   Regime, ValidationError, Violation, is_degenerate, require, validate)
from .geometry import ConvexBody, pseudo_distance_m
from .profiles import ProfileFunction

EXIT_OK, EXIT_VERIFY, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3
REGIME_CHOICES = ("full", "full-punctured", "half", "interval")
SWEEP_COLUMNS = ("regime", "d", "s", "p", "alpha", "beta", "constant_integral",
                 "constant_closed", "discrepancy", "status")
ENV_THREADS = "HARDY_SHARP_THREADS"


def fmt(x) -> str:
    """17 significant digits (round-trippable); empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _regime(value: str) -> Regime:
    try:
        return Regime.parse(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown regime {value!r}") from None


def _params(args) -> HardyParams:
    return HardyParams(int(args.d), float(args.s), float(args.p), float(args.alpha), float(args.beta))


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


# constants ---------------------------------------------------------------

def integral_value(params: HardyParams, regime: Regime, degenerate: bool = False) -> float:
    if regime is Regime.FULL:
        if params.s == 0:
            return C.constant_C_s0(params, route="integral").constant
        return C.constant_C(params, allow_degenerate=degenerate).constant
    require(params, regime, degenerate)
    if params.s == 0:
        raise ValueError("the half-space s = 0 limit has only the digamma form (p = 2)")
    return C.constant_D(params, allow_degenerate=degenerate).constant


def closed_value(params: HardyParams, regime: Regime, degenerate: bool = False) -> float:
    """p = 2 closed form; raises ValueError when none applies."""
    if regime is Regime.FULL:
        if params.s == 0:
            return C.constant_C_s0(params, route="closed").constant
        return C.constant_C_closed_p2(params, allow_degenerate=degenerate).constant
    require(params, regime, degenerate)
    if params.s == 0:
        return C.constant_D_s0(params).constant
    return C.constant_D_closed_p2(params, allow_degenerate=degenerate).constant


def closed_tolerance(params: HardyParams, regime: Regime) -> float:
    near_half = regime is not Regime.FULL and abs(params.s - 0.5) < C.COT_WINDOW
    return REL_TOL_REMOVABLE if near_half else REL_TOL_CLOSED


def _check_interval_dim(params: HardyParams, regime: Regime):
    if regime is Regime.INTERVAL and params.d != 1:
        raise ValidationError([Violation("d = 1", "the interval regime is one-dimensional")])


def cmd_constant(args) -> int:
    params, regime = _params(args), args.regime
    _check_interval_dim(params, regime)
    out = {"regime": regime.value, "d": params.d, "s": params.s, "p": params.p,
           "alpha": params.alpha, "beta": params.beta}
    # on the gamma = 0 hyperplane the constant is computed (it vanishes) and flagged
    degen = params.s > 0 and is_degenerate(params, regime)
    if degen:
        out["degenerate"] = "gamma = 0"
    if args.method in ("integral", "both"):
        out["constant_integral"] = integral_value(params, regime, degen)
    if args.method in ("closed", "both"):
        out["constant_closed"] = closed_value(params, regime, degen)
    if args.method == "limit-s0":
        out["s"] = 0.0
        out.update(_limit_values(params.with_(s=0.0), regime))
    if args.method == "both":
        out["discrepancy"] = _rel(out["constant_integral"], out["constant_closed"])
    status = EXIT_OK
    if out.get("discrepancy", 0.0) > closed_tolerance(params, regime):
        status = EXIT_VERIFY
    _emit(out, args.json)
    return status


def _emit(out: dict, as_json: bool):
    if as_json:
        print(json.dumps(out))
    else:
        for k, v in out.items():
            print(f"{k} = {fmt(v)}")


def _limit_values(p0: HardyParams, regime: Regime) -> dict:
    """s = 0 constants: integral route (full space) and digamma form (p = 2)."""
    out = {}
    if regime is Regime.FULL:
        out["constant_integral"] = integral_value(p0, regime)
    if p0.p == 2:
        out["constant_closed"] = closed_value(p0, regime)
    if not out:
        raise ValueError("the half-space s = 0 limit needs p = 2")
    if len(out) == 2:
        out["discrepancy"] = _rel(out["constant_integral"], out["constant_closed"])
    return out


def cmd_limits(args) -> int:
    """Constants at decreasing s next to their s = 0 limit."""
    base, regime = _params(args), args.regime
    if regime is Regime.INTERVAL:
        raise ValidationError([Violation("regime", "no s = 0 limit for the interval regime")])
    head = {"s": 0.0, **_limit_values(base.with_(s=0.0), regime)}
    limit = head.get("constant_closed", head.get("constant_integral"))
    rows = [head]
    for s in args.s_values:
        val = integral_value(base.with_(s=s), regime)
        rows.append({"s": s, "constant_integral": val, "rel_to_limit": _rel(val, limit)})
    if args.json:
        print(json.dumps(rows))
    else:
        for row in rows:
            print(" ".join(f"{k}={fmt(v)}" for k, v in row.items()))
    return EXIT_VERIFY if head.get("discrepancy", 0.0) > REL_TOL_CLOSED else EXIT_OK


# verification suites -------------------------------------------------------

INEQ_TOL = 1e-6
IDENTITY_TOL = 1e-6
SHARP_GAP = 0.05
MDIST_POINTS = 100

SUITE_DEFAULTS = {
    "hardy-full": (Regime.FULL, HardyParams(1, 0.3, 2, 0.0, 0.0)),
    "hardy-half": (Regime.HALF, HardyParams(1, 0.5, 2, 0.2, -0.3)),
    "identity-p2": (Regime.FULL, HardyParams(1, 0.4, 2, 0.1, 0.2)),
    "remainder": (Regime.FULL, HardyParams(1, 0.4, 3, 0.1, 0.2)),
    "hsm-chain": (Regime.HALF, HardyParams(2, 0.6, 2, 0.3, -0.2)),
    "interval": (Regime.INTERVAL, HardyParams(1, 0.7, 2, 0.1, -0.2)),
    "mdist": (Regime.CONVEX, HardyParams(3, 0.5, 2, 0.0, 0.0)),
    "sharpness": (Regime.HALF, HardyParams(1, 0.6, 2, 0.1, -0.3)),
}


def radial_profiles():
    return [ProfileFunction.tent(0.5, 1.0, 1.5),
            ProfileFunction.smooth_bump(0.5, 1.5),
            ProfileFunction.truncated_power(0.5, 0.4, 0.8, 1.6, 2.0)]


def interval_profiles():
    return [ProfileFunction.smooth_bump(0.2, 0.8),
            ProfileFunction.tent(0.1, 0.5, 0.9),
            ProfileFunction.tent(0.05, 0.2, 0.6)]


@dataclass
class CaseResult:
    label: str
    values: dict
    ok: bool


def _suite_params(args):
    regime, base = SUITE_DEFAULTS[args.suite]
    if args.regime is not None and args.suite in ("identity-p2", "remainder", "sharpness"):
        regime = args.regime
    vals = {k: getattr(args, k) for k in ("d", "s", "p", "alpha", "beta")
            if getattr(args, k) is not None}
    return regime, base.with_(**vals)


def _inequality_case(br, label) -> CaseResult:
    ok = br.margin >= -INEQ_TOL * br.lhs.value
    return CaseResult(label, dict(quotient=br.quotient, constant=br.rhs_constant,
                                  relative_margin=br.relative_margin), ok)


def suite_cases(suite: str, regime: Regime, params: HardyParams, args) -> list[CaseResult]:
    if suite == "mdist":
        return _mdist_cases(args.shape, params.d, args.a)
    require(params, regime)
    out = []
    if suite in ("hardy-full", "hardy-half"):
        run = V.rayleigh_full_radial if suite == "hardy-full" else V.rayleigh_half_profile
        for prof in radial_profiles():
            out.append(_inequality_case(run(params, prof), prof.describe()))
    elif suite == "interval":
        for prof in interval_profiles():
            out.append(_inequality_case(V.interval_inequality(params, prof), prof.describe()))
    elif suite == "identity-p2":
        for prof in radial_profiles():
            res = V.ground_state_identity_p2(params, prof, regime)
            out.append(CaseResult(prof.describe(), dict(residual=res), res <= IDENTITY_TOL))
    elif suite == "remainder":
        for prof in radial_profiles():
            rep = V.remainder_positivity(params, prof, regime)
            out.append(CaseResult(prof.describe(), dict(c_p=rep.c_p, margin=rep.margin,
                                                        relative_margin=rep.relative_margin),
                                  rep.margin >= -INEQ_TOL * rep.breakdown.lhs.value))
    elif suite == "hsm-chain":
        for prof in radial_profiles():
            rep = V.hsm_positivity_chain(params, prof)
            gaps = rep.gaps
            out.append(CaseResult(prof.describe(),
                                  dict(gap1=gaps[0], gap2=gaps[1], gap3=gaps[2]),
                                  min(gaps) >= -rep.tolerance()))
    elif suite == "sharpness":
        rep = V.sharpness_family(params, regime)
        vals = {f"q[{d:g}]": q for d, q in zip(rep.deltas, rep.quotients)}
        vals.update(constant=rep.constant, final_gap=rep.final_gap)
        out.append(CaseResult("near_optimal", vals, rep.monotone and rep.final_gap <= SHARP_GAP))
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return out


def _mdist_cases(shape: str, d: int, a: float) -> list[CaseResult]:
    if shape == "half_space":
        body = ConvexBody.half_space(d)
    elif shape == "ball":
        body = ConvexBody.ball(d)
    elif shape == "box":
        body = ConvexBody.box((1.0, 0.6, 0.4)[:d])
    else:
        raise ValueError(f"unknown shape {shape!r}")
    out = []
    for i, x in enumerate(body.sample_points(MDIST_POINTS, seed=0)):
        m = pseudo_distance_m(body, x, a)
        dist = body.boundary_distance(x)
        if shape == "half_space":
            ok = abs(m - dist) <= 1e-8 * dist
        else:
            ok = m <= dist * (1.0 + 1e-12)
        out.append(CaseResult(f"point {i}", dict(m=m, dist=dist), ok))
    return out


def cmd_verify(args) -> int:
    regime, params = _suite_params(args)
    cases = suite_cases(args.suite, regime, params, args)
    failed = [c for c in cases if not c.ok]
    for c in cases:
        vals = " ".join(f"{k}={fmt(v)}" for k, v in c.values.items())
        print(f"{'ok  ' if c.ok else 'FAIL'} {c.label} {vals}")
    if args.suite == "mdist":
        setting = f"shape={args.shape} d={params.d} a={fmt(args.a)}"
    else:
        setting = (f"regime={regime.value} d={params.d} s={fmt(params.s)} p={fmt(params.p)} "
                   f"alpha={fmt(params.alpha)} beta={fmt(params.beta)}")
    print(f"suite={args.suite} {setting} cases={len(cases)} failed={len(failed)}")
    return EXIT_VERIFY if failed else EXIT_OK


# sweeps --------------------------------------------------------------------

@dataclass
class SweepSpec:
    regime: Regime
    d: list = field(default_factory=list)
    s: list = field(default_factory=list)
    p: list = field(default_factory=list)
    alpha: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    fmt: str = "csv"
    out: str | None = None
    timing: bool = True

    def grid(self) -> list[HardyParams]:
        """Points in lexicographic order of (d, s, p, alpha, beta) indices."""
        return [HardyParams(int(d), s, p, a, b) for d in self.d for s in self.s
                for p in self.p for a in self.alpha for b in self.beta]


def parse_values(text: str) -> list[float]:
    """Comma list ``0.1,0.2`` or inclusive range ``lo:hi:step``; empty gives []."""
    text = str(text).strip()
    if not text:
        return []
    if ":" in text:
        lo, hi, step = (float(t) for t in text.split(":"))
        if not step > 0:
            raise ValueError("range step must be positive")
        n = math.floor((hi - lo) / step + 1e-9) + 1
        # rounding keeps 0.1 + 2*0.1 printing as 0.3
        return [round(lo + i * step, 12) for i in range(max(n, 0))]
    return [float(t) for t in text.split(",") if t.strip()]


def sweep_point(task) -> dict:
    params, regime, timing = task
    row = {"regime": regime.value, "d": params.d, "s": params.s, "p": params.p,
           "alpha": params.alpha, "beta": params.beta, "constant_integral": None,
           "constant_closed": None, "discrepancy": None, "status": "ok"}
    t0 = time.perf_counter()
    try:
        _check_interval_dim(params, regime)
        if validate(params, regime):
            row["status"] = "inadmissible"
        else:
            row["constant_integral"] = integral_value(params, regime)
            if params.p == 2:
                row["constant_closed"] = closed_value(params, regime)
                row["discrepancy"] = _rel(row["constant_integral"], row["constant_closed"])
                if row["discrepancy"] > closed_tolerance(params, regime):
                    row["status"] = "mismatch"
    except ValidationError:
        row["status"] = "inadmissible"
    except (NumericalError, ArithmeticError, ValueError):
        row["status"] = "numerical_error"
    if timing:
        row["wall_time"] = time.perf_counter() - t0
    return row


def pool_size() -> int:
    env = os.environ.get(ENV_THREADS)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{ENV_THREADS} must be a positive integer")
        return n
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec) -> list[dict]:
    tasks = [(pt, spec.regime, spec.timing) for pt in spec.grid()]
    workers = min(pool_size(), len(tasks))
    if workers <= 1:
        return [sweep_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        # map yields in submission order whatever the completion order
        return list(ex.map(sweep_point, tasks))


def render_rows(rows: list[dict], spec: SweepSpec) -> str:
    cols = list(SWEEP_COLUMNS) + (["wall_time"] if spec.timing else [])
    if spec.fmt == "json":
        return json.dumps([{c: r.get(c) for c in cols} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def sweep_spec(args) -> SweepSpec:
    """Flags override values from the optional [sweep] section of --config."""
    conf = {}
    if args.config:
        cp = configparser.ConfigParser()
        if not cp.read(args.config):
            raise ValueError(f"cannot read config file {args.config}")
        if cp.has_section("sweep"):
            conf = dict(cp["sweep"])

    def pick(name, default):
        val = getattr(args, name, None)
        return val if val is not None else conf.get(name, default)

    return SweepSpec(
        regime=_regime(pick("regime", "half")),
        d=[int(v) for v in parse_values(pick("d", "1"))],
        s=parse_values(pick("s", "")),
        p=parse_values(pick("p", "2")),
        alpha=parse_values(pick("alpha", "0")),
        beta=parse_values(pick("beta", "0")),
        fmt=pick("format", "csv"),
        out=pick("out", None),
        timing=not args.no_timing,
    )


def cmd_sweep(args) -> int:
    spec = sweep_spec(args)
    if spec.fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {spec.fmt!r}")
    rows = run_sweep(spec)
    text = render_rows(rows, spec)
    if spec.out:
        with open(spec.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    statuses = {r["status"] for r in rows}
    if "numerical_error" in statuses:
        return EXIT_NUMERICAL
    return EXIT_VERIFY if "mismatch" in statuses else EXIT_OK


# entry point ---------------------------------------------------------------

def _add_params(sp, defaults: bool):
    dflt = (lambda v: v) if defaults else (lambda v: None)
    sp.add_argument("--d", type=int, default=dflt(1))
    sp.add_argument("--s", type=float, default=dflt(0.5))
    sp.add_argument("--p", type=float, default=dflt(2.0))
    sp.add_argument("--alpha", type=float, default=dflt(0.0))
    sp.add_argument("--beta", type=float, default=dflt(0.0))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hardy-sharp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constant", help="compute a sharp constant")
    c.add_argument("--regime", type=_regime, default=Regime.FULL, metavar="|".join(REGIME_CHOICES))
    _add_params(c, True)
    c.add_argument("--method", choices=("integral", "closed", "both", "limit-s0"),
                   default="integral")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_constant)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=tuple(SUITE_DEFAULTS))
    v.add_argument("--regime", type=_regime, default=None, metavar="|".join(REGIME_CHOICES))
    _add_params(v, False)
    v.add_argument("--shape", choices=("half_space", "ball", "box"), default="ball")
    v.add_argument("--a", type=float, default=1.0, help="exponent of the pseudodistance")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("sweep", help="constants over a parameter grid")
    w.add_argument("--config", help="key=value file with a [sweep] section")
    w.add_argument("--regime", default=None, metavar="|".join(REGIME_CHOICES))
    for name in ("d", "s", "p", "alpha", "beta"):
        w.add_argument(f"--{name}", default=None, help="comma list or lo:hi:step")
    w.add_argument("--format", choices=("csv", "json"), default=None)
    w.add_argument("--out", default=None)
    w.add_argument("--no-timing", action="store_true", help="omit the wall_time column")
    w.set_defaults(func=cmd_sweep)

    lim = sub.add_parser("limits", help="constants as s -> 0 against the s = 0 limit")
    lim.add_argument("--regime", type=_regime, default=Regime.FULL, metavar="|".join(REGIME_CHOICES))
    _add_params(lim, True)
    lim.add_argument("--s-values", type=parse_values, default=[1e-1, 1e-2, 1e-3])
    lim.add_argument("--json", action="store_true")
    lim.set_defaults(func=cmd_limits)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (HardyError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
