"""Rayleigh quotients of the near-optimal family against the sharp constant.

Prints one row per delta for each configured case; the quotient should
decrease toward the constant as delta shrinks.

    python3 scripts/sharpness_experiment.py [--deltas 0.4,0.2,0.1,0.05]
"""

import argparse
import time

from hardy_sharp import HardyParams, Regime
from hardy_sharp.cli import parse_values
from hardy_sharp.verifier import sharpness_family

CASES = [
    (Regime.HALF, HardyParams(1, 0.6, 2, 0.1, -0.3)),
    (Regime.HALF, HardyParams(2, 0.7, 2, 0.2, 0.1)),
    (Regime.FULL, HardyParams(1, 0.3, 2, 0.0, 0.0)),
    (Regime.FULL, HardyParams(2, 0.5, 2, 0.3, -0.2)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--deltas", type=parse_values, default=[0.4, 0.2, 0.1, 0.05, 0.02, 0.01])
    args = ap.parse_args()
    print("regime,d,s,p,alpha,beta,delta,quotient,constant,gap")
    for regime, params in CASES:
        t0 = time.perf_counter()
        rep = sharpness_family(params, regime, deltas=tuple(args.deltas))
        for delta, q in zip(rep.deltas, rep.quotients):
            print(f"{regime.value},{params.d},{params.s},{params.p},{params.alpha},{params.beta},"
                  f"{delta},{q:.12g},{rep.constant:.12g},{q / rep.constant - 1:.4e}")
        print(f"# monotone={rep.monotone} elapsed={time.perf_counter() - t0:.1f}s", flush=True)


if __name__ == "__main__":
    main()
