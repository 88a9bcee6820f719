"""Approach of the full-space and half-space constants to their s = 0 limits.

Prints the relative gap at s = 10^-k and the value after one Richardson
step, which removes the leading linear term.

    python3 scripts/s0_convergence.py
"""

from hardy_sharp import HardyParams
from hardy_sharp.constants import constant_C, constant_C_s0, constant_D, constant_D_s0

FULL = [HardyParams(2, 0.0, 2, 0.5, 0.7), HardyParams(1, 0.0, 2, 0.3, 0.4),
        HardyParams(3, 0.0, 2, 1.0, 1.5)]
HALF = [HardyParams(1, 0.0, 2, -0.3, -0.4), HardyParams(2, 0.0, 2, -0.1, -0.8)]
S_VALUES = (1e-2, 1e-3, 1e-4, 1e-5)


def table(name, points, const, limit):
    print(f"{name}: d,alpha,beta,limit," + ",".join(f"gap(s={s:g})" for s in S_VALUES)
          + ",richardson_gap")
    for p in points:
        lim = limit(p).constant
        vals = [const(p.with_(s=s)).constant for s in S_VALUES]
        gaps = [abs(v - lim) / lim for v in vals]
        rich = abs((10 * vals[-1] - vals[-2]) / 9 - lim) / lim
        print(f"  {p.d},{p.alpha},{p.beta},{lim:.12g}," + ",".join(f"{g:.3e}" for g in gaps)
              + f",{rich:.3e}")


def main():
    table("full", FULL, constant_C, constant_C_s0)
    table("half", HALF, constant_D, constant_D_s0)


if __name__ == "__main__":
    main()
