"""Partition-function verdicts for synthetic bin counts over a fine t grid.

Geometric families gamma_n = round(R^n) carry a two-sided tail model, so
divergence can be certified; polynomial families gamma_n = n^d only carry an
upper bound. Prints one JSON document with the verdict per (family, t).
"""

import argparse
import math
import sys

from spectral_growth.report import dumps
from spectral_growth.spectral import GrowthProfile, partition_function
from spectral_growth.tails import TailModel

T_GRID = tuple(round(0.05 * k, 2) for k in range(1, 61))


def geometric(r, depth=16):
    gamma = [round(r**n) for n in range(depth + 1)]
    tail = TailModel(rate=r, degree=0, upper=1.5, lower=0.5, integer_levels=True, label=f"round({r}^n)")
    return GrowthProfile.from_gamma(gamma), tail


def polynomial(d, depth=16):
    gamma = [n**d for n in range(depth + 1)]
    tail = TailModel(rate=1.0, degree=d, upper=1.0, integer_levels=True, label=f"n^{d}")
    return GrowthProfile.from_gamma(gamma), tail


def families():
    for r in (1.5, 2.0, 3.0):
        yield f"geometric({r})", r, *geometric(r)
    for d in (1, 2, 3):
        yield f"polynomial({d})", 1.0, *polynomial(d)


def survey(ts=T_GRID):
    out = {}
    for name, rate, profile, tail in families():
        rows = []
        for t in ts:
            est = partition_function(profile, t, tail)
            rows.append({"t": t, "verdict": est.verdict, "upper": est.partial_sum + est.tail_bound})
        out[name] = {"log_rate": math.log(rate), "rows": rows}
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--output")
    args = ap.parse_args(argv)
    text = dumps({"t_grid": list(T_GRID), "families": survey()})
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
