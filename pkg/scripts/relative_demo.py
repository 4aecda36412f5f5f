"""Relative pipeline on the two reference inclusions.

Z^2 > Z x {0} with l = |m| is normal and proper on the quotient; F_2 > <a>
with the b-exponent-sum kernel is invariant but neither proper nor
quasi-normal. Runs the CLI pipeline on both and prints a short digest.
"""

import json

from spectral_growth import cli

JOBS = {
    "Z2 > axis": ["relative", "--group", "zd(2)", "--inclusion", "axis(0)", "--kernel", "table(abs-m)",
                  "--Lambda", "10", "--t", "0.1,1,2"],
    "F2 > <a>": ["relative", "--group", "free(2)", "--inclusion", "cyclic-free(a)",
                 "--kernel", "pullback(expsum(b), wordlength)", "--Lambda", "3", "--max-radius", "6"],
}


def main():
    import contextlib
    import io

    for name, argv in JOBS.items():
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli.run(argv)
        rep = json.loads(buf.getvalue())
        print(f"== {name} (exit {code})")
        print("  invariance:", rep["invariance"]["pass"])
        print("  proper at:", [(p["cutoff"], p["count"], p["complete"]) for p in rep["properness"]])
        print("  orbit counts:", [p["orbit_counts"] for p in rep["quasi_normality"]["probes"]][:3],
              rep["quasi_normality"]["verdict"])
        for p in rep["partitions"]:
            print(f"  t={p['t']}: [{p['partial_sum']}, {p['upper']}] {p['verdict']}")
        print("  criterion:", rep["criterion"])


if __name__ == "__main__":
    main()
