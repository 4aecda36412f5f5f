"""Growth profiles and classifications for the built-in groups.

Usage: python scripts/growth_survey.py [--depth N]
"""

import argparse

from spectral_growth.kernels import DEFAULT_T_GRID, word_length_kernel
from spectral_growth.parsing import parse_group
from spectral_growth.spectral import classify, growth_profile, partition_function, spectrum_from_kernel

GROUPS = {
    "free(2)": 10,
    "free(3)": 8,
    "zd(1)": 25,
    "zd(2)": 25,
    "zd(3)": 15,
    "heisenberg": 7,
    "cyclic(12)": 12,
    "product(zd(1), cyclic(3))": 20,
}


def survey_one(spec, depth):
    model = parse_group(spec)
    kernel = word_length_kernel(model)
    trunc = spectrum_from_kernel(model, kernel, depth, depth + 1)
    profile = growth_profile(trunc, depth)
    parts = [partition_function(trunc, t, kernel.tail, 60) for t in DEFAULT_T_GRID]
    return profile, classify(profile, parts)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, help="override every per-group depth")
    args = ap.parse_args()
    print(f"{'group':28} {'N':>3} {'beta_N':>10} {'ratio':>8} {'dim':>6}  class")
    for spec, depth in GROUPS.items():
        depth = args.depth or depth
        profile, cls = survey_one(spec, depth)
        ratio = profile.omega_ratio[-1]
        dim = profile.spectral_dimension_seq[-1]
        print(
            f"{spec:28} {depth:>3} {profile.beta[-1]:>10} "
            f"{ratio if ratio is None else round(ratio, 4)!s:>8} {dim if dim is None else round(dim, 3)!s:>6}  {cls.label}"
        )


if __name__ == "__main__":
    main()
