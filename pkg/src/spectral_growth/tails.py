"""Certified bounds on spectral bin counts beyond an enumerated cutoff.

A tail model asserts ``gamma_n <= upper * n**degree * rate**n`` for all
``n >= start`` and, optionally, ``gamma_n >= lower * n**degree * rate**n``.
``gamma_n`` counts eigenvalues in the bin ``(n-1, n]``. When ``exact`` is
given it returns the exact bin count, and ``integer_levels`` says every
eigenvalue in bin ``n`` equals ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable


@dataclass(frozen=True)
class TailModel:
    rate: float = 1.0
    degree: float = 0.0
    upper: float = 1.0
    lower: float = 0.0
    start: int = 1
    exact: Callable[[int], int] | None = None
    integer_levels: bool = False
    label: str = ""

    def bound(self, n: int) -> float:
        return self.upper * n**self.degree * self.rate**n

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "rate": self.rate,
            "degree": self.degree,
            "upper": self.upper,
            "lower": self.lower,
            "exact": self.exact is not None,
            "integer_levels": self.integer_levels,
        }


def free_group_tail(rank: int) -> TailModel:
    """Sphere sizes ``2k (2k-1)**(n-1)`` of the free group on ``k`` letters."""
    r = 2 * rank - 1
    c = 2 * rank / r
    return TailModel(
        rate=float(r),
        upper=c,
        lower=c,
        exact=lambda n: 2 * rank * r ** (n - 1),
        integer_levels=True,
        label=f"free({rank}) spheres",
    )


def l1_sphere_size(dim: int, n: int) -> int:
    """Number of points of ``Z^dim`` with l1 norm exactly ``n``."""
    if n == 0:
        return 1
    return sum(2**k * math.comb(dim, k) * math.comb(n - 1, k - 1) for k in range(1, dim + 1))


def free_abelian_tail(dim: int) -> TailModel:
    # comb(n-1, k-1) <= n**(k-1) / (k-1)! <= n**(dim-1) / (k-1)!  for n >= 1
    c = sum(2**k * math.comb(dim, k) / math.factorial(k - 1) for k in range(1, dim + 1))
    return TailModel(
        rate=1.0,
        degree=float(dim - 1),
        upper=c,
        exact=lambda n: l1_sphere_size(dim, n),
        integer_levels=True,
        label=f"zd({dim}) spheres",
    )


def tail_sum(model: TailModel, t: float, first: int) -> float:
    """Upper bound on ``sum_{n >= first} gamma_n * e^{-t * level_n}``.

    Bin ``n`` contributes at most ``gamma_n e^{-t(n-1)}``, or ``gamma_n e^{-tn}``
    with integer levels. Returns ``inf`` when the bound series diverges.
    """
    first = max(first, model.start)
    q_log = math.log(model.rate) - t
    if q_log >= 0.0:
        return math.inf
    shift = 0.0 if model.integer_levels else t
    d = model.degree

    def term(n: int) -> float:
        return model.upper * math.exp(d * math.log(n) + n * q_log + shift)

    total = 0.0
    n = first
    while True:
        # ratio of consecutive terms is ((n+1)/n)^d * q, decreasing in n
        ratio = math.exp(d * math.log1p(1.0 / n) + q_log)
        if ratio < 1.0:
            return total + term(n) / (1.0 - ratio)
        total += term(n)
        n += 1
