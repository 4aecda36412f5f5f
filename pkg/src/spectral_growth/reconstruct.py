"""Rebuild a proper c.n.d. kernel from resolvent diagonals of the generator.

With ``L`` the multiplication operator by ``l``, the resolvent diagonal is
``omega_eps(s) = <delta_s, (I + eps L)^{-1} delta_s> = 1 / (1 + eps l(s))``.
Choosing ``eps_k`` so that ``1 - omega_{eps_k} <= 2^-k`` on the ball ``F_k``,
the sum ``l'(s) = sum_k (1 - omega_{eps_k}(s))`` converges everywhere, is
conditionally negative definite and H-invariant whenever ``l`` is, and is
proper on ``G/H``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .groups import GroupElement, GroupModel, ball_enumerate
from .kernels import LengthKernel, QuotientData
from .relative import CosetStructure, quotient_ball, sweep_cosets
from .spectral import CertificateError

DEFAULT_DEPTH = 24


def defect(eps: float, value: float) -> float:
    """``1 - omega_eps`` at a point where the kernel equals ``value``."""
    return 1.0 - 1.0 / (1.0 + eps * value)


def resolvent_diagonal(kernel: LengthKernel, eps: float) -> Callable[[GroupElement], float]:
    if eps <= 0:
        raise ValueError("eps must be positive")
    return lambda s: 1.0 / (1.0 + eps * kernel(s))


@dataclass(frozen=True)
class EpsilonSchedule:
    radii: tuple[int, ...]
    epsilons: tuple[float, ...]
    maxima: tuple[float, ...]

    @property
    def depth(self) -> int:
        return len(self.epsilons)

    def radius(self, k: int) -> int:
        """Radius of ``F_k`` (1-based), extended by ``max(k, last radius)`` past the schedule."""
        if k <= len(self.radii):
            return self.radii[k - 1]
        return max(k, self.radii[-1] if self.radii else 0)

    def to_list(self) -> list:
        return [[r, e] for r, e in zip(self.radii, self.epsilons)]


def _largest_eps(bound: float, m: float) -> float:
    # eps M / (1 + eps M) <= bound  <=>  eps <= bound / (M (1 - bound))
    eps = bound / (m * (1.0 - bound))
    while defect(eps, m) > bound:
        eps = math.nextafter(eps, 0.0)
    return eps


def epsilon_schedule(
    model: GroupModel, kernel: LengthKernel, depth: int = DEFAULT_DEPTH, radii: Sequence[int] | None = None
) -> EpsilonSchedule:
    """Maximal ``eps_k`` with ``max over F_k of (1 - omega_{eps_k}) <= 2^-k``; ``F_k`` is the ball of radius ``k``."""
    if radii is None:
        radii = range(1, depth + 1)
    radii = tuple(radii)
    if len(radii) != depth or any(b < a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be nondecreasing with one entry per level")
    eps, maxima = [], []
    for k, r in enumerate(radii, start=1):
        m = max(kernel(g) for g in ball_enumerate(model, r).elements)
        maxima.append(m)
        eps.append(1.0 if m <= 0 else _largest_eps(2.0**-k, m))
    return EpsilonSchedule(radii, tuple(eps), tuple(maxima))


@dataclass(frozen=True, eq=False)
class ReconstructedKernel:
    base: LengthKernel
    schedule: EpsilonSchedule
    depth: int

    def __post_init__(self):
        if self.depth > self.schedule.depth:
            raise ValueError("truncation depth exceeds the schedule")

    def __call__(self, s: GroupElement) -> float:
        v = self.base(s)
        return math.fsum(defect(e, v) for e in self.schedule.epsilons[: self.depth])

    def partial(self, s: GroupElement, k: int) -> float:
        v = self.base(s)
        return math.fsum(defect(e, v) for e in self.schedule.epsilons[:k])

    def truncation_bound(self, s: GroupElement) -> float:
        """Upper bound on the omitted terms ``k > depth``.

        Term ``k`` is at most ``2^-k`` once ``s`` lies in ``F_k`` and below 1
        before that.
        """
        n = self.base.model.length(s)
        k = self.depth + 1
        total = 0.0
        while self.schedule.radius(k) < n:
            total += 1.0
            k += 1
        return total + 2.0 ** -(k - 1)

    def coercivity(self, r: int) -> float:
        f = self.base.coercivity(r)
        return math.fsum(defect(e, f) for e in self.schedule.epsilons[: self.depth])

    def as_kernel(self) -> LengthKernel:
        eps = self.schedule.epsilons[: self.depth]

        def transported(q: QuotientData) -> QuotientData:
            return QuotientData(lambda r: math.fsum(defect(e, q.coercivity(r)) for e in eps))

        return LengthKernel(
            model=self.base.model,
            func=self,
            label=f"reconstruct({self.base.label}, K={self.depth})",
            coercivity=self.coercivity,
            quotients={name: transported(q) for name, q in self.base.quotients.items()},
        )


def reconstruct(
    model: GroupModel, kernel: LengthKernel, schedule: EpsilonSchedule | None = None, depth: int = DEFAULT_DEPTH
) -> ReconstructedKernel:
    if kernel.model != model:
        raise ValueError("kernel lives on a different group")
    if schedule is None:
        schedule = epsilon_schedule(model, kernel, depth)
    return ReconstructedKernel(kernel, schedule, depth)


@dataclass(frozen=True)
class AuditReport:
    levels: int
    gamma_sizes: tuple[int, ...]
    gamma_sets: tuple[tuple, ...]
    sampled: int
    min_lprime: float | None
    bound: float
    slack: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "N": self.levels,
            "gamma_sizes": list(self.gamma_sizes),
            "sampled": self.sampled,
            "min_lprime": self.min_lprime,
            "bound": self.bound,
            "slack": self.slack,
            "pass": self.passed,
        }


def properness_audit(
    rk: ReconstructedKernel,
    cosets: CosetStructure,
    levels: int,
    max_radius: int = 4096,
    sample_width: int = 16,
    cap: int | None = None,
) -> AuditReport:
    """Enumerate ``Gamma_k = {cosets : omega_{eps_k} >= 1/2}`` for ``k <= levels`` and
    check ``l' >= levels / 2`` on sampled cosets outside their union.
    """
    if levels > rk.depth:
        raise ValueError("audit levels exceed the truncation depth")
    base = rk.base
    eps = rk.schedule.epsilons[:levels]
    # omega_eps(s) >= 1/2  <=>  l(s) <= 1/eps
    threshold = max(1.0 / e for e in eps) * (1 + 1e-12)
    qd = base.quotient_data(cosets.label)
    sweep = sweep_cosets(cosets, base, qd.coercivity, threshold, max_radius, cap)
    if not sweep.complete:
        raise CertificateError(f"properness of {base.label} on G/H is not certified up to {threshold:g}")
    gammas = []
    union = set()
    for e in eps:
        members = tuple(rep for rep, _, v in sweep.reps if 1.0 / (1.0 + e * v) >= 0.5)
        gammas.append(members)
        union.update(members)
    slack = 2.0 ** -rk.depth
    if cosets.index is not None and len(union) >= cosets.index:
        sample = []
    else:
        sample = [rep for rep in quotient_ball(cosets, sweep.radius + sample_width, cap).cosets if rep not in union]
    values = [rk(s) for s in sample]
    bound = levels / 2.0
    min_val = min(values) if values else None
    passed = all(v >= bound - slack for v in values)
    fmt = cosets.parent.format
    return AuditReport(
        levels=levels,
        gamma_sizes=tuple(len(g) for g in gammas),
        gamma_sets=tuple(tuple(fmt(r) for r in g) for g in gammas),
        sampled=len(sample),
        min_lprime=min_val,
        bound=bound,
        slack=slack,
        passed=passed,
    )
