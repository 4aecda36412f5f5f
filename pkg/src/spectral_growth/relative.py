"""Subgroup inclusions ``H < G``: right cosets, invariance, properness on ``G/H``.

Subgroups come with an explicit membership test and a canonical right-coset
representative (the shortest element of ``sH``); nothing is discovered by
coset enumeration. With ``B = L(H)`` the Jones projection is multiplication
by the indicator of ``H``, each coset projection has trace one, and relative
multiplicities are plain coset counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .groups import FreeAbelianGroup, FreeGroup, GroupElement, GroupModel, ball_enumerate
from .kernels import DEFAULT_T_GRID, LengthKernel
from .spectral import PartitionEstimate, SpectrumTruncation, group_values, partition_function
from .tails import TailModel

CRITERION_LABEL = "relative amenability criterion satisfied"


@dataclass(frozen=True, eq=False)
class CosetStructure:
    parent: GroupModel
    in_subgroup: Callable[[GroupElement], bool]
    coset_rep: Callable[[GroupElement], GroupElement]
    label: str
    index: int | None = None  # number of cosets, when known to be finite

    def same_coset(self, s: GroupElement, u: GroupElement) -> bool:
        g = self.parent
        return self.in_subgroup(g.multiply(g.invert(s), u))


def trivial_inclusion(model: GroupModel) -> CosetStructure:
    e = model.identity
    return CosetStructure(model, lambda g: g == e, lambda g: g, "trivial", model.order)


def full_inclusion(model: GroupModel) -> CosetStructure:
    e = model.identity
    return CosetStructure(model, lambda g: True, lambda g: e, "full", 1)


def axis_inclusion(model: GroupModel, i: int) -> CosetStructure:
    if not isinstance(model, FreeAbelianGroup):
        raise ValueError(f"axis(i) needs a zd(d) group, got {model.spec}")
    if not 0 <= i < model.dim:
        raise ValueError(f"axis {i} out of range for {model.spec}")

    def member(g):
        return all(x == 0 for k, x in enumerate(g) if k != i)

    def rep(g):
        return g[:i] + (0,) + g[i + 1 :]

    return CosetStructure(model, member, rep, f"axis({i})", 1 if model.dim == 1 else None)


def cyclic_free_inclusion(model: GroupModel, j: int) -> CosetStructure:
    """``<x_j>`` inside a free group; the representative strips trailing ``x_j`` powers."""
    if not isinstance(model, FreeGroup):
        raise ValueError(f"cyclic-free needs a free group, got {model.spec}")
    if not 0 <= j < model.rank:
        raise ValueError(f"generator {j} out of range for {model.spec}")

    def member(g):
        return all(c >> 1 == j for c in g)

    def rep(g):
        n = len(g)
        while n and g[n - 1] >> 1 == j:
            n -= 1
        return g[:n]

    return CosetStructure(model, member, rep, f"cyclic-free({j})", 1 if model.rank == 1 else None)


@dataclass(frozen=True)
class QuotientBall:
    horizon: int
    cosets: tuple
    min_lengths: tuple
    exhaustive: bool = False


def quotient_ball(cosets: CosetStructure, horizon: int, cap: int | None = None) -> QuotientBall:
    ball = ball_enumerate(cosets.parent, horizon, cap)
    seen: dict = {}
    for g, n in ball.items():
        r = cosets.coset_rep(g)
        if r not in seen:
            seen[r] = n
    key = cosets.parent.encode
    reps = sorted(seen, key=lambda r: (seen[r], key(r)))
    exhaustive = ball.exhaustive or (cosets.index is not None and len(reps) == cosets.index)
    return QuotientBall(horizon, tuple(reps), tuple(seen[r] for r in reps), exhaustive)


# ------------------------------------------------------------ invariance


@dataclass(frozen=True)
class InvarianceReport:
    radius: int
    passed: bool
    sample: tuple
    checked: int
    violations: tuple
    empty_sample: bool
    zero_set_is_subgroup: bool
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "pass": self.passed,
            "h_sample": list(self.sample),
            "checked": self.checked,
            "violations": list(self.violations),
            "empty_sample": self.empty_sample,
            "zero_set_is_subgroup": self.zero_set_is_subgroup,
            "tolerance": self.tolerance,
        }


def h_invariance_check(
    cosets: CosetStructure, kernel: LengthKernel, radius: int, tol: float = 1e-9, max_violations: int = 10
) -> InvarianceReport:
    """Checks ``l(sh) = l(hs) = l(s)`` and ``l(h) = 0`` over the ball and its ``H`` part."""
    g = cosets.parent
    ball = ball_enumerate(g, radius)
    sample = [h for h in ball.elements if cosets.in_subgroup(h)]
    violations: list[str] = []
    checked = 0

    def note(msg):
        if len(violations) < max_violations:
            violations.append(msg)

    bad = 0
    for h in sample:
        checked += 1
        if abs(kernel(h)) > tol:
            bad += 1
            note(f"l({g.format(h)}) = {kernel(h)} on H")
    for s in ball.elements:
        v = kernel(s)
        for h in sample:
            checked += 2
            right, left = kernel(g.multiply(s, h)), kernel(g.multiply(h, s))
            if abs(right - v) > tol:
                bad += 1
                note(f"l({g.format(s)}*{g.format(h)}) = {right} != {v}")
            if abs(left - v) > tol:
                bad += 1
                note(f"l({g.format(h)}*{g.format(s)}) = {left} != {v}")
    zero_set = [s for s in ball.elements if abs(kernel(s)) <= tol]
    return InvarianceReport(
        radius=radius,
        passed=bad == 0,
        sample=tuple(g.format(h) for h in sample),
        checked=checked,
        violations=tuple(violations),
        empty_sample=len(sample) <= 1 and cosets.label != "trivial",
        zero_set_is_subgroup=all(cosets.in_subgroup(s) for s in zero_set) and len(zero_set) == len(sample),
        tolerance=tol,
    )


# ------------------------------------------------------------ properness


@dataclass(frozen=True)
class CosetSweep:
    reps: tuple  # (rep, min_length, value) with value <= cutoff, in enumeration order
    radius: int
    complete: bool
    exhaustive: bool
    horizon_counts: tuple


def sweep_cosets(
    cosets: CosetStructure,
    func: Callable[[GroupElement], float],
    coercivity: Callable[[int], float],
    cutoff: float,
    max_radius: int,
    cap: int | None = None,
) -> CosetSweep:
    """Cosets with ``func <= cutoff`` found in growing balls.

    ``complete`` holds once ``coercivity(r + 1) > cutoff`` at the explored
    radius ``r`` (a coset with value at most ``cutoff`` then has its shortest
    element inside the ball) or when every coset has been seen.
    """
    radius = None
    if cosets.index == 1:
        radius = 0
    else:
        for r in range(max_radius + 1):
            if coercivity(r + 1) > cutoff:
                radius = r
                break
    qb = quotient_ball(cosets, max_radius if radius is None else radius, cap)
    kept = []
    all_below = True
    for rep, n in zip(qb.cosets, qb.min_lengths):
        v = func(rep)
        if v <= cutoff:
            kept.append((rep, n, v))
        else:
            all_below = False
    counts = tuple(sum(1 for _, n, _ in kept if n <= r) for r in range(qb.horizon + 1))
    complete = radius is not None or qb.exhaustive
    return CosetSweep(tuple(kept), qb.horizon, complete, qb.exhaustive and all_below, counts)


@dataclass(frozen=True)
class ProperResult:
    cutoff: float
    count: int
    complete: bool
    radius: int
    horizon_counts: tuple

    @property
    def lower_bound_only(self) -> bool:
        return not self.complete

    def to_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "count": self.count,
            "complete": self.complete,
            "lower_bound_only": self.lower_bound_only,
            "radius": self.radius,
            "horizon_counts": list(self.horizon_counts),
        }


def quotient_properness(
    cosets: CosetStructure, kernel: LengthKernel, cutoff: float, max_radius: int, cap: int | None = None
) -> ProperResult:
    qd = kernel.quotient_data(cosets.label)
    sweep = sweep_cosets(cosets, kernel, qd.coercivity, cutoff, max_radius, cap)
    return ProperResult(cutoff, len(sweep.reps), sweep.complete, sweep.radius, sweep.horizon_counts)


# ------------------------------------------------------------ quasi-normality


@dataclass(frozen=True)
class QuasiNormalityReport:
    horizons: tuple
    probes: tuple  # (formatted rep, counts per horizon)
    verdict: str  # "growing" | "bounded-within-horizon"

    def to_dict(self) -> dict:
        return {
            "horizons": list(self.horizons),
            "probes": [{"coset": c, "orbit_counts": list(n)} for c, n in self.probes],
            "verdict": self.verdict,
            "horizon_bounded": True,
        }


def orbit_counts(cosets: CosetStructure, s: GroupElement, horizons: Sequence[int]) -> tuple:
    """Distinct cosets ``h s H`` over ``h`` in ``H`` intersected with each ball."""
    g = cosets.parent
    out = []
    for hz in horizons:
        hs = [h for h in ball_enumerate(g, hz).elements if cosets.in_subgroup(h)]
        out.append(len({cosets.coset_rep(g.multiply(h, s)) for h in hs}))
    return tuple(out)


def quasi_normality(
    cosets: CosetStructure,
    probe_radius: int,
    horizons: Sequence[int] = (1, 2, 3),
    probes: Sequence[GroupElement] | None = None,
) -> QuasiNormalityReport:
    horizons = tuple(sorted(horizons))
    if probes is None:
        probes = quotient_ball(cosets, probe_radius).cosets
    rows = []
    growing = False
    for s in probes:
        counts = orbit_counts(cosets, s, horizons)
        rows.append((cosets.parent.format(cosets.coset_rep(s)), counts))
        tail = counts[-3:]
        if len(tail) >= 2 and all(a < b for a, b in zip(tail, tail[1:])):
            growing = True
    return QuasiNormalityReport(horizons, tuple(rows), "growing" if growing else "bounded-within-horizon")


# ------------------------------------------------------------ relative spectrum


@dataclass(frozen=True)
class RelativeSpectrum(SpectrumTruncation):
    """Entries are ``(lambda, number of cosets with l = lambda)``."""

    inclusion: str = ""

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["inclusion"] = self.inclusion
        return d


def relative_spectrum(
    cosets: CosetStructure, kernel: LengthKernel, cutoff: float, max_radius: int, cap: int | None = None
) -> RelativeSpectrum:
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    qd = kernel.quotient_data(cosets.label)
    sweep = sweep_cosets(cosets, kernel.evaluate, qd.coercivity, cutoff, max_radius, cap)
    entries = group_values([v for _, _, v in sweep.reps], kernel.integer_valued)
    return RelativeSpectrum(cutoff, entries, sweep.complete, sweep.exhaustive, sweep.radius, cosets.label)


def relative_partition(
    relspec: RelativeSpectrum, t: float, tail: TailModel | None = None, depth: int | None = None
) -> PartitionEstimate:
    """Relative trace ``Tr(e^{-tL}) = sum over cosets of e^{-t l(s)}``."""
    return partition_function(relspec, t, tail, depth)


def criterion_satisfied(
    properness: Sequence[ProperResult],
    partitions: Sequence[PartitionEstimate],
    t_grid: Sequence[float] = DEFAULT_T_GRID,
) -> bool:
    """Proper at every tested cutoff and certified-finite relative trace on the whole grid."""
    if not properness or not all(p.complete for p in properness):
        return False
    finite = {p.t for p in partitions if p.certified_finite}
    return all(t in finite for t in t_grid)


def relative_tail(cosets: CosetStructure, kernel: LengthKernel) -> TailModel | None:
    return kernel.quotient_data(cosets.label).tail

