"""Spectra of the multiplication generator ``L = l``, counting functions and partition sums.

For a proper kernel ``l`` the generator of the Dirichlet form
``E[xi] = sum_s l(s) |xi(s)|^2`` has eigenvalues ``{l(g)}``, one per group
element. Everything here is finite-horizon: growth rates are limsups and only
ever estimated, divergence claims need a certified tail model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .groups import GroupModel, ball_enumerate
from .kernels import DEFAULT_T_GRID, LengthKernel
from .tails import TailModel, tail_sum

GROUPING_TOL = 1e-9
DEFAULT_WINDOW = 5


class CertificateError(ValueError):
    """A requested output needs a completeness certificate that is not available."""


@dataclass(frozen=True)
class SpectrumTruncation:
    """Eigenvalues ``<= cutoff`` with multiplicities.

    ``complete`` certifies every eigenvalue up to the cutoff is listed with full
    multiplicity; ``exhaustive`` additionally says nothing lies above it (the
    underlying set was finite and fully enumerated).
    """

    cutoff: float
    entries: tuple[tuple[float, int], ...]
    complete: bool
    exhaustive: bool = False
    radius: int = 0

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def integer_levels(self) -> bool:
        return all(float(lam).is_integer() for lam, _ in self.entries)

    def to_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "complete": self.complete,
            "exhaustive": self.exhaustive,
            "radius": self.radius,
            "entries": [[lam, m] for lam, m in self.entries],
        }


def group_values(values: Sequence[float], exact: bool, tol: float = GROUPING_TOL) -> tuple:
    """Sorted ``(value, multiplicity)`` pairs; floats within ``tol`` of the group head merge."""
    counts: dict = {}
    if exact:
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        return tuple(sorted(counts.items()))
    out: list[list] = []
    for v in sorted(values):
        if out and v - out[-1][0] <= tol:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return tuple((v, m) for v, m in out)


def spectrum_from_kernel(
    model: GroupModel,
    kernel: LengthKernel,
    cutoff: float,
    max_radius: int,
    cap: int | None = None,
) -> SpectrumTruncation:
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    radius = None
    for r in range(max_radius + 1):
        if kernel.coercivity(r + 1) > cutoff:
            radius = r
            break
    ball = ball_enumerate(model, max_radius if radius is None else radius, cap)
    complete = radius is not None or ball.exhaustive
    values = [kernel.evaluate(g) for g in ball.elements]
    kept = [v for v in values if v <= cutoff]
    entries = group_values(kept, kernel.integer_valued)
    exhaustive = ball.exhaustive and len(kept) == len(values)
    return SpectrumTruncation(cutoff, entries, complete, exhaustive, ball.radius)


@dataclass(frozen=True)
class GrowthProfile:
    """Counting functions ``beta_n = #{lambda <= n}`` and ``gamma_n = #{n-1 < lambda <= n}``."""

    beta: tuple[int, ...]
    gamma: tuple[int, ...]
    certified: bool = True
    exhaustive: bool = False
    integer_levels: bool = False

    @classmethod
    def from_gamma(cls, gamma: Sequence[int], certified: bool = True, integer_levels: bool = True, exhaustive: bool = False):
        beta, acc = [], 0
        for g in gamma:
            acc += int(g)
            beta.append(acc)
        return cls(tuple(beta), tuple(int(g) for g in gamma), certified, exhaustive, integer_levels)

    @property
    def depth(self) -> int:
        return len(self.beta) - 1

    @property
    def omega_root(self) -> list:
        return [None] + [b ** (1.0 / n) for n, b in enumerate(self.beta) if n >= 1]

    @property
    def omega_ratio(self) -> list:
        """``gamma[n+1] / gamma[n]`` for ``n < depth``; None where ``gamma[n] == 0``."""
        g = self.gamma
        return [g[n + 1] / g[n] if g[n] else None for n in range(len(g) - 1)]

    @property
    def spectral_dimension_seq(self) -> list:
        return [None, None] + [
            math.log(b) / math.log(n) if b > 0 else None for n, b in enumerate(self.beta) if n >= 2
        ]

    def rows(self) -> list[dict]:
        roots, ratios = self.omega_root, self.omega_ratio
        return [
            {
                "n": n,
                "beta": self.beta[n],
                "gamma": self.gamma[n],
                "omega_root": roots[n],
                "omega_ratio": ratios[n] if n < len(ratios) else None,
            }
            for n in range(len(self.beta))
        ]

    def to_dict(self) -> dict:
        return {
            "beta": list(self.beta),
            "gamma": list(self.gamma),
            "certified": self.certified,
            "lower_bound_only": not self.certified,
            "omega": {"root": self.omega_root, "ratio": self.omega_ratio},
            "spectral_dimension": self.spectral_dimension_seq,
        }


def growth_profile(spectrum: SpectrumTruncation, depth: int) -> GrowthProfile:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > math.floor(spectrum.cutoff) and not spectrum.exhaustive:
        raise CertificateError(f"depth {depth} exceeds the certified cutoff {spectrum.cutoff}")
    beta = []
    for n in range(depth + 1):
        beta.append(sum(m for lam, m in spectrum.entries if lam <= n))
    gamma = [beta[0]] + [beta[n] - beta[n - 1] for n in range(1, depth + 1)]
    return GrowthProfile(
        tuple(beta),
        tuple(gamma),
        certified=spectrum.complete,
        exhaustive=spectrum.exhaustive,
        integer_levels=spectrum.integer_levels,
    )


@dataclass(frozen=True)
class OmegaEstimate:
    root: float
    ratio: float | None
    window: tuple[int, int]
    label: str = "finite-horizon estimate"

    def to_dict(self) -> dict:
        return {"root": self.root, "ratio": self.ratio, "window": list(self.window), "label": self.label}


def omega_estimate(profile: GrowthProfile, window: int = DEFAULT_WINDOW) -> OmegaEstimate:
    """Last values of ``beta_n^(1/n)`` and ``gamma_{n+1}/gamma_n``; never a limit."""
    if len(profile.beta) < 4:
        raise ValueError("profile needs at least 4 entries")
    n = profile.depth
    ratios = [r for r in profile.omega_ratio if r is not None]
    return OmegaEstimate(
        root=profile.omega_root[n],
        ratio=ratios[-1] if ratios else None,
        window=(max(1, n - window + 1), n),
    )


@dataclass(frozen=True)
class PartitionEstimate:
    """``Tr(e^{-tL})`` lies in ``[partial_sum, partial_sum + tail_bound]`` when finite."""

    t: float
    partial_sum: float
    tail_bound: float
    verdict: str  # "finite" | "divergent" | "unknown"
    evidence: str = ""
    depth: int = 0

    @property
    def certified_finite(self) -> bool:
        return self.verdict == "finite" and math.isfinite(self.tail_bound)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "partial_sum": self.partial_sum,
            "tail_bound": self.tail_bound,
            "upper": self.partial_sum + self.tail_bound,
            "verdict": self.verdict,
            "evidence": self.evidence,
            "depth": self.depth,
        }


def _divergence(tail: TailModel, t: float) -> str | None:
    if tail.lower > 0 and math.log(tail.rate) - t >= 0:
        return (
            f"gamma_n >= {tail.lower:g} n^{tail.degree:g} {tail.rate:g}^n and "
            f"{tail.rate:g} e^-{t:g} >= 1: lower sandwich series diverges"
        )
    return None


def partition_function(
    source: SpectrumTruncation | GrowthProfile,
    t: float,
    tail: TailModel | None = None,
    depth: int | None = None,
) -> PartitionEstimate:
    """Bracket the partition function ``sum_k e^{-t lambda_k}``.

    ``partial_sum`` covers the listed spectrum (or the lower sandwich bound
    ``sum gamma_n e^{-tn}`` for a profile) plus, with an exact integer-level
    tail model, the bins up to ``depth``. ``tail_bound`` dominates everything
    else.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    slack = 0.0
    if isinstance(source, SpectrumTruncation):
        partial = math.fsum(m * math.exp(-t * lam) for lam, m in source.entries)
        known = math.floor(source.cutoff)
        complete, exhaustive = source.complete, source.exhaustive
    else:
        terms = [g * math.exp(-t * n) for n, g in enumerate(source.gamma)]
        partial = math.fsum(terms)
        if not source.integer_levels:
            slack = math.fsum(g * (math.exp(-t * (n - 1)) - math.exp(-t * n)) for n, g in enumerate(source.gamma) if n)
        known = source.depth
        complete, exhaustive = source.certified, source.exhaustive

    if exhaustive:
        return PartitionEstimate(t, partial, slack, "finite", "spectrum fully enumerated", known)
    if tail is None:
        return PartitionEstimate(t, partial, math.inf, "unknown", "no tail model", known)
    reason = _divergence(tail, t)
    if reason is not None:
        return PartitionEstimate(t, partial, math.inf, "divergent", reason, known)
    first = known + 1 if complete else 1
    reached = known
    if complete and tail.exact is not None and tail.integer_levels and depth is not None and depth > known:
        partial += math.fsum(tail.exact(n) * math.exp(-t * n) for n in range(first, depth + 1))
        first = depth + 1
        reached = depth
    bound = tail_sum(tail, t, first) + slack
    if not math.isfinite(bound):
        return PartitionEstimate(t, partial, math.inf, "unknown", "tail model gives no finite bound", reached)
    evidence = f"certified tail {tail.label or 'model'} from bin {first}"
    if not complete:
        evidence += " (incomplete spectrum, tail bounds every bin)"
    return PartitionEstimate(t, partial, bound, "finite", evidence, reached)


@dataclass(frozen=True)
class Classification:
    kind: str  # Polynomial | Subexponential | Exponential | Inconclusive
    estimate: float | None
    window: tuple[int, int] | None
    values: tuple = ()
    reason: str = ""

    @property
    def label(self) -> str:
        if self.estimate is None:
            return self.kind
        return f"{self.kind}({self.estimate:.6g})"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "estimate": self.estimate,
            "label": self.label,
            "window": list(self.window) if self.window else None,
            "values": list(self.values),
            "reason": self.reason,
        }


def _stable(values: Sequence[float], rel: float) -> bool:
    hi, lo = max(values), min(values)
    return hi - lo <= rel * max(abs(hi), abs(lo), 1e-300)


def classify(
    profile: GrowthProfile,
    partitions: Sequence[PartitionEstimate] = (),
    window: int = DEFAULT_WINDOW,
    rel_tol: float = 0.05,
    exp_threshold: float = 1.1,
    dim_spread: float = 0.2,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
) -> Classification:
    """Finite-data growth decision.

    Exponential: the last ``window`` ratio estimates agree to ``rel_tol`` and
    all exceed ``exp_threshold``. Polynomial: the last ``window`` spectral
    dimension values agree to ``rel_tol`` with spread below ``dim_spread``
    (a fully enumerated finite spectrum is polynomial of degree 0).
    Subexponential: certified-finite partition sums on the whole ``t_grid``.
    Anything else is Inconclusive.
    """
    if not profile.certified:
        return Classification("Inconclusive", None, None, reason="profile is lower-bound only")
    n = profile.depth
    if profile.exhaustive:
        return Classification("Polynomial", 0.0, (0, n), reason="finite spectrum")
    ratios = profile.omega_ratio[-window:]
    if len(ratios) == window and all(r is not None for r in ratios):
        if all(r >= exp_threshold for r in ratios) and _stable(ratios, rel_tol):
            return Classification("Exponential", ratios[-1], (n - window, n - 1), tuple(ratios))
    dims = profile.spectral_dimension_seq[-window:]
    if n >= window + 1 and all(d is not None for d in dims):
        if max(dims) - min(dims) < dim_spread and _stable(dims, rel_tol):
            return Classification("Polynomial", dims[-1], (n - window + 1, n), tuple(dims))
    finite_ts = {p.t for p in partitions if p.certified_finite}
    if t_grid and all(t in finite_ts for t in t_grid):
        return Classification("Subexponential", 1.0, (0, n), reason="partition function certified finite on the t-grid")
    return Classification("Inconclusive", None, (0, n), reason="no estimator stabilised within the window")
