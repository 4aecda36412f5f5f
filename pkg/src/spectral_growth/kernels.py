"""Length kernels on groups and finite-ball tests of (conditional) negative definiteness.

A length kernel is a symmetric function ``l >= 0`` with ``l(e) = 0``. The
multiplication semigroup ``e^{-t l}`` is completely positive exactly when
every ``e^{-t l}`` is a positive definite function, which is Schoenberg's
criterion for ``l`` being conditionally negative definite. On a finite ball
both sides reduce to eigenvalue signs of Gram matrices; a pass is evidence on
the sampled grid only, a failure is conclusive.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .groups import (
    CyclicGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupElement,
    GroupModel,
    ball_enumerate,
)
from .linalg import DEFAULT_EIG_TOL, eigvalsh, trace_residual
from .tails import TailModel, free_abelian_tail, free_group_tail

DEFAULT_T_GRID = (0.01, 0.1, 0.5, 1.0, 2.0, 10.0)


def _no_bound(r: int) -> float:
    return 0.0


@dataclass(frozen=True)
class QuotientData:
    """Coercivity and tail of a kernel seen as a function on cosets.

    ``coercivity(r)`` bounds the kernel from below on every coset whose
    shortest element has word length ``r``.
    """

    coercivity: Callable[[int], float]
    tail: TailModel | None = None


@dataclass(frozen=True, eq=False)
class LengthKernel:
    model: GroupModel
    func: Callable[[GroupElement], float]
    label: str
    coercivity: Callable[[int], float] = _no_bound
    tail: TailModel | None = None
    integer_valued: bool = False
    quotients: Mapping[str, QuotientData] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, g: GroupElement) -> float:
        try:
            return self._cache[g]
        except KeyError:
            value = self.func(g)
            self._cache[g] = value
            return value

    def evaluate(self, g: GroupElement) -> float:
        """Uncached evaluation, for one-pass sweeps over large balls."""
        return self.func(g)

    def quotient_data(self, inclusion: str) -> QuotientData:
        if inclusion in self.quotients:
            return self.quotients[inclusion]
        if inclusion == "trivial":
            return QuotientData(self.coercivity, self.tail)
        # minimal coset representatives are group elements, so the absolute
        # bound still applies to them
        return QuotientData(self.coercivity, None)

    def validate(self, radius: int, tol: float = 1e-12) -> list[str]:
        """Check the kernel axioms on a ball; returns a list of violations."""
        problems = []
        model = self.model
        if abs(self(model.identity)) > tol:
            problems.append(f"l(e) = {self(model.identity)}")
        for g, n in ball_enumerate(model, radius).items():
            v = self(g)
            if v < -tol:
                problems.append(f"l({model.format(g)}) = {v} < 0")
            if abs(v - self(model.invert(g))) > tol:
                problems.append(f"l not symmetric at {model.format(g)}")
            if v < self.coercivity(n) - tol:
                problems.append(f"coercivity bound violated at {model.format(g)}")
        return problems


def word_length_kernel(model: GroupModel) -> LengthKernel:
    tail = None
    if isinstance(model, FreeGroup):
        tail = free_group_tail(model.rank)
    elif isinstance(model, FreeAbelianGroup):
        tail = free_abelian_tail(model.dim)
    return LengthKernel(
        model=model,
        func=model.length,
        label="wordlength",
        coercivity=float,
        tail=tail,
        integer_valued=True,
    )


def _require_zd(model: GroupModel, what: str) -> FreeAbelianGroup:
    if not isinstance(model, FreeAbelianGroup):
        raise ValueError(f"{what} kernel needs a zd(d) group, got {model.spec}")
    return model


def l1_kernel(model: GroupModel) -> LengthKernel:
    zd = _require_zd(model, "l1")
    return LengthKernel(
        model=zd,
        func=lambda g: sum(abs(x) for x in g),
        label="l1",
        coercivity=float,
        tail=free_abelian_tail(zd.dim),
        integer_valued=True,
    )


def l2sq_kernel(model: GroupModel) -> LengthKernel:
    zd = _require_zd(model, "l2sq")
    d = zd.dim
    return LengthKernel(
        model=zd,
        func=lambda g: sum(x * x for x in g),
        label="l2sq",
        # Cauchy-Schwarz: (sum |n_i|)^2 <= d * sum n_i^2
        coercivity=lambda r: r * r / d,
        integer_valued=True,
    )


def power_kernel(model: GroupModel, alpha: float) -> LengthKernel:
    zd = _require_zd(model, "power")
    if zd.dim != 1:
        raise ValueError("power(alpha) is defined on zd(1) only")
    if alpha <= 0:
        raise ValueError("power exponent must be positive")
    integral = float(alpha).is_integer()
    a = int(alpha) if integral else float(alpha)
    return LengthKernel(
        model=zd,
        func=lambda g: abs(g[0]) ** a,
        label=f"power({alpha:g})",
        coercivity=lambda r: float(r) ** a,
        integer_valued=integral,
    )


def zero_kernel(model: GroupModel) -> LengthKernel:
    return LengthKernel(model=model, func=lambda g: 0, label="zero", integer_valued=True)


@dataclass(frozen=True, eq=False)
class Homomorphism:
    """A group homomorphism between two models.

    ``isometric_quotient`` names the inclusion equal to the kernel of the map
    when the induced map on cosets is a word-length-preserving bijection onto
    the target.
    """

    source: GroupModel
    target: GroupModel
    apply: Callable[[GroupElement], GroupElement]
    label: str
    isometric_quotient: str | None = None


def coordinate_hom(model: GroupModel, i: int) -> Homomorphism:
    zd = _require_zd(model, "coord")
    if not 0 <= i < zd.dim:
        raise ValueError(f"coordinate {i} out of range for {zd.spec}")
    iso = None
    if zd.dim == 1:
        iso = "trivial"
    elif zd.dim == 2:
        iso = f"axis({1 - i})"
    return Homomorphism(zd, FreeAbelianGroup(1), lambda g: (g[i],), f"coord({i})", iso)


def exponent_sum_hom(model: GroupModel, j: int) -> Homomorphism:
    if not isinstance(model, FreeGroup):
        raise ValueError(f"expsum needs a free group, got {model.spec}")
    if not 0 <= j < model.rank:
        raise ValueError(f"generator {j} out of range for {model.spec}")
    iso = "trivial" if model.rank == 1 else None
    return Homomorphism(
        model, FreeAbelianGroup(1), lambda g: (model.exponent_sum(g, j),), f"expsum({j})", iso
    )


def abelianization_hom(model: GroupModel) -> Homomorphism:
    if isinstance(model, FreeAbelianGroup):
        return Homomorphism(model, model, lambda g: g, "abelian", "trivial")
    if isinstance(model, CyclicGroup):
        return Homomorphism(model, model, lambda g: g, "abelian", "trivial")
    if isinstance(model, FreeGroup):
        k = model.rank
        target = FreeAbelianGroup(k)
        iso = "trivial" if k == 1 else None
        return Homomorphism(
            model, target, lambda g: tuple(model.exponent_sum(g, j) for j in range(k)), "abelian", iso
        )
    if model.spec == "heisenberg":
        return Homomorphism(model, FreeAbelianGroup(2), lambda g: (g[0], g[1]), "abelian")
    raise ValueError(f"no abelianization available for {model.spec}")


def pullback_kernel(hom: Homomorphism, inner: LengthKernel) -> LengthKernel:
    if inner.model != hom.target:
        raise ValueError(f"kernel lives on {inner.model.spec}, map lands in {hom.target.spec}")
    quotients = {}
    coercivity = _no_bound
    tail = None
    if hom.isometric_quotient is not None:
        quotients[hom.isometric_quotient] = QuotientData(inner.coercivity, inner.tail)
        if hom.isometric_quotient == "trivial":
            coercivity, tail = inner.coercivity, inner.tail
    return LengthKernel(
        model=hom.source,
        func=lambda g: inner(hom.apply(g)),
        label=f"pullback({hom.label}, {inner.label})",
        coercivity=coercivity,
        tail=tail,
        integer_valued=inner.integer_valued,
        quotients=quotients,
    )


def sum_kernel(k1: LengthKernel, k2: LengthKernel) -> LengthKernel:
    if k1.model != k2.model:
        raise ValueError("summands live on different groups")
    shared = {
        name: QuotientData(lambda r, a=k1.quotients[name], b=k2.quotients[name]: a.coercivity(r) + b.coercivity(r))
        for name in set(k1.quotients) & set(k2.quotients)
    }
    return LengthKernel(
        model=k1.model,
        func=lambda g: k1(g) + k2(g),
        label=f"sum({k1.label}, {k2.label})",
        coercivity=lambda r: k1.coercivity(r) + k2.coercivity(r),
        integer_valued=k1.integer_valued and k2.integer_valued,
        quotients=shared,
    )


def scale_kernel(c: float, k: LengthKernel) -> LengthKernel:
    if c < 0:
        raise ValueError("scale factor must be nonnegative")
    integral = float(c).is_integer() and k.integer_valued
    c_val = int(c) if integral else float(c)
    return LengthKernel(
        model=k.model,
        func=lambda g: c_val * k(g),
        label=f"scale({c:g}, {k.label})",
        coercivity=lambda r: c_val * k.coercivity(r),
        integer_valued=integral,
        quotients={
            name: QuotientData(lambda r, q=q: c_val * q.coercivity(r)) for name, q in k.quotients.items()
        },
    )


def table_kernel(model: GroupModel, path: str | Path) -> LengthKernel:
    """Explicit values from a CSV file with rows ``encoding,value``.

    ``encoding`` is the element's printed form. Evaluating outside the table
    raises ``KeyError``.
    """
    values: dict = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0] == "encoding":
                continue
            key, raw = row[0], row[1]
            v = float(raw)
            values[model.parse(key)] = int(v) if v.is_integer() else v
    values.setdefault(model.identity, 0)
    integral = all(isinstance(v, int) for v in values.values())

    def lookup(g):
        try:
            return values[g]
        except KeyError:
            raise KeyError(f"{model.format(g)} is not tabulated in {path}") from None

    return LengthKernel(model=model, func=lookup, label=f"table({path})", integer_valued=integral)


def _abs_last_coordinate(model: GroupModel) -> LengthKernel:
    zd = _require_zd(model, "abs-m")
    k = pullback_kernel(coordinate_hom(zd, zd.dim - 1), word_length_kernel(FreeAbelianGroup(1)))
    return LengthKernel(
        model=k.model,
        func=k.func,
        label="table(abs-m)",
        coercivity=k.coercivity,
        tail=k.tail,
        integer_valued=True,
        quotients=k.quotients,
    )


# Named tables resolve before files: infinite tables cannot live in a CSV.
NAMED_TABLES: dict[str, Callable[[GroupModel], LengthKernel]] = {
    "abs-m": _abs_last_coordinate,
}


# ---------------------------------------------------------------- checks


@dataclass(frozen=True)
class PsdEntry:
    radius: int
    t: float | None
    min_eigenvalue: float
    passed: bool
    trace_residual: float


@dataclass(frozen=True)
class PsdReport:
    tolerance: float
    entries: tuple[PsdEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def verdict(self) -> str:
        # a pass only covers the sampled grid and ball
        return "pass on grid" if self.passed else "fail"

    @property
    def min_eigenvalue(self) -> float:
        return min(e.min_eigenvalue for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "grid_evidence_only": True,
            "entries": [
                {"radius": e.radius, "t": e.t, "min_eigenvalue": e.min_eigenvalue, "pass": e.passed}
                for e in self.entries
            ],
        }


@dataclass(frozen=True)
class CndReport:
    radius: int
    max_eigenvalue: float
    tolerance: float
    empty_subspace: bool
    trace_residual: float

    @property
    def passed(self) -> bool:
        return self.max_eigenvalue <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass on ball" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "max_eigenvalue": self.max_eigenvalue,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "empty_subspace": self.empty_subspace,
            "grid_evidence_only": True,
        }


def kernel_gram(model: GroupModel, elements: Sequence, func: Callable[[GroupElement], float]) -> np.ndarray:
    """``K[i, j] = func(g_i^{-1} g_j)``, filled from the upper triangle so it is exactly symmetric."""
    m = len(elements)
    inv = [model.invert(g) for g in elements]
    k = np.empty((m, m))
    for i in range(m):
        gi = inv[i]
        for j in range(i, m):
            v = func(model.multiply(gi, elements[j]))
            k[i, j] = k[j, i] = v
    return k


def _psd_entry(m: np.ndarray, radius: int, t: float | None, tol: float) -> PsdEntry:
    ev = eigvalsh(m)
    lo = float(ev[0])
    return PsdEntry(radius, t, lo, lo >= -tol, trace_residual(m, ev))


def schoenberg_check(
    model: GroupModel,
    kernel: LengthKernel,
    radius: int,
    ts: Sequence[float] = DEFAULT_T_GRID,
    tol: float = DEFAULT_EIG_TOL,
) -> PsdReport:
    """Smallest eigenvalue of ``[exp(-t l(g_i^{-1} g_j))]`` over the ball, for each ``t``."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    if not ts or any(t <= 0 for t in ts):
        raise ValueError("t-grid must be a nonempty list of positive reals")
    ball = ball_enumerate(model, radius)
    k = kernel_gram(model, ball.elements, kernel)
    entries = tuple(_psd_entry(np.exp(-t * k), radius, float(t), tol) for t in ts)
    return PsdReport(tol, entries)


def positive_definite_check(
    model: GroupModel,
    phi: Callable[[GroupElement], float],
    radius: int,
    tol: float = DEFAULT_EIG_TOL,
) -> PsdReport:
    ball = ball_enumerate(model, radius)
    m = kernel_gram(model, ball.elements, phi)
    return PsdReport(tol, (_psd_entry(m, radius, None, tol),))


def mean_zero_projection(k: np.ndarray) -> np.ndarray:
    m = k.shape[0]
    p = np.eye(m) - np.full((m, m), 1.0 / m)
    pkp = p @ k @ p
    return (pkp + pkp.T) / 2.0


def direct_cnd_check(
    model: GroupModel,
    kernel: LengthKernel,
    radius: int,
    tol: float = DEFAULT_EIG_TOL,
) -> CndReport:
    """Largest eigenvalue of ``P K P`` with ``P`` the projection onto mean-zero vectors."""
    ball = ball_enumerate(model, radius)
    k = kernel_gram(model, ball.elements, kernel)
    pkp = mean_zero_projection(k)
    ev = eigvalsh(pkp)
    return CndReport(
        radius=radius,
        max_eigenvalue=float(ev[-1]),
        tolerance=tol,
        empty_subspace=len(ball) == 1,
        trace_residual=trace_residual(pkp, ev),
    )
