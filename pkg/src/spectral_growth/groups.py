"""Finitely generated groups with canonical element forms, Cayley balls and word length.

Elements are plain hashable Python values in canonical form, so equality and
hashing never require solving a word problem:

* free groups: reduced words, a tuple of letter codes (generator ``j`` is
  ``2j``, its inverse ``2j + 1``)
* ``Z^d``: integer coordinate tuples
* ``Z/m``: an integer in ``[0, m)``
* Heisenberg: ``(a, b, c)`` for the matrix ``[[1, a, c], [0, 1, b], [0, 0, 1]]``
* products: pairs ``(left, right)``
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator, Sequence

DEFAULT_MAX_ELEMENTS = 5_000_000
MAX_ELEMENTS_ENV = "SPECTRAL_GROWTH_MAX_ELEMENTS"

GroupElement = Any


class ResourceLimitError(RuntimeError):
    """Enumeration would exceed the configured element cap."""


def max_elements() -> int:
    raw = os.environ.get(MAX_ELEMENTS_ENV)
    if raw is None:
        return DEFAULT_MAX_ELEMENTS
    return int(raw)


def zigzag(n: int) -> int:
    # 0, -1, 1, -2, 2, ... -> 0, 1, 2, 3, 4, ...
    return 2 * n if n >= 0 else -2 * n - 1


class GroupModel:
    """Base class for the concrete group families.

    Subclasses are frozen dataclasses, hence immutable and hashable; the
    enumeration cache below is keyed on them.
    """

    @property
    def identity(self) -> GroupElement:
        raise NotImplementedError

    @property
    def generators(self) -> tuple:
        raise NotImplementedError

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        raise NotImplementedError

    def invert(self, g: GroupElement) -> GroupElement:
        raise NotImplementedError

    def encode(self, g: GroupElement) -> tuple:
        """Canonical sortable encoding; the identity encodes minimally."""
        raise NotImplementedError

    def format(self, g: GroupElement) -> str:
        raise NotImplementedError

    def parse(self, text: str) -> GroupElement:
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    @property
    def order(self) -> int | None:
        """Number of elements, or None for infinite groups."""
        return None

    def length(self, g: GroupElement) -> int:
        """Word length with respect to ``generators``.

        The default searches growing Cayley balls; families with a closed form
        override it.
        """
        radius = 0
        while True:
            ball = ball_enumerate(self, radius)
            found = ball.length_of(g)
            if found is not None:
                return found
            if ball.exhaustive:
                raise ValueError(f"{g!r} is not an element of {self.spec}")
            radius = max(1, 2 * radius)

    def __str__(self) -> str:
        return self.spec


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class FreeGroup(GroupModel):
    rank: int

    def __post_init__(self):
        if not 1 <= self.rank <= len(_LETTERS):
            raise ValueError(f"free group rank must be in [1, 26], got {self.rank}")

    @property
    def identity(self) -> tuple:
        return ()

    @property
    def generators(self) -> tuple:
        return tuple((code,) for j in range(self.rank) for code in (2 * j, 2 * j + 1))

    def letter(self, j: int, power: int = 1) -> tuple:
        """The reduced word for ``x_j ** power``."""
        code = 2 * j if power > 0 else 2 * j + 1
        return (code,) * abs(power)

    def multiply(self, g: tuple, h: tuple) -> tuple:
        k = 0
        n = min(len(g), len(h))
        while k < n and g[len(g) - 1 - k] == h[k] ^ 1:
            k += 1
        if k == 0:
            return g + h
        return g[: len(g) - k] + h[k:]

    def invert(self, g: tuple) -> tuple:
        return tuple(c ^ 1 for c in reversed(g))

    def encode(self, g: tuple) -> tuple:
        return g

    def length(self, g: tuple) -> int:
        return len(g)

    def exponent_sum(self, g: tuple, j: int) -> int:
        return sum(1 if c == 2 * j else -1 for c in g if c >> 1 == j)

    def format(self, g: tuple) -> str:
        if not g:
            return "e"
        out = []
        for c in g:
            ch = _LETTERS[c >> 1]
            out.append(ch.upper() if c & 1 else ch)
        return "".join(out)

    def parse(self, text: str) -> tuple:
        text = text.strip()
        if text in ("", "e"):
            return ()
        word: tuple = ()
        for ch in text:
            j = _LETTERS.find(ch.lower())
            if j < 0 or j >= self.rank:
                raise ValueError(f"bad letter {ch!r} for {self.spec}")
            word = self.multiply(word, ((2 * j) | (1 if ch.isupper() else 0),))
        return word

    @property
    def spec(self) -> str:
        return f"free({self.rank})"


def _parse_int_tuple(text: str) -> tuple:
    body = text.strip().strip("()[]")
    if not body:
        return ()
    return tuple(int(part) for part in body.split(","))


@dataclass(frozen=True)
class FreeAbelianGroup(GroupModel):
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("zd dimension must be positive")

    @property
    def identity(self) -> tuple:
        return (0,) * self.dim

    @property
    def generators(self) -> tuple:
        gens = []
        for i in range(self.dim):
            for sign in (1, -1):
                v = [0] * self.dim
                v[i] = sign
                gens.append(tuple(v))
        return tuple(gens)

    def multiply(self, g: tuple, h: tuple) -> tuple:
        return tuple(x + y for x, y in zip(g, h))

    def invert(self, g: tuple) -> tuple:
        return tuple(-x for x in g)

    def encode(self, g: tuple) -> tuple:
        return tuple(zigzag(x) for x in g)

    def length(self, g: tuple) -> int:
        return sum(abs(x) for x in g)

    def format(self, g: tuple) -> str:
        return "(" + ",".join(str(x) for x in g) + ")"

    def parse(self, text: str) -> tuple:
        g = _parse_int_tuple(text)
        if len(g) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {text!r}")
        return g

    @property
    def spec(self) -> str:
        return f"zd({self.dim})"


@dataclass(frozen=True)
class CyclicGroup(GroupModel):
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("cyclic modulus must be at least 2")

    @property
    def identity(self) -> int:
        return 0

    @property
    def generators(self) -> tuple:
        return tuple(sorted({1, self.modulus - 1}))

    def multiply(self, g: int, h: int) -> int:
        return (g + h) % self.modulus

    def invert(self, g: int) -> int:
        return -g % self.modulus

    def encode(self, g: int) -> tuple:
        return (g,)

    def length(self, g: int) -> int:
        return min(g, self.modulus - g)

    def format(self, g: int) -> str:
        return str(g)

    def parse(self, text: str) -> int:
        return int(text) % self.modulus

    @property
    def order(self) -> int:
        return self.modulus

    @property
    def spec(self) -> str:
        return f"cyclic({self.modulus})"


@dataclass(frozen=True)
class HeisenbergGroup(GroupModel):
    """Integer upper unitriangular 3x3 matrices, generated by the two elementary ones."""

    @property
    def identity(self) -> tuple:
        return (0, 0, 0)

    @property
    def generators(self) -> tuple:
        return ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0))

    def multiply(self, g: tuple, h: tuple) -> tuple:
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    def invert(self, g: tuple) -> tuple:
        a, b, c = g
        return (-a, -b, a * b - c)

    def encode(self, g: tuple) -> tuple:
        return tuple(zigzag(x) for x in g)

    def format(self, g: tuple) -> str:
        return "[" + ",".join(str(x) for x in g) + "]"

    def parse(self, text: str) -> tuple:
        g = _parse_int_tuple(text)
        if len(g) != 3:
            raise ValueError(f"expected 3 entries, got {text!r}")
        return g

    @property
    def spec(self) -> str:
        return "heisenberg"


@dataclass(frozen=True)
class ProductGroup(GroupModel):
    left: GroupModel
    right: GroupModel

    @property
    def identity(self) -> tuple:
        return (self.left.identity, self.right.identity)

    @property
    def generators(self) -> tuple:
        e1, e2 = self.left.identity, self.right.identity
        return tuple((s, e2) for s in self.left.generators) + tuple(
            (e1, s) for s in self.right.generators
        )

    def multiply(self, g: tuple, h: tuple) -> tuple:
        return (self.left.multiply(g[0], h[0]), self.right.multiply(g[1], h[1]))

    def invert(self, g: tuple) -> tuple:
        return (self.left.invert(g[0]), self.right.invert(g[1]))

    def encode(self, g: tuple) -> tuple:
        return (self.left.encode(g[0]), self.right.encode(g[1]))

    def length(self, g: tuple) -> int:
        return self.left.length(g[0]) + self.right.length(g[1])

    def format(self, g: tuple) -> str:
        return f"<{self.left.format(g[0])}|{self.right.format(g[1])}>"

    def parse(self, text: str) -> tuple:
        body = text.strip()
        if not (body.startswith("<") and body.endswith(">")):
            raise ValueError(f"product element must look like <x|y>, got {text!r}")
        depth = 0
        for i, ch in enumerate(body[1:-1], start=1):
            if ch in "<([":
                depth += 1
            elif ch in ">)]":
                depth -= 1
            elif ch == "|" and depth == 0:
                return (self.left.parse(body[1:i]), self.right.parse(body[i + 1 : -1]))
        raise ValueError(f"no top-level '|' in {text!r}")

    @property
    def order(self) -> int | None:
        a, b = self.left.order, self.right.order
        return None if a is None or b is None else a * b

    @property
    def spec(self) -> str:
        return f"product({self.left.spec}, {self.right.spec})"


@dataclass(frozen=True)
class Ball:
    """Cayley ball of a given radius, elements sorted by (word length, encoding)."""

    radius: int
    elements: tuple
    sphere_sizes: tuple
    exhaustive: bool  # BFS ran out of new elements: the whole (finite) group is listed

    def __len__(self) -> int:
        return len(self.elements)

    def sphere(self, j: int) -> tuple:
        start = sum(self.sphere_sizes[:j])
        return self.elements[start : start + self.sphere_sizes[j]]

    def items(self) -> Iterator[tuple[GroupElement, int]]:
        """Yield ``(element, word_length)`` pairs in ball order."""
        pos = 0
        for j, size in enumerate(self.sphere_sizes):
            for g in self.elements[pos : pos + size]:
                yield g, j
            pos += size

    def length_of(self, g: GroupElement) -> int | None:
        return self._lengths.get(g)

    @property
    def _lengths(self) -> dict:
        cached = self.__dict__.get("_length_map")
        if cached is None:
            cached = dict(self.items())
            object.__setattr__(self, "_length_map", cached)
        return cached


def ball_enumerate(model: GroupModel, n: int, cap: int | None = None) -> Ball:
    """All elements of word length at most ``n``, by breadth-first search."""
    if n < 0:
        raise ValueError("radius must be nonnegative")
    if not model.generators:
        raise ValueError("generator list is empty")
    return _ball_cached(model, n, max_elements() if cap is None else cap)


@lru_cache(maxsize=16)
def _ball_cached(model: GroupModel, n: int, cap: int) -> Ball:
    gens = model.generators
    key = model.encode
    layers = [(model.identity,)]
    total = 1
    previous: set = set()
    current = {model.identity}
    exhaustive = False
    for _ in range(n):
        fresh = set()
        for g in layers[-1]:
            for s in gens:
                h = model.multiply(g, s)
                # Cayley-graph neighbours of sphere j lie in spheres j-1, j, j+1.
                if h not in current and h not in previous and h not in fresh:
                    fresh.add(h)
        if not fresh:
            exhaustive = True
            break
        total += len(fresh)
        if total > cap:
            raise ResourceLimitError(
                f"ball of radius {n} in {model.spec} exceeds {cap} elements"
            )
        layers.append(tuple(sorted(fresh, key=key)))
        previous, current = current, fresh
    else:
        if model.order is not None and total == model.order:
            exhaustive = True
    elements = tuple(g for layer in layers for g in layer)
    return Ball(
        radius=n,
        elements=elements,
        sphere_sizes=tuple(len(layer) for layer in layers),
        exhaustive=exhaustive,
    )


def word_length(model: GroupModel, g: GroupElement, horizon: int, cap: int | None = None) -> int | None:
    """Minimal word length of ``g`` if it is at most ``horizon``, else None."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if g == model.identity:
        return 0
    return ball_enumerate(model, horizon, cap).length_of(g)


def sphere_sizes(model: GroupModel, n: int, cap: int | None = None) -> Sequence[int]:
    sizes = list(ball_enumerate(model, n, cap).sphere_sizes)
    return sizes + [0] * (n + 1 - len(sizes))
