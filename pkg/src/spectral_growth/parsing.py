"""Mini-grammars for groups, kernels, homomorphisms and inclusions.

    group     := free(k) | zd(d) | cyclic(m) | heisenberg | product(group, group)
    kernel    := wordlength | l1 | l2sq | zero | power(alpha)
               | pullback(hom, kernel) | sum(kernel, kernel) | scale(c, kernel)
               | table(name-or-file)
    hom       := coord(i) | expsum(j) | abelian
    inclusion := trivial | full | axis(i) | cyclic-free(a)

Indices are 0-based; ``expsum`` and ``cyclic-free`` also take a letter.
"""

from __future__ import annotations

from pathlib import Path

from .groups import (
    CyclicGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupModel,
    HeisenbergGroup,
    ProductGroup,
)
from . import kernels as K
from . import relative as R


class GrammarError(ValueError):
    pass


def split_call(text: str) -> tuple[str, list[str]]:
    """``"name(a, f(b, c))"`` -> ``("name", ["a", "f(b, c)"])``."""
    text = text.strip()
    if "(" not in text:
        if not text or ")" in text or "," in text:
            raise GrammarError(f"malformed term {text!r}")
        return text, []
    head, _, rest = text.partition("(")
    if not rest.endswith(")"):
        raise GrammarError(f"unbalanced parentheses in {text!r}")
    body = rest[:-1]
    args, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GrammarError(f"unbalanced parentheses in {text!r}")
        elif ch == "," and depth == 0:
            args.append(body[start:i].strip())
            start = i + 1
    if depth != 0:
        raise GrammarError(f"unbalanced parentheses in {text!r}")
    last = body[start:].strip()
    if last or args:
        args.append(last)
    if any(not a for a in args):
        raise GrammarError(f"empty argument in {text!r}")
    return head.strip(), args


def _arity(name: str, args: list, n: int) -> None:
    if len(args) != n:
        raise GrammarError(f"{name} takes {n} argument(s), got {len(args)}")


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise GrammarError(f"expected an integer, got {text!r}") from None


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise GrammarError(f"expected a number, got {text!r}") from None


def parse_group(text: str) -> GroupModel:
    name, args = split_call(text)
    try:
        if name == "free":
            _arity(name, args, 1)
            return FreeGroup(_int(args[0]))
        if name == "zd":
            _arity(name, args, 1)
            return FreeAbelianGroup(_int(args[0]))
        if name == "cyclic":
            _arity(name, args, 1)
            return CyclicGroup(_int(args[0]))
        if name == "heisenberg":
            _arity(name, args, 0)
            return HeisenbergGroup()
        if name == "product":
            _arity(name, args, 2)
            return ProductGroup(parse_group(args[0]), parse_group(args[1]))
    except GrammarError:
        raise
    except ValueError as exc:
        raise GrammarError(str(exc)) from None
    raise GrammarError(f"unknown group {name!r}")


def _generator_index(text: str) -> int:
    text = text.strip()
    if len(text) == 1 and text.isalpha():
        return ord(text.lower()) - ord("a")
    return _int(text)


def parse_hom(text: str, model: GroupModel) -> K.Homomorphism:
    name, args = split_call(text)
    try:
        if name == "coord":
            _arity(name, args, 1)
            return K.coordinate_hom(model, _int(args[0]))
        if name == "expsum":
            _arity(name, args, 1)
            return K.exponent_sum_hom(model, _generator_index(args[0]))
        if name == "abelian":
            _arity(name, args, 0)
            return K.abelianization_hom(model)
    except GrammarError:
        raise
    except ValueError as exc:
        raise GrammarError(str(exc)) from None
    raise GrammarError(f"unknown homomorphism {name!r}")


def parse_kernel(text: str, model: GroupModel) -> K.LengthKernel:
    name, args = split_call(text)
    try:
        if name == "wordlength":
            _arity(name, args, 0)
            return K.word_length_kernel(model)
        if name == "l1":
            _arity(name, args, 0)
            return K.l1_kernel(model)
        if name == "l2sq":
            _arity(name, args, 0)
            return K.l2sq_kernel(model)
        if name == "zero":
            _arity(name, args, 0)
            return K.zero_kernel(model)
        if name == "power":
            _arity(name, args, 1)
            return K.power_kernel(model, _float(args[0]))
        if name == "pullback":
            _arity(name, args, 2)
            hom = parse_hom(args[0], model)
            return K.pullback_kernel(hom, parse_kernel(args[1], hom.target))
        if name == "sum":
            _arity(name, args, 2)
            return K.sum_kernel(parse_kernel(args[0], model), parse_kernel(args[1], model))
        if name == "scale":
            _arity(name, args, 2)
            return K.scale_kernel(_float(args[0]), parse_kernel(args[1], model))
        if name == "table":
            _arity(name, args, 1)
            key = args[0]
            if key in K.NAMED_TABLES:
                return K.NAMED_TABLES[key](model)
            if not Path(key).is_file():
                raise GrammarError(f"table {key!r} is neither a named table nor a file")
            return K.table_kernel(model, key)
    except GrammarError:
        raise
    except ValueError as exc:
        raise GrammarError(str(exc)) from None
    raise GrammarError(f"unknown kernel {name!r}")


def parse_inclusion(text: str, model: GroupModel) -> R.CosetStructure:
    name, args = split_call(text)
    try:
        if name == "trivial":
            _arity(name, args, 0)
            return R.trivial_inclusion(model)
        if name == "full":
            _arity(name, args, 0)
            return R.full_inclusion(model)
        if name == "axis":
            _arity(name, args, 1)
            return R.axis_inclusion(model, _int(args[0]))
        if name == "cyclic-free":
            _arity(name, args, 1)
            return R.cyclic_free_inclusion(model, _generator_index(args[0]))
    except GrammarError:
        raise
    except ValueError as exc:
        raise GrammarError(str(exc)) from None
    raise GrammarError(f"unknown inclusion {name!r}")
