"""Polynomial-time computable integer functions (FP) as small expression trees.

Every node maps a string over the alphabet to an arbitrary-precision
integer. Paired arguments <x, i> are decoded with :func:`strings.unpair`;
where a node needs a string built from an integer (``At``, ``Pair``), the
integer is read as a length-lexicographic rank.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from math import prod

from .errors import DomainError
from .natpoly import NatPoly
from .strings import pair, rank, unary, unpair, unrank


def exp_target_enumerator(n: int, i: int) -> int:
    """The i-th target of the coC=P ⊆ Exp-LWPP witness.

    Even i maps to i/2 and odd i to -(i+1)/2, so i = 1..2k lists every
    nonzero integer in [-k, k] exactly once. ``n`` is the length argument of
    the target function and does not influence the value.
    """
    if i < 1:
        raise DomainError(f"enumerator index must be positive, got {i}")
    return i // 2 if i % 2 == 0 else -(i + 1) // 2


class FPFunc(ABC):
    """A total, deterministic map from strings to integers."""

    @abstractmethod
    def evaluate(self, s: str, alphabet: str) -> int: ...


@dataclass(frozen=True)
class Const(FPFunc):
    value: int

    def evaluate(self, s: str, alphabet: str) -> int:
        return self.value


@dataclass(frozen=True)
class Length(FPFunc):
    def evaluate(self, s: str, alphabet: str) -> int:
        return len(s)


@dataclass(frozen=True)
class Index(FPFunc):
    """The index i of a paired argument <x, i>."""

    def evaluate(self, s: str, alphabet: str) -> int:
        return unpair(s, alphabet)[1]


@dataclass(frozen=True)
class Rank(FPFunc):
    """The identity on strings, as a rank."""

    def evaluate(self, s: str, alphabet: str) -> int:
        return rank(s, alphabet)


@dataclass(frozen=True)
class First(FPFunc):
    """Rank of the first component x of <x, i>."""

    def evaluate(self, s: str, alphabet: str) -> int:
        return rank(unpair(s, alphabet)[0], alphabet)


@dataclass(frozen=True)
class Unary(FPFunc):
    """Rank of 0^{|s|}."""

    def evaluate(self, s: str, alphabet: str) -> int:
        return rank(unary(len(s), alphabet), alphabet)


@dataclass(frozen=True)
class Pair(FPFunc):
    """Rank of <unrank(first(s)), index(s)>."""

    first: FPFunc
    index: FPFunc

    def evaluate(self, s: str, alphabet: str) -> int:
        x = unrank(self.first.evaluate(s, alphabet), alphabet)
        return rank(pair(x, self.index.evaluate(s, alphabet), alphabet), alphabet)


@dataclass(frozen=True)
class Table(FPFunc):
    """Lookup table keyed by the whole argument."""

    entries: tuple[tuple[str, int], ...]
    default: int = 0

    @cached_property
    def _lookup(self) -> dict[str, int]:
        return dict(self.entries)

    def evaluate(self, s: str, alphabet: str) -> int:
        return self._lookup.get(s, self.default)


@dataclass(frozen=True)
class TargetList(FPFunc):
    """Per-row target lists for paired arguments <x, i>.

    The row is selected by x and the value is row[(i - 1) mod len(row)], so a
    short list is repeated cyclically when the multiplicity exceeds it.
    """

    rows: tuple[tuple[str, tuple[int, ...]], ...]
    default: tuple[int, ...] = (1,)

    def __post_init__(self) -> None:
        if not self.default or any(not values for _, values in self.rows):
            raise DomainError("target rows must be nonempty")

    @cached_property
    def _lookup(self) -> dict[str, tuple[int, ...]]:
        return dict(self.rows)

    def row(self, x: str) -> tuple[int, ...]:
        return self._lookup.get(x, self.default)

    def evaluate(self, s: str, alphabet: str) -> int:
        x, i = unpair(s, alphabet)
        values = self.row(x)
        return values[(i - 1) % len(values)]


@dataclass(frozen=True)
class Sum(FPFunc):
    terms: tuple[FPFunc, ...]

    def evaluate(self, s: str, alphabet: str) -> int:
        return sum(term.evaluate(s, alphabet) for term in self.terms)


@dataclass(frozen=True)
class Product(FPFunc):
    factors: tuple[FPFunc, ...]

    def evaluate(self, s: str, alphabet: str) -> int:
        return prod(factor.evaluate(s, alphabet) for factor in self.factors)


@dataclass(frozen=True)
class Negate(FPFunc):
    inner: FPFunc

    def evaluate(self, s: str, alphabet: str) -> int:
        return -self.inner.evaluate(s, alphabet)


@dataclass(frozen=True)
class IndexProduct(FPFunc):
    """prod_{start <= i <= bound(n)} body(<s, i>).

    n is |s|, or |x| for a paired argument s = <x, j> when ``on_first`` is set.
    """

    body: FPFunc
    bound: NatPoly
    start: int = 1
    on_first: bool = False

    def evaluate(self, s: str, alphabet: str) -> int:
        n = len(unpair(s, alphabet)[0]) if self.on_first else len(s)
        return prod(
            self.body.evaluate(pair(s, i, alphabet), alphabet)
            for i in range(self.start, self.bound(n) + 1)
        )


@dataclass(frozen=True)
class At(FPFunc):
    """Composition: inner evaluated on unrank(arg(s))."""

    inner: FPFunc
    arg: FPFunc

    def evaluate(self, s: str, alphabet: str) -> int:
        return self.inner.evaluate(unrank(self.arg.evaluate(s, alphabet), alphabet), alphabet)


@dataclass(frozen=True)
class Enumerator(FPFunc):
    """exp_target_enumerator on paired arguments <0^n, i>."""

    def evaluate(self, s: str, alphabet: str) -> int:
        x, i = unpair(s, alphabet)
        return exp_target_enumerator(len(x), i)


def targets_by_length(rows: dict[int, list[int]], alphabet: str, default: tuple[int, ...] = (1,)) -> TargetList:
    """Length-indexed target lists keyed by 0^ℓ."""
    return TargetList(
        rows=tuple((unary(length, alphabet), tuple(values)) for length, values in sorted(rows.items())),
        default=default,
    )


def targets_by_input(rows: dict[str, list[int]], default: tuple[int, ...] = (1,)) -> TargetList:
    """Input-indexed target lists keyed by x."""
    return TargetList(rows=tuple((x, tuple(values)) for x, values in sorted(rows.items())), default=default)


# Views used by the collapse compilers. Each is an FP function returning the
# rank of a rearranged argument.

def length_view() -> FPFunc:
    """<x, i> -> <0^{|x|}, i>."""
    return Pair(At(Unary(), First()), Index())


def outer_length_view() -> FPFunc:
    """<<y, i>, j> -> <0^{|y|}, j>."""
    return Pair(At(Unary(), At(First(), First())), Index())


def inner_length_view() -> FPFunc:
    """<<y, i>, j> -> <0^{|y|}, i>."""
    return Pair(At(Unary(), At(First(), First())), At(Index(), First()))
