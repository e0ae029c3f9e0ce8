"""Target specifications for the LWPP, WPP and C=P families."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

from .errors import InvalidSpecError
from .fp import At, First, FPFunc, TargetList, length_view
from .natpoly import ExpBound, Multiplicity, NatPoly
from .strings import DEFAULT_ALPHABET, Domain, pair, unary

TargetMode = Literal["length", "input"]


@dataclass(frozen=True)
class TargetSpec:
    """Indexed targets f(<key, i>) for 1 <= i <= r(|x|).

    In ``length`` mode the key is 0^{|x|}; in ``input`` mode it is x itself.
    """

    mode: TargetMode
    target: FPFunc
    multiplicity: Multiplicity

    def __post_init__(self) -> None:
        if self.mode not in ("length", "input"):
            raise InvalidSpecError(f"unknown target mode {self.mode!r}")

    @classmethod
    def constant(cls, mode: TargetMode, values: Sequence[int]) -> TargetSpec:
        """The same target list on every input, with r equal to its size."""
        if not values:
            raise InvalidSpecError("a target list needs at least one value")
        return cls(mode, TargetList(rows=(), default=tuple(values)), NatPoly.constant(len(values)))

    @classmethod
    def single(cls, mode: TargetMode, f: FPFunc) -> TargetSpec:
        """One target per key, f(key): the shape of an LWPP or WPP witness."""
        return cls(mode, At(f, First()), NatPoly.constant(1))

    def key(self, x: str, alphabet: str = DEFAULT_ALPHABET) -> str:
        return unary(len(x), alphabet) if self.mode == "length" else x

    def keyed(self) -> FPFunc:
        """FP function mapping <x, i> to f(<key(x), i>)."""
        return At(self.target, length_view()) if self.mode == "length" else self.target

    def bound(self, n: int) -> int:
        return self.multiplicity(n)

    def polynomial_bound(self) -> NatPoly:
        if isinstance(self.multiplicity, ExpBound):
            raise InvalidSpecError("an exponential multiplicity has no polynomial product form")
        return self.multiplicity

    def targets(self, x: str, alphabet: str = DEFAULT_ALPHABET) -> list[int]:
        key = self.key(x, alphabet)
        return [
            self.target.evaluate(pair(key, i, alphabet), alphabet)
            for i in range(1, self.bound(len(x)) + 1)
        ]

    def zero_target_keys(self, domain: Domain) -> list[str]:
        """Keys in ``domain`` whose target list contains 0."""
        keys = (
            [unary(n, domain.alphabet) for n in domain.lengths()]
            if self.mode == "length"
            else list(domain.strings())
        )
        return [key for key in keys if 0 in self.targets(key, domain.alphabet)]

    def check_nonzero(self, domain: Domain) -> None:
        zeros = self.zero_target_keys(domain)
        if zeros:
            raise InvalidSpecError(f"zero target for {len(zeros)} key(s), first {zeros[0]!r}")


@dataclass(frozen=True)
class TwoSidedTargetSpec:
    """Acceptance and rejection target lists, disjoint at every length."""

    accept: TargetSpec
    reject: TargetSpec

    def __post_init__(self) -> None:
        if self.accept.mode != "length" or self.reject.mode != "length":
            raise InvalidSpecError("two-sided targets are length-indexed")

    def overlaps(self, domain: Domain) -> dict[int, list[int]]:
        """Lengths where A_j and R_j intersect, with the shared values."""
        shared: dict[int, list[int]] = {}
        for n in domain.lengths():
            x = unary(n, domain.alphabet)
            common = set(self.accept.targets(x, domain.alphabet)) & set(
                self.reject.targets(x, domain.alphabet)
            )
            if common:
                shared[n] = sorted(common)
        return shared

    def check_disjoint(self, domain: Domain) -> None:
        shared = self.overlaps(domain)
        if shared:
            n = min(shared)
            raise InvalidSpecError(f"acceptance and rejection targets overlap at length {n}: {shared[n]}")
