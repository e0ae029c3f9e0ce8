"""Gap programs: symbolic GapP terms with exact evaluation and machine realization.

A :class:`GapProgram` is a tree of closure combinators over base machines
and FP constants. :func:`eval_gap` computes its integer value directly;
:func:`realize` compiles it into a single :class:`BaseMachine` whose
computation trees have the same gap on every domain input.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from .errors import DomainError
from .fp import FPFunc
from .natpoly import NatPoly
from .strings import Domain, pair, unrank
from .trees import (
    ACCEPT,
    BALANCED,
    Choice,
    ChoiceTree,
    Leaf,
    const_tree,
    depth,
    graft,
    negate,
    padded_tree,
    tree_gap,
)

logger = logging.getLogger("gaplab")


@dataclass(frozen=True)
class BaseMachine:
    """A nondeterministic machine given by one computation tree per input.

    Inputs missing from ``trees`` run ``default``. ``time_bound`` bounds the
    depth of the tree on every input of length n by t(n).
    """

    name: str
    time_bound: NatPoly
    trees: Mapping[str, ChoiceTree] = field(default_factory=dict, compare=False)
    default: ChoiceTree = BALANCED

    def tree_for(self, x: str) -> ChoiceTree:
        return self.trees.get(x, self.default)

    def gap(self, x: str) -> int:
        return tree_gap(self.tree_for(x))

    def time_bound_violations(self) -> list[str]:
        """Inputs whose tree is deeper than the declared time bound."""
        return [x for x, tree in self.trees.items() if depth(tree) > self.time_bound(len(x))]


class GapProgram:
    """Base class of the combinator nodes."""

    def __neg__(self) -> GapProgram:
        return Neg(self)

    def __add__(self, other: GapProgram) -> GapProgram:
        return Add(self, other)

    def __sub__(self, other: GapProgram) -> GapProgram:
        return Sub(self, other)

    def __mul__(self, other: GapProgram) -> GapProgram:
        return Mul(self, other)


@dataclass(frozen=True, eq=False)
class Base(GapProgram):
    machine: BaseMachine


@dataclass(frozen=True, eq=False)
class ConstFP(GapProgram):
    f: FPFunc


@dataclass(frozen=True, eq=False)
class Neg(GapProgram):
    child: GapProgram


@dataclass(frozen=True, eq=False)
class Add(GapProgram):
    left: GapProgram
    right: GapProgram


@dataclass(frozen=True, eq=False)
class Sub(GapProgram):
    left: GapProgram
    right: GapProgram


@dataclass(frozen=True, eq=False)
class Mul(GapProgram):
    left: GapProgram
    right: GapProgram


@dataclass(frozen=True, eq=False)
class PolyProd(GapProgram):
    """prod_{start <= i <= bound(|x|)} child(<x, i>), with start 0 or 1."""

    child: GapProgram
    bound: NatPoly
    start: int = 1

    def indices(self, x: str) -> range:
        return range(self.start, self.bound(len(x)) + 1)


@dataclass(frozen=True, eq=False)
class ComposeFP(GapProgram):
    """child evaluated at the string whose rank is f(x)."""

    child: GapProgram
    f: FPFunc


def poly_product(child: GapProgram, q: NatPoly, range_start: str = "from1") -> PolyProd:
    """Closure under polynomial products, over 0..q(|x|) or 1..q(|x|)."""
    starts = {"from0": 0, "from1": 1}
    if range_start not in starts:
        raise DomainError(f"range must be 'from0' or 'from1', got {range_start!r}")
    return PolyProd(child, q, starts[range_start])


def program_depth(prog: GapProgram) -> int:
    if isinstance(prog, (Base, ConstFP)):
        return 1
    if isinstance(prog, (Neg, PolyProd, ComposeFP)):
        return 1 + program_depth(prog.child)
    if isinstance(prog, (Add, Sub, Mul)):
        return 1 + max(program_depth(prog.left), program_depth(prog.right))
    raise TypeError(f"unknown program node {type(prog).__name__}")


def _compose_argument(f: FPFunc, x: str, alphabet: str) -> str:
    value = f.evaluate(x, alphabet)
    if value < 0:
        raise DomainError(f"FP value {value} on {x!r} cannot be read as a string")
    return unrank(value, alphabet)


def _evaluate(prog: GapProgram, x: str, alphabet: str) -> int:
    if isinstance(prog, Base):
        return prog.machine.gap(x)
    if isinstance(prog, ConstFP):
        return prog.f.evaluate(x, alphabet)
    if isinstance(prog, Neg):
        return -_evaluate(prog.child, x, alphabet)
    if isinstance(prog, Add):
        return _evaluate(prog.left, x, alphabet) + _evaluate(prog.right, x, alphabet)
    if isinstance(prog, Sub):
        return _evaluate(prog.left, x, alphabet) - _evaluate(prog.right, x, alphabet)
    if isinstance(prog, Mul):
        left = _evaluate(prog.left, x, alphabet)
        if left == 0:
            return 0
        return left * _evaluate(prog.right, x, alphabet)
    if isinstance(prog, PolyProd):
        total = 1
        for i in prog.indices(x):
            total *= _evaluate(prog.child, pair(x, i, alphabet), alphabet)
            if total == 0:
                break
        return total
    if isinstance(prog, ComposeFP):
        return _evaluate(prog.child, _compose_argument(prog.f, x, alphabet), alphabet)
    raise TypeError(f"unknown program node {type(prog).__name__}")


def eval_gap(prog: GapProgram, x: str, domain: Domain | None = None) -> int:
    """Exact value of ``prog`` on ``x``; raises DomainError outside the domain."""
    domain = domain or Domain()
    domain.check(x)
    return _evaluate(prog, x, domain.alphabet)


def _realize_tree(prog: GapProgram, x: str, alphabet: str) -> ChoiceTree:
    if isinstance(prog, Base):
        return prog.machine.tree_for(x)
    if isinstance(prog, ConstFP):
        return const_tree(prog.f.evaluate(x, alphabet))
    if isinstance(prog, Neg):
        return negate(_realize_tree(prog.child, x, alphabet))
    if isinstance(prog, Add):
        return Choice(_realize_tree(prog.left, x, alphabet), _realize_tree(prog.right, x, alphabet))
    if isinstance(prog, Sub):
        return Choice(
            _realize_tree(prog.left, x, alphabet),
            negate(_realize_tree(prog.right, x, alphabet)),
        )
    if isinstance(prog, Mul):
        return graft(_realize_tree(prog.left, x, alphabet), _realize_tree(prog.right, x, alphabet))
    if isinstance(prog, PolyProd):
        tree: ChoiceTree = ACCEPT
        for i in prog.indices(x):
            factor = _realize_tree(prog.child, pair(x, i, alphabet), alphabet)
            tree = factor if tree is ACCEPT else graft(tree, factor)
        return tree
    if isinstance(prog, ComposeFP):
        return _realize_tree(prog.child, _compose_argument(prog.f, x, alphabet), alphabet)
    raise TypeError(f"unknown program node {type(prog).__name__}")


def realize(prog: GapProgram, domain: Domain | None = None, name: str = "realized") -> BaseMachine:
    """Compile ``prog`` into one machine over every input of ``domain``.

    Neg swaps leaf labels, Add roots a fresh choice, Mul grafts the second
    tree below each leaf of the first, PolyProd folds Mul over its range and
    ConstFP(v) builds the minimal-depth tree with |v| leaves of sign(v).
    """
    domain = domain or Domain()
    trees: dict[str, ChoiceTree] = {}
    deepest = 0
    for x in domain.strings():
        tree = _realize_tree(prog, x, domain.alphabet)
        trees[x] = tree
        deepest = max(deepest, depth(tree))
    logger.debug(f"Realized {name} on {len(trees)} inputs, depth {deepest}")
    return BaseMachine(name=name, time_bound=NatPoly.constant(deepest), trees=trees, default=BALANCED)


def _count_tree(tree: ChoiceTree) -> ChoiceTree:
    mapped: dict[int, ChoiceTree] = {}
    stack: list[tuple[ChoiceTree, bool]] = [(tree, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in mapped:
            continue
        if isinstance(node, Leaf):
            mapped[id(node)] = ACCEPT if node.accept else BALANCED
        elif expanded:
            mapped[id(node)] = Choice(mapped[id(node.left)], mapped[id(node.right)])
        else:
            stack.extend([(node, True), (node.right, False), (node.left, False)])
    return mapped[id(tree)]


def accepting_machine(machine: BaseMachine) -> BaseMachine:
    """Machine whose gap equals the accepting-path count of ``machine``.

    Every rejecting leaf becomes a balanced pair, so rejecting paths stop
    contributing to the gap.
    """
    return BaseMachine(
        name=f"acc({machine.name})",
        time_bound=NatPoly(tuple(c + (1 if d == 0 else 0) for d, c in enumerate(machine.time_bound.coefficients))),
        trees={x: _count_tree(tree) for x, tree in machine.trees.items()},
        default=_count_tree(machine.default),
    )


def machine_from_gaps(
    name: str,
    gaps: Mapping[str, int],
    padding: Mapping[str, int] | None = None,
    default_gap: int = 0,
) -> BaseMachine:
    """Machine with the prescribed gap on each listed input."""
    trees: dict[str, ChoiceTree] = {}
    for x, value in gaps.items():
        trees[x] = padded_tree(value, (padding or {}).get(x, 0))
    deepest = max((depth(t) for t in trees.values()), default=0)
    return BaseMachine(
        name=name,
        time_bound=NatPoly.constant(max(deepest, depth(const_tree(default_gap)))),
        trees=trees,
        default=const_tree(default_gap),
    )


def gap_table(prog: GapProgram, domain: Domain | None = None) -> dict[str, int]:
    domain = domain or Domain()
    return {x: _evaluate(prog, x, domain.alphabet) for x in domain.strings()}


__all__ = [
    "Add",
    "Base",
    "BaseMachine",
    "ComposeFP",
    "ConstFP",
    "GapProgram",
    "Mul",
    "Neg",
    "PolyProd",
    "Sub",
    "accepting_machine",
    "eval_gap",
    "gap_table",
    "machine_from_gaps",
    "poly_product",
    "program_depth",
    "realize",
]
