"""Seeded fixture generators for the randomized checks.

Every generator draws from a ``random.Random`` passed in by the caller, so a
whole run is reproduced from one seed.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal as TypingLiteral

from .diagonalize import FunctionMachine, FunctionTree, Probe, Value
from .fp import Const, FPFunc, Length, Product, Rank, Sum, Unary, targets_by_input, targets_by_length
from .natpoly import NatPoly
from .polyenc import MultilinearPoly, OracleMachine, OracleTree, Query, symmetric_family
from .programs import (
    Add,
    Base,
    BaseMachine,
    ComposeFP,
    ConstFP,
    GapProgram,
    Mul,
    Neg,
    PolyProd,
    Sub,
    machine_from_gaps,
)
from .strings import DEFAULT_ALPHABET, Domain, strings_of_length
from .targets import TargetSpec, TwoSidedTargetSpec
from .trees import ACCEPT, BALANCED, REJECT, Choice, ChoiceTree, const_tree, depth, leaves_from

FixtureKind = TypingLiteral["lwpp", "wpp", "two-sided", "ceqp", "broken"]

_TARGET_VALUES = [v for v in range(-9, 10) if v != 0]
_PRODUCT_BOUNDS = (NatPoly.constant(0), NatPoly.constant(1), NatPoly.constant(2), NatPoly.constant(3))
_COMPOSE_ARGS: tuple[FPFunc, ...] = (Rank(), Unary(), Const(0), Const(5))


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


# Gap programs


def random_tree(rng: random.Random, max_depth: int, leaf_bias: float = 0.3) -> ChoiceTree:
    if max_depth == 0 or rng.random() < leaf_bias:
        return ACCEPT if rng.random() < 0.5 else REJECT
    return Choice(random_tree(rng, max_depth - 1, leaf_bias), random_tree(rng, max_depth - 1, leaf_bias))


def random_machine(rng: random.Random, domain: Domain, name: str, max_depth: int = 3) -> BaseMachine:
    """Independent random tree on every domain input, plus a random default."""
    trees = {x: random_tree(rng, max_depth) for x in domain.strings()}
    return BaseMachine(name, NatPoly.constant(max_depth), trees, default=random_tree(rng, max_depth))


def random_fp(rng: random.Random) -> FPFunc:
    k = rng.randint(-3, 3)
    return rng.choice(
        [
            Const(k),
            Length(),
            Sum((Length(), Const(k))),
            Product((Const(k), Length())),
        ]
    )


def random_program(rng: random.Random, machines: Sequence[BaseMachine], max_depth: int = 5) -> GapProgram:
    if max_depth <= 1 or rng.random() < 0.25:
        if rng.random() < 0.6:
            return Base(rng.choice(machines))
        return ConstFP(random_fp(rng))
    kind = rng.choice(("neg", "add", "sub", "mul", "prod", "compose"))
    if kind == "neg":
        return Neg(random_program(rng, machines, max_depth - 1))
    if kind in ("add", "sub", "mul"):
        combinator = {"add": Add, "sub": Sub, "mul": Mul}[kind]
        return combinator(
            random_program(rng, machines, max_depth - 1),
            random_program(rng, machines, max_depth - 1),
        )
    child = random_program(rng, machines, max_depth - 1)
    if kind == "prod":
        return PolyProd(child, rng.choice(_PRODUCT_BOUNDS), rng.choice((0, 1)))
    return ComposeFP(child, rng.choice(_COMPOSE_ARGS))


# Target-collapse fixtures


@dataclass(frozen=True)
class CollapseFixture:
    label: str
    g: GapProgram
    spec: TargetSpec | TwoSidedTargetSpec
    language: frozenset[str]


@dataclass(frozen=True)
class CeqpFixture:
    label: str
    machine: BaseMachine
    spec: TargetSpec
    language: frozenset[str]


def _witness(name: str, gaps: dict[str, int], rng: random.Random) -> GapProgram:
    padding = {x: rng.randrange(3) for x in gaps}
    return Base(machine_from_gaps(name, gaps, padding))


def collapse_fixture(
    rng: random.Random,
    domain: Domain,
    r: NatPoly | None = None,
    mode: TypingLiteral["length", "input"] = "length",
    label: str = "lwpp",
) -> CollapseFixture:
    """Witness g whose gap is a random target on accepted inputs and 0 elsewhere."""
    r = r or NatPoly.standard(2)
    if mode == "length":
        by_length = {n: [rng.choice(_TARGET_VALUES) for _ in range(r(n))] for n in domain.lengths()}
        target = targets_by_length(by_length, domain.alphabet)
        row = {x: by_length[len(x)] for x in domain.strings()}
    else:
        row = {x: [rng.choice(_TARGET_VALUES) for _ in range(r(len(x)))] for x in domain.strings()}
        target = targets_by_input(row)
    gaps: dict[str, int] = {}
    members = set()
    for x in domain.strings():
        if rng.random() < 0.5:
            gaps[x] = rng.choice(row[x])
            members.add(x)
        else:
            gaps[x] = 0
    spec = TargetSpec(mode, target, r)
    return CollapseFixture(label, _witness(f"{label}-g", gaps, rng), spec, frozenset(members))


def broken_collapse_fixture(rng: random.Random, domain: Domain, r: NatPoly | None = None) -> CollapseFixture:
    """A collapse fixture with one input whose gap is neither 0 nor a target."""
    fixture = collapse_fixture(rng, domain, r, label="broken")
    assert isinstance(fixture.g, Base) and isinstance(fixture.spec, TargetSpec)
    gaps = {x: fixture.g.machine.gap(x) for x in domain.strings()}
    victim = rng.choice(sorted(gaps))
    gaps[victim] = 10 + rng.randrange(5)
    return CollapseFixture("broken", _witness("broken-g", gaps, rng), fixture.spec, fixture.language - {victim})


def two_sided_fixture(
    rng: random.Random,
    domain: Domain,
    r_accept: NatPoly | None = None,
    r_reject: NatPoly | None = None,
) -> CollapseFixture:
    """Disjoint acceptance and rejection lists; g hits one of the two."""
    r_accept = r_accept or NatPoly((1, 1))
    r_reject = r_reject or NatPoly.constant(2)
    accept_rows: dict[int, list[int]] = {}
    reject_rows: dict[int, list[int]] = {}
    for n in domain.lengths():
        values = rng.sample(range(-9, 10), r_accept(n) + r_reject(n))
        accept_rows[n], reject_rows[n] = values[: r_accept(n)], values[r_accept(n) :]
    gaps: dict[str, int] = {}
    members = set()
    for x in domain.strings():
        if rng.random() < 0.5:
            gaps[x] = rng.choice(accept_rows[len(x)])
            members.add(x)
        else:
            gaps[x] = rng.choice(reject_rows[len(x)])
    spec = TwoSidedTargetSpec(
        TargetSpec("length", targets_by_length(accept_rows, domain.alphabet), r_accept),
        TargetSpec("length", targets_by_length(reject_rows, domain.alphabet), r_reject),
    )
    return CollapseFixture("two-sided", _witness("two-sided-g", gaps, rng), spec, frozenset(members))


def ceqp_fixture(rng: random.Random, domain: Domain, r: NatPoly | None = None) -> CeqpFixture:
    """Machine with small random acc counts and input-indexed targets in 0..4."""
    r = r or NatPoly.constant(2)
    trees: dict[str, ChoiceTree] = {}
    rows: dict[str, list[int]] = {}
    members = set()
    for x in domain.strings():
        acc, rej = rng.randrange(5), rng.randrange(4)
        trees[x] = leaves_from([True] * acc + [False] * max(rej, 1 if acc == 0 else 0))
        rows[x] = [rng.randrange(5) for _ in range(r(len(x)))]
        if acc in rows[x]:
            members.add(x)
    deepest = max(depth(tree) for tree in trees.values())
    machine = BaseMachine("ceqp-n", NatPoly.constant(deepest), trees, default=BALANCED)
    return CeqpFixture("ceqp", machine, TargetSpec("input", targets_by_input(rows), r), frozenset(members))


# Oracle machines


def random_oracle_tree(
    rng: random.Random,
    universe: Sequence[str],
    max_depth: int,
    asked: frozenset[str] = frozenset(),
) -> OracleTree:
    """Random tree in which no path queries a string twice."""
    if max_depth == 0 or rng.random() < 0.2:
        return ACCEPT if rng.random() < 0.5 else REJECT
    fresh = [w for w in universe if w not in asked]
    if fresh and rng.random() < 0.5:
        word = rng.choice(fresh)
        grown = asked | {word}
        return Query(
            word,
            random_oracle_tree(rng, universe, max_depth - 1, grown),
            random_oracle_tree(rng, universe, max_depth - 1, grown),
        )
    return Choice(
        random_oracle_tree(rng, universe, max_depth - 1, asked),  # type: ignore[arg-type]
        random_oracle_tree(rng, universe, max_depth - 1, asked),  # type: ignore[arg-type]
    )


def random_oracle_machine(
    rng: random.Random,
    max_universe: int = 10,
    max_depth: int = 6,
    word_length: int = 4,
    name: str = "random-oracle",
) -> OracleMachine:
    """Machine running one random tree on every input over 1..max_universe strings."""
    size = rng.randint(1, max_universe)
    universe = tuple(sorted(rng.sample(list(strings_of_length(word_length)), size)))
    bound = rng.randint(1, max_depth)
    tree = random_oracle_tree(rng, universe, bound)
    return OracleMachine(name, NatPoly.constant(bound), universe, default=tree)


@dataclass(frozen=True)
class PrimeDivisorInstance:
    poly: MultilinearPoly
    p: int
    n: int


def symmetric_instance(
    rng: random.Random,
    primes: Sequence[int] = (2, 3, 5),
    max_variables: int = 10,
) -> PrimeDivisorInstance:
    """sum_k c_k e_k with c_0 = 0 and k < p, on 2p <= N <= max_variables variables."""
    p = rng.choice([q for q in primes if 2 * q <= max_variables])
    n = rng.randint(2 * p, max_variables)
    coefficients = [0] + [rng.randint(-2, 2) for _ in range(p - 1)]
    return PrimeDivisorInstance(symmetric_family(n, coefficients), p, n)


def violating_instance(rng: random.Random, primes: Sequence[int] = (2, 3, 5), max_variables: int = 10) -> PrimeDivisorInstance:
    """An instance breaking the origin or the degree hypothesis."""
    p = rng.choice([q for q in primes if 2 * q <= max_variables])
    n = rng.randint(2 * p, max_variables)
    coefficients = [rng.randint(-2, 2) for _ in range(p)]
    if rng.random() < 0.5:
        coefficients[0] = rng.choice((-1, 1))
    else:
        coefficients.append(rng.choice((-1, 1)))
    return PrimeDivisorInstance(symmetric_family(n, coefficients), p, n)


# Stage fixtures


def _join(nodes: list[OracleTree]) -> OracleTree:
    while len(nodes) > 1:
        merged: list[OracleTree] = [
            Choice(nodes[i], nodes[i + 1])  # type: ignore[arg-type]
            for i in range(0, len(nodes) - 1, 2)
        ]
        if len(nodes) % 2:
            merged.append(nodes[-1])
        nodes = merged
    return nodes[0]


def _branch_bound(branches: int, queries: int) -> NatPoly:
    return NatPoly.constant((branches - 1).bit_length() + queries + 1)


def counter_machine(n: int, kind: TypingLiteral["acc", "gap"] = "acc", alphabet: str = DEFAULT_ALPHABET) -> OracleMachine:
    """One branch per length-n string w querying w.

    A yes answer accepts. A no answer rejects for ``acc`` (so acc counts
    the length-n strings of the oracle) and ends in a balanced pair for
    ``gap`` (so the gap counts them).
    """
    words = list(strings_of_length(n, alphabet))
    miss: OracleTree = REJECT if kind == "acc" else BALANCED
    tree = _join([Query(w, ACCEPT, miss) for w in words])
    return OracleMachine(f"{kind}-counter", _branch_bound(len(words), 1), tuple(words), default=tree)


def constant_oracle_machine(n: int, gap: int, alphabet: str = DEFAULT_ALPHABET) -> OracleMachine:
    """Ignores the oracle; gap is ``gap`` under every oracle."""
    tree = const_tree(gap)
    return OracleMachine(
        f"constant-{gap}",
        NatPoly.constant(max(depth(tree), 1)),
        tuple(strings_of_length(n, alphabet)),
        default=tree,
    )


def zero_machine(n: int, alphabet: str = DEFAULT_ALPHABET) -> OracleMachine:
    return constant_oracle_machine(n, 0, alphabet)


def successor_kill_machine(n: int, val: int, killers: int, alphabet: str = DEFAULT_ALPHABET) -> OracleMachine:
    """``val`` accepting branches per string alpha, each asking for alpha.

    The first ``killers`` copies first ask for the next string of length n
    (cyclically) and reject on yes, so that string kills ``killers`` paths
    of A_alpha.
    """
    words = list(strings_of_length(n, alphabet))
    branches: list[OracleTree] = []
    for i, alpha in enumerate(words):
        successor = words[(i + 1) % len(words)]
        for copy in range(val):
            ask = Query(alpha, ACCEPT, REJECT)
            branches.append(Query(successor, REJECT, ask) if copy < killers and successor != alpha else ask)
    return OracleMachine(
        f"kill-{val}-{killers}", _branch_bound(len(branches), 2), tuple(words), default=_join(branches)
    )


def constant_function(val: int, time_bound: NatPoly | None = None) -> FunctionMachine:
    return FunctionMachine(f"const-{val}", time_bound or NatPoly.constant(1), default=Value(val))


def probing_function(words: Sequence[str], val: int) -> FunctionMachine:
    """Queries every string of ``words`` in order, then outputs ``val``."""
    tree: FunctionTree = Value(val)
    for word in reversed(words):
        tree = Probe(word, tree, tree)
    return FunctionMachine(f"probe-{val}", NatPoly.constant(max(len(words), 1)), default=tree)


def random_stage_machine(rng: random.Random, n: int, max_depth: int = 5, alphabet: str = DEFAULT_ALPHABET) -> OracleMachine:
    universe = tuple(strings_of_length(n, alphabet))
    bound = rng.randint(1, max_depth)
    return OracleMachine(
        "random-stage", NatPoly.constant(bound), universe, default=random_oracle_tree(rng, universe, bound)
    )


STAGE_FIXTURES = ("acc-counter", "gap-counter", "constant", "zero", "kill")


def stage_fixture(name: str, n: int, val: int, alphabet: str = DEFAULT_ALPHABET) -> OracleMachine:
    """Built-in machine N by name; ``val`` parameterizes the constant and kill machines."""
    if name == "acc-counter":
        return counter_machine(n, "acc", alphabet)
    if name == "gap-counter":
        return counter_machine(n, "gap", alphabet)
    if name == "constant":
        return constant_oracle_machine(n, val, alphabet)
    if name == "zero":
        return zero_machine(n, alphabet)
    if name == "kill":
        return successor_kill_machine(n, val, val // 3 + 1, alphabet)
    raise ValueError(f"unknown stage fixture {name!r}; expected one of {', '.join(STAGE_FIXTURES)}")
