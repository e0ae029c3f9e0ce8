"""Stage searches of the oracle constructions and the path-set combinatorics.

A stage fixes a length n, an oracle B_prev built by earlier stages, a
nondeterministic oracle machine N and a deterministic oracle machine M.
M on 0^n under B_prev computes the target ``val`` and queries the set T of
length-n strings that later stages must leave alone. The gap search looks
for C within Sigma^n - T with

    1 <= |C| <= r(n) and gap_{N^{B_prev + C}}(0^n) != val, or
    |C| = 0 and gap_{N^{B_prev}}(0^n) != 0,

and the accepting-path search does the same with acc in place of gap and
|C| in {1, 2}. At desk scale the largeness conditions on n usually fail,
so "no set found" is a legitimate outcome; the conditions are reported.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal as TypingLiteral
from typing import Union

from pydantic import BaseModel, Field

from .errors import BudgetExceededError, DomainError, PreconditionError
from .natpoly import NatPoly
from .polyenc import (
    ComputationPath,
    Divides,
    HypothesisFailed,
    Literal,
    MultilinearPoly,
    OracleMachine,
    SignedMonomial,
    check_prime_divisor,
    encode,
    oracle_acc,
    oracle_gap,
    restrict,
    valid_paths,
)
from .primes import primes_in_range
from .strings import DEFAULT_ALPHABET, strings_of_length, unary

logger = logging.getLogger("gaplab")

StageKind = TypingLiteral["gap", "acc"]


@dataclass(frozen=True, slots=True)
class Value:
    """Output leaf of a deterministic oracle machine."""

    value: int


@dataclass(frozen=True, slots=True)
class Probe:
    word: str
    yes: FunctionTree
    no: FunctionTree


FunctionTree = Union[Value, Probe]


@dataclass(frozen=True)
class FunctionMachine:
    """Deterministic oracle machine computing an integer."""

    name: str
    time_bound: NatPoly
    trees: Mapping[str, FunctionTree] = field(default_factory=dict, compare=False)
    default: FunctionTree = Value(1)

    def run(self, x: str, oracle: frozenset[str]) -> tuple[int, tuple[str, ...]]:
        """(output, queried strings in order) under ``oracle``."""
        node = self.trees.get(x, self.default)
        queried: list[str] = []
        while isinstance(node, Probe):
            queried.append(node.word)
            node = node.yes if node.word in oracle else node.no
        return node.value, tuple(queried)


def test_language_member(oracle: frozenset[str] | set[str], n: int) -> bool:
    """0^n is in L_B exactly when B holds a string of length n."""
    return any(len(w) == n for w in oracle)


@dataclass(frozen=True)
class StageContext:
    machine: OracleMachine
    function: FunctionMachine
    n: int
    previous: frozenset[str]
    reserved: frozenset[str]
    val: int
    r: NatPoly
    p: NatPoly
    alphabet: str = DEFAULT_ALPHABET
    prior: tuple[int, NatPoly] | None = None

    @property
    def x(self) -> str:
        return unary(self.n, self.alphabet)

    def candidates(self) -> list[str]:
        """Sigma^n - T in lexicographic order."""
        return [w for w in strings_of_length(self.n, self.alphabet) if w not in self.reserved]


def stage_context(
    machine: OracleMachine,
    function: FunctionMachine,
    n: int,
    previous: frozenset[str] = frozenset(),
    r: NatPoly | None = None,
    p: NatPoly | None = None,
    prior: tuple[int, NatPoly] | None = None,
    alphabet: str = DEFAULT_ALPHABET,
) -> StageContext:
    """Run M on 0^n under B_prev to obtain val and the reserved set T.

    ``p`` bounds the running time of both machines and defaults to M's time
    bound; ``prior`` is (n_{j-1}, p_{j-1}) of the previous stage, if any.
    """
    p = p or function.time_bound
    val, queried = function.run(unary(n, alphabet), previous)
    reserved = frozenset(w for w in queried if len(w) == n)
    if len(reserved) > p(n):
        raise PreconditionError(f"M queried {len(reserved)} strings of length {n}, more than p(n) = {p(n)}")
    return StageContext(
        machine=machine,
        function=function,
        n=n,
        previous=previous,
        reserved=reserved,
        val=val,
        r=r or NatPoly.standard(2),
        p=p,
        alphabet=alphabet,
        prior=prior,
    )


def joint_time_bound(machine: OracleMachine, function: FunctionMachine, n: int) -> NatPoly:
    """The larger of the two time bounds at n, as a constant polynomial."""
    return NatPoly.constant(max(machine.time_bound(n), function.time_bound(n)))


def _measure(ctx: StageContext, kind: StageKind, extra: frozenset[str]) -> int:
    oracle = ctx.previous | extra
    return oracle_gap(ctx.machine, ctx.x, oracle) if kind == "gap" else oracle_acc(ctx.machine, ctx.x, oracle)


def _size_limit(ctx: StageContext, kind: StageKind) -> int:
    return ctx.r(ctx.n) if kind == "gap" else 2


def stage_satisfied(ctx: StageContext, kind: StageKind, chosen: frozenset[str]) -> bool:
    """Re-evaluate the stage condition for ``chosen``."""
    if chosen & ctx.reserved or any(len(w) != ctx.n for w in chosen):
        return False
    value = _measure(ctx, kind, chosen)
    if not chosen:
        return value != 0
    return len(chosen) <= _size_limit(ctx, kind) and value != ctx.val


def _candidate_sets(ctx: StageContext, kind: StageKind) -> Iterator[frozenset[str]]:
    pool = ctx.candidates()
    yield frozenset()
    for size in range(1, min(_size_limit(ctx, kind), len(pool)) + 1):
        for chosen in combinations(pool, size):
            yield frozenset(chosen)


def _search(ctx: StageContext, kind: StageKind, max_candidates: int) -> tuple[frozenset[str] | None, int]:
    if ctx.val == 0:
        raise DomainError("val = 0: the stage is skipped")
    examined = 0
    for chosen in _candidate_sets(ctx, kind):
        examined += 1
        if examined > max_candidates:
            raise BudgetExceededError(f"stage search passed {max_candidates} candidate sets")
        if stage_satisfied(ctx, kind, chosen):
            logger.debug(f"{kind} stage at n={ctx.n}: found {sorted(chosen)} after {examined} candidates")
            return chosen, examined
    return None, examined


def gap_stage_search(ctx: StageContext, max_candidates: int = 100_000) -> frozenset[str] | None:
    """First C (empty set, then by size and lexicographically) meeting the gap condition."""
    return _search(ctx, "gap", max_candidates)[0]


def acc_stage_search(ctx: StageContext, max_candidates: int = 100_000) -> frozenset[str] | None:
    """First C of size at most 2 meeting the accepting-path condition."""
    return _search(ctx, "acc", max_candidates)[0]


def stage_conditions(ctx: StageContext, kind: StageKind) -> dict[str, bool]:
    """Largeness conditions on n for the stage, each evaluated."""
    n, pn = ctx.n, ctx.p(ctx.n)
    conditions = {"a": ctx.prior is None or n > ctx.prior[1](ctx.prior[0])}
    if kind == "gap":
        conditions["b"] = ctx.r(n) >= pn**4
        conditions["c"] = (2**n - pn) / 2 >= pn**4
        conditions["d"] = pn**3 - pn >= pn**2
    else:
        conditions["b"] = 2**n - pn > 6 * pn + 1
    return conditions


class StageReport(BaseModel):
    kind: str
    n: int
    val: int
    reserved: list[str]
    candidates: int
    conditions: dict[str, bool]
    found: list[str] | None = None
    value: int | None = None
    confirmed: bool = False
    examined: int = 0
    skipped: str | None = None


def run_stage(ctx: StageContext, kind: StageKind, max_candidates: int = 100_000) -> StageReport:
    """Search one stage and confirm any hit by re-simulation."""
    report = StageReport(
        kind=kind,
        n=ctx.n,
        val=ctx.val,
        reserved=sorted(ctx.reserved),
        candidates=len(ctx.candidates()),
        conditions=stage_conditions(ctx, kind),
    )
    try:
        chosen, report.examined = _search(ctx, kind, max_candidates)
    except DomainError as e:
        report.skipped = str(e)
        return report
    if chosen is not None:
        report.found = sorted(chosen)
        report.value = _measure(ctx, kind, chosen)
        report.confirmed = stage_satisfied(ctx, kind, chosen)
    return report


# Accepting path sets


@dataclass(frozen=True)
class PathSetAnalysis:
    """A_alpha for each candidate alpha, over one fixed input and oracle."""

    oracle: frozenset[str]
    base_accepting: int
    sets: dict[str, frozenset[ComputationPath]]
    bound: int

    def intersections(self) -> list[tuple[str, str, int]]:
        """Pairs alpha1 < alpha2 whose path sets share a triple."""
        found = []
        for a, b in combinations(sorted(self.sets), 2):
            shared = len(self.sets[a] & self.sets[b])
            if shared:
                found.append((a, b, shared))
        return found

    @property
    def disjoint(self) -> bool:
        return not self.intersections()


def accepting_path_sets(
    machine: OracleMachine, oracle: frozenset[str], universe: list[str], x: str, bound: int | None = None
) -> PathSetAnalysis:
    """A_alpha = accepting path triples of the machine under oracle + {alpha}.

    ``bound`` caps the number of queries on a path and defaults to t(|x|).
    """
    accepting = [path for path, sign in valid_paths(machine, x) if sign > 0]
    sets = {
        alpha: frozenset(path for path in accepting if path.consistent_with(oracle | {alpha}))
        for alpha in universe
    }
    base = sum(1 for path in accepting if path.consistent_with(oracle))
    return PathSetAnalysis(
        oracle=oracle,
        base_accepting=base,
        sets=sets,
        bound=machine.time_bound(len(x)) if bound is None else bound,
    )


def _kill_counts(paths: frozenset[ComputationPath], universe: list[str], alpha: str) -> dict[str, int]:
    return {
        beta: sum(1 for path in paths if beta in path.qminus) for beta in universe if beta != alpha
    }


def conflicting_set(analysis: PathSetAnalysis, alpha: str, val: int) -> frozenset[str]:
    """Strings beta whose addition removes at least floor(val/3) + 1 paths of A_alpha.

    A path survives adding beta unless beta was answered no on it.
    """
    paths = analysis.sets[alpha]
    if len(paths) != val:
        raise PreconditionError(f"|A_{alpha}| = {len(paths)} differs from val = {val}")
    threshold = val // 3 + 1
    kills = _kill_counts(paths, sorted(analysis.sets), alpha)
    return frozenset(beta for beta, count in kills.items() if count >= threshold)


def find_nonconflicting_pair(analysis: PathSetAnalysis, val: int) -> tuple[str, str] | None:
    """First gamma1 < gamma2 with neither in the other's conflicting set."""
    conflicts = {alpha: conflicting_set(analysis, alpha, val) for alpha in sorted(analysis.sets)}
    for g1, g2 in combinations(sorted(analysis.sets), 2):
        if g2 not in conflicts[g1] and g1 not in conflicts[g2]:
            return g1, g2
    return None


class ClaimReport(BaseModel):
    n: int
    val: int
    base_accepting: int
    set_sizes: dict[str, int]
    sizes_match_val: bool
    disjoint: bool | None = None
    conflicting: dict[str, list[str]] = Field(default_factory=dict)
    conflicting_bound: int = 0
    bound_ok: bool | None = None
    path_kill_ok: bool = True
    choice_collisions: int = 0
    pair: list[str] | None = None
    pair_acc: int | None = None
    pair_lower_bound: int | None = None
    pair_ok: bool | None = None


def _choice_collisions(paths: frozenset[ComputationPath]) -> int:
    seen: dict[str, int] = {}
    for path in paths:
        seen[path.choices] = seen.get(path.choices, 0) + 1
    return sum(count - 1 for count in seen.values())


def claim_report(ctx: StageContext) -> ClaimReport:
    """Check the counting argument behind the accepting-path stage on one fixture.

    Disjointness and the gamma1, gamma2 lower bound are asserted only when N
    under B_prev accepts nothing, and the conflicting-set bound only when
    every |A_alpha| equals val.
    """
    universe = ctx.candidates()
    analysis = accepting_path_sets(ctx.machine, ctx.previous, universe, ctx.x, bound=ctx.p(ctx.n))
    sizes = {alpha: len(paths) for alpha, paths in analysis.sets.items()}
    report = ClaimReport(
        n=ctx.n,
        val=ctx.val,
        base_accepting=analysis.base_accepting,
        set_sizes=sizes,
        sizes_match_val=all(size == ctx.val for size in sizes.values()),
        conflicting_bound=3 * analysis.bound,
    )
    if analysis.base_accepting == 0:
        report.disjoint = analysis.disjoint

    everything = [path for path, sign in valid_paths(ctx.machine, ctx.x) if sign > 0]
    for alpha in universe:
        paths = analysis.sets[alpha]
        report.choice_collisions += _choice_collisions(paths)
        for beta in universe:
            if beta == alpha:
                continue
            oracle = ctx.previous | {alpha, beta}
            survivors = {path for path in everything if path.consistent_with(oracle)}
            for path in paths:
                if (path not in survivors) != (beta in path.qminus):
                    report.path_kill_ok = False

    if report.sizes_match_val and ctx.val > 0:
        for alpha in universe:
            report.conflicting[alpha] = sorted(conflicting_set(analysis, alpha, ctx.val))
        report.bound_ok = all(len(c) <= report.conflicting_bound for c in report.conflicting.values())
        pair = find_nonconflicting_pair(analysis, ctx.val)
        if pair is not None and analysis.base_accepting == 0:
            report.pair = list(pair)
            pair_oracle = ctx.previous | set(pair)
            pair_paths = frozenset(path for path in everything if path.consistent_with(pair_oracle))
            report.choice_collisions += _choice_collisions(pair_paths)
            report.pair_acc = oracle_acc(ctx.machine, ctx.x, pair_oracle)
            report.pair_lower_bound = 2 * (ctx.val - ctx.val // 3)
            report.pair_ok = report.pair_acc >= report.pair_lower_bound
    logger.debug(f"Claim report at n={ctx.n}: disjoint={report.disjoint}, bound_ok={report.bound_ok}")
    return report


# Counting argument for the gap stage


class PrimeCheck(BaseModel):
    prime: int
    outcome: str
    val: int | None = None


class StagePolynomialReport(BaseModel):
    variables: list[str]
    degree: int
    primes: list[int]
    checks: list[PrimeCheck] = Field(default_factory=list)


def _reindex(p: MultilinearPoly, position: dict[int, int], variables: int) -> MultilinearPoly:
    monomials = tuple(
        SignedMonomial(m.sign, tuple(Literal(position[lit.var], lit.positive) for lit in m.literals))
        for m in p.monomials
    )
    return MultilinearPoly(variables, monomials)


def stage_polynomial(ctx: StageContext, slice_budget: int = 1_000_000) -> tuple[MultilinearPoly, StagePolynomialReport]:
    """Encoding of N on 0^n over the free strings Sigma^n - T.

    Universe strings outside Sigma^n - T are fixed by B_prev; free strings
    the machine never queries stay as variables the polynomial ignores. The
    primes checked are those in deg(s) + 1 .. min(N/2, r(n)) with N the
    number of free strings.
    """
    machine = ctx.machine
    free = ctx.candidates()
    slot = {w: i for i, w in enumerate(free)}
    encoded = encode(machine, ctx.x)
    fixed = {i: int(w in ctx.previous) for i, w in enumerate(machine.universe) if w not in slot}
    position = {i: slot[w] for i, w in enumerate(machine.universe) if w in slot}
    restricted = _reindex(restrict(encoded, fixed), position, len(free))
    count = len(free)
    primes = primes_in_range(restricted.degree + 1, min(count // 2, ctx.r(ctx.n)))
    report = StagePolynomialReport(variables=free, degree=restricted.degree, primes=primes)
    for p in primes:
        try:
            result = check_prime_divisor(restricted, p, count, slice_budget)
        except BudgetExceededError:
            report.checks.append(PrimeCheck(prime=p, outcome="budget exceeded"))
            continue
        if isinstance(result, Divides):
            report.checks.append(PrimeCheck(prime=p, outcome="divides", val=result.val))
        elif isinstance(result, HypothesisFailed):
            report.checks.append(PrimeCheck(prime=p, outcome=f"hypothesis failed: {result.reason}"))
        else:
            report.checks.append(PrimeCheck(prime=p, outcome="not divisible", val=result.val))
    return restricted, report
