"""Multilinear polynomial encodings of nondeterministic oracle machines.

For an oracle machine N and input x with query universe x_1..x_m, every
valid computation path rho contributes sign(rho) * mono(rho), where mono
multiplies y_i for each query answered yes and (1 - y_i) for each query
answered no. The resulting polynomial evaluated at the characteristic
vector of an oracle B equals the gap of N^B on x.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from math import comb
from typing import Union

from pydantic import BaseModel, Field

from .errors import BudgetExceededError, DomainError, EncodingError, ModelViolationError, ResourceError
from .natpoly import NatPoly
from .primes import is_prime
from .trees import BALANCED, Choice, Leaf

logger = logging.getLogger("gaplab")

# Reports carry the path monomials only up to this many paths.
MAX_FACTORED = 256


@dataclass(frozen=True, slots=True)
class Query:
    """Ask the oracle about ``word``; continue in ``yes`` or ``no``."""

    word: str
    yes: OracleTree
    no: OracleTree


OracleTree = Union[Leaf, Choice, Query]


@dataclass(frozen=True)
class OracleMachine:
    name: str
    time_bound: NatPoly
    universe: tuple[str, ...]
    trees: Mapping[str, OracleTree] = field(default_factory=dict, compare=False)
    default: OracleTree = BALANCED

    def tree_for(self, x: str) -> OracleTree:
        return self.trees.get(x, self.default)


@dataclass(frozen=True)
class ComputationPath:
    """A valid path as the triple (choices, Q+, Q-)."""

    choices: str
    qplus: frozenset[str] = frozenset()
    qminus: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.qplus & self.qminus:
            raise ModelViolationError(f"path {self.choices!r} answers {sorted(self.qplus & self.qminus)} both ways")

    def consistent_with(self, oracle: frozenset[str] | set[str]) -> bool:
        """True when this path is the run of the machine under ``oracle``."""
        return self.qplus <= oracle and not (self.qminus & oracle)


def valid_paths(machine: OracleMachine, x: str) -> list[tuple[ComputationPath, int]]:
    """Every root-to-leaf traversal, with leaf sign +1 (accept) or -1 (reject)."""
    paths: list[tuple[ComputationPath, int]] = []
    stack: list[tuple[OracleTree, str, frozenset[str], frozenset[str]]] = [
        (machine.tree_for(x), "", frozenset(), frozenset())
    ]
    while stack:
        node, choices, qplus, qminus = stack.pop()
        if isinstance(node, Leaf):
            paths.append((ComputationPath(choices, qplus, qminus), 1 if node.accept else -1))
        elif isinstance(node, Choice):
            stack.append((node.right, choices + "1", qplus, qminus))
            stack.append((node.left, choices + "0", qplus, qminus))
        else:
            if node.word in qplus or node.word in qminus:
                raise ModelViolationError(f"{machine.name} re-queries {node.word!r} on path {choices!r}")
            stack.append((node.no, choices, qplus, qminus | {node.word}))
            stack.append((node.yes, choices, qplus | {node.word}, qminus))
    return paths


def oracle_counts(machine: OracleMachine, x: str, oracle: frozenset[str] | set[str]) -> tuple[int, int]:
    """(acc, rej) of the machine run with oracle answers taken from ``oracle``."""
    memo: dict[int, tuple[int, int]] = {}

    def count(node: OracleTree) -> tuple[int, int]:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Leaf):
            result = (1, 0) if node.accept else (0, 1)
        elif isinstance(node, Choice):
            la, lr = count(node.left)
            ra, rr = count(node.right)
            result = (la + ra, lr + rr)
        else:
            result = count(node.yes if node.word in oracle else node.no)
        memo[key] = result
        return result

    return count(machine.tree_for(x))


def oracle_gap(machine: OracleMachine, x: str, oracle: frozenset[str] | set[str]) -> int:
    acc, rej = oracle_counts(machine, x, oracle)
    return acc - rej


def oracle_acc(machine: OracleMachine, x: str, oracle: frozenset[str] | set[str]) -> int:
    return oracle_counts(machine, x, oracle)[0]


@dataclass(frozen=True)
class Literal:
    var: int
    positive: bool = True

    def value(self, point: Sequence[int]) -> int:
        return point[self.var] if self.positive else 1 - point[self.var]


@dataclass(frozen=True)
class SignedMonomial:
    sign: int
    literals: tuple[Literal, ...] = ()

    def value(self, point: Sequence[int]) -> int:
        for literal in self.literals:
            if literal.value(point) == 0:
                return 0
        return self.sign


@dataclass(frozen=True)
class MultilinearPoly:
    """Signed monomials over y_0..y_{m-1}, with a lazily expanded normal form."""

    variables: int
    monomials: tuple[SignedMonomial, ...] = ()

    @cached_property
    def normal_form(self) -> dict[frozenset[int], int]:
        """Coefficient of each product of distinct variables; zeros dropped."""
        total: dict[frozenset[int], int] = {}
        for monomial in self.monomials:
            terms: dict[frozenset[int], int] = {frozenset(): monomial.sign}
            for literal in monomial.literals:
                expanded: dict[frozenset[int], int] = {}
                for subset, coefficient in terms.items():
                    grown = subset | {literal.var}
                    if literal.positive:
                        expanded[grown] = expanded.get(grown, 0) + coefficient
                    else:
                        # (1 - y) splits into +c on subset and -c on subset + {y}
                        expanded[subset] = expanded.get(subset, 0) + coefficient
                        expanded[grown] = expanded.get(grown, 0) - coefficient
                terms = expanded
            for subset, coefficient in terms.items():
                total[subset] = total.get(subset, 0) + coefficient
        return {subset: c for subset, c in sorted(total.items(), key=_subset_key) if c != 0}

    @property
    def degree(self) -> int:
        """Degree of the normal form; 0 for the zero polynomial."""
        return max((len(subset) for subset in self.normal_form), default=0)

    @property
    def factored_degree(self) -> int:
        return max((len(m.literals) for m in self.monomials), default=0)

    def evaluate(self, point: Sequence[int]) -> int:
        _check_point(point, self.variables)
        return sum(monomial.value(point) for monomial in self.monomials)

    def evaluate_normal(self, point: Sequence[int]) -> int:
        _check_point(point, self.variables)
        return sum(c for subset, c in self.normal_form.items() if all(point[i] for i in subset))

    def is_zero(self) -> bool:
        return not self.normal_form

    def terms(self) -> list[tuple[list[int], int]]:
        """Normal form as ([variables], coefficient) pairs in canonical order."""
        return [(sorted(subset), c) for subset, c in self.normal_form.items()]

    def to_terms(self) -> list[PolyTerm]:
        return [PolyTerm(variables=variables, coefficient=c) for variables, c in self.terms()]

    def to_factored(self) -> list[FactoredTerm]:
        return [
            FactoredTerm(
                sign=m.sign,
                positive=[lit.var for lit in m.literals if lit.positive],
                negative=[lit.var for lit in m.literals if not lit.positive],
            )
            for m in self.monomials
        ]

    @classmethod
    def from_terms(cls, variables: int, terms: Iterable[PolyTerm]) -> MultilinearPoly:
        """Rebuild a polynomial from its normal-form monomial list."""
        monomials: list[SignedMonomial] = []
        for term in terms:
            if any(not 0 <= v < variables for v in term.variables):
                raise DomainError(f"term {term.variables} uses a variable outside y_0..y_{variables - 1}")
            literals = tuple(Literal(v) for v in sorted(set(term.variables)))
            sign = 1 if term.coefficient > 0 else -1
            monomials.extend(SignedMonomial(sign, literals) for _ in range(abs(term.coefficient)))
        return cls(variables, tuple(monomials))


def _subset_key(item: tuple[frozenset[int], int]) -> tuple[int, list[int]]:
    return len(item[0]), sorted(item[0])


def _check_point(point: Sequence[int], variables: int) -> None:
    if len(point) != variables:
        raise DomainError(f"assignment has {len(point)} values, polynomial has {variables} variables")
    if any(v not in (0, 1) for v in point):
        raise DomainError("assignments are 0/1 vectors")


def assignment(universe: Sequence[str], oracle: Iterable[str]) -> tuple[int, ...]:
    """Characteristic vector of ``oracle`` over the universe."""
    members = set(oracle)
    return tuple(int(word in members) for word in universe)


def encode(machine: OracleMachine, x: str) -> MultilinearPoly:
    position = {word: i for i, word in enumerate(machine.universe)}
    monomials = []
    for path, sign in valid_paths(machine, x):
        outside = (path.qplus | path.qminus) - position.keys()
        if outside:
            raise EncodingError(f"{machine.name} queries {sorted(outside)} outside its universe")
        literals = [Literal(position[w], True) for w in path.qplus]
        literals += [Literal(position[w], False) for w in path.qminus]
        monomials.append(SignedMonomial(sign, tuple(sorted(literals, key=lambda lit: lit.var))))
    return MultilinearPoly(len(machine.universe), tuple(monomials))


def eval_poly(p: MultilinearPoly, point: Sequence[int]) -> int:
    return p.evaluate(point)


class PolyTerm(BaseModel):
    """One normal-form monomial: coefficient times the product of ``variables``."""

    variables: list[int]
    coefficient: int


class FactoredTerm(BaseModel):
    """One path monomial: sign times y_i for ``positive`` and (1 - y_i) for ``negative``."""

    sign: int
    positive: list[int] = Field(default_factory=list)
    negative: list[int] = Field(default_factory=list)


class EncodingMismatch(BaseModel):
    oracle: list[str]
    poly_value: int
    normal_value: int
    gap: int


class EncodingReport(BaseModel):
    machine: str
    input: str
    variables: int
    paths: int
    degree: int
    time_bound: int
    degree_ok: bool
    universe: list[str] = Field(default_factory=list)
    terms: list[PolyTerm] = Field(default_factory=list)
    factored: list[FactoredTerm] | None = None
    oracles_checked: int = 0
    mismatches: list[EncodingMismatch] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.degree_ok and not self.mismatches


def verify_encoding(machine: OracleMachine, x: str, universe_bound: int = 14) -> EncodingReport:
    """Compare the encoding with the oracle-resolved gap on all 2^m oracles."""
    m = len(machine.universe)
    if m > universe_bound:
        raise ResourceError(f"universe of {m} strings exceeds the brute-force bound {universe_bound}")
    poly = encode(machine, x)
    bound = machine.time_bound(len(x))
    report = EncodingReport(
        machine=machine.name,
        input=x,
        variables=m,
        paths=len(poly.monomials),
        degree=poly.degree,
        time_bound=bound,
        degree_ok=poly.degree <= bound,
        universe=list(machine.universe),
        terms=poly.to_terms(),
        factored=poly.to_factored() if len(poly.monomials) <= MAX_FACTORED else None,
    )
    for point in product((0, 1), repeat=m):
        oracle = frozenset(w for w, bit in zip(machine.universe, point) if bit)
        value = poly.evaluate(point)
        normal = poly.evaluate_normal(point)
        gap = oracle_gap(machine, x, oracle)
        report.oracles_checked += 1
        if not value == normal == gap:
            report.mismatches.append(
                EncodingMismatch(oracle=sorted(oracle), poly_value=value, normal_value=normal, gap=gap)
            )
    logger.debug(f"Encoding of {machine.name} on {x!r}: degree {poly.degree}, {len(report.mismatches)} mismatch(es)")
    return report


def restrict(p: MultilinearPoly, fixed: Mapping[int, int]) -> MultilinearPoly:
    """Substitute 0/1 values for some variables, keeping the variable count."""
    if any(v not in (0, 1) for v in fixed.values()):
        raise DomainError("restrictions fix variables to 0 or 1")
    monomials = []
    for monomial in p.monomials:
        kept = []
        alive = True
        for literal in monomial.literals:
            if literal.var in fixed:
                if (fixed[literal.var] == 1) != literal.positive:
                    alive = False
                    break
            else:
                kept.append(literal)
        if alive:
            monomials.append(SignedMonomial(monomial.sign, tuple(kept)))
    return MultilinearPoly(p.variables, tuple(monomials))


def elementary_symmetric(variables: int, k: int) -> MultilinearPoly:
    return MultilinearPoly(
        variables,
        tuple(SignedMonomial(1, tuple(Literal(i) for i in subset)) for subset in combinations(range(variables), k)),
    )


def symmetric_family(variables: int, coefficients: Sequence[int]) -> MultilinearPoly:
    """sum_k coefficients[k] * e_k, constant on every weight slice."""
    monomials: list[SignedMonomial] = []
    for k, c in enumerate(coefficients):
        sign = 1 if c > 0 else -1
        for monomial in elementary_symmetric(variables, k).monomials:
            monomials.extend([SignedMonomial(sign, monomial.literals)] * abs(c))
    return MultilinearPoly(variables, tuple(monomials))


@dataclass(frozen=True)
class Divides:
    val: int


@dataclass(frozen=True)
class HypothesisFailed:
    reason: str


@dataclass(frozen=True)
class NotDivisible:
    """All hypotheses hold yet p does not divide val."""

    val: int


PrimeDivisorResult = Union[Divides, HypothesisFailed, NotDivisible]


def check_prime_divisor(
    s: MultilinearPoly, p: int, n: int | None = None, slice_budget: int = 1_000_000
) -> PrimeDivisorResult:
    """Check the hypotheses on s and p and, when they hold, that p divides val.

    The hypotheses: p is prime, deg(s) < p, p <= N/2, s(0, ..., 0) = 0 and s
    takes one value val on every 0/1 point of weight p.
    """
    n = s.variables if n is None else n
    if n != s.variables:
        raise DomainError(f"s has {s.variables} variables, expected {n}")
    if comb(n, p) > slice_budget:
        raise BudgetExceededError(f"C({n}, {p}) = {comb(n, p)} slice points exceed the budget {slice_budget}")
    if not is_prime(p):
        return HypothesisFailed(f"{p} is not prime")
    if s.degree >= p:
        return HypothesisFailed(f"degree {s.degree} is not below p = {p}")
    if 2 * p > n:
        return HypothesisFailed(f"p = {p} exceeds N/2 = {n / 2}")
    if s.evaluate((0,) * n) != 0:
        return HypothesisFailed("origin: s(0, ..., 0) != 0")
    values = set()
    for support in combinations(range(n), p):
        point = [0] * n
        for i in support:
            point[i] = 1
        values.add(s.evaluate(point))
        if len(values) > 1:
            return HypothesisFailed(f"s is not constant on the weight-{p} slice")
    (val,) = values
    return Divides(val) if val % p == 0 else NotDivisible(val)
