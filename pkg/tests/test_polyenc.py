"""Tests for oracle machines and their multilinear encodings."""

import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaplab.dsl import load_document
from gaplab.errors import BudgetExceededError, DomainError, EncodingError, ModelViolationError, ResourceError
from gaplab.fixtures import random_oracle_machine, symmetric_instance, violating_instance
from gaplab.natpoly import NatPoly
from gaplab.polyenc import (
    ComputationPath,
    Divides,
    HypothesisFailed,
    Literal,
    MultilinearPoly,
    OracleMachine,
    PolyTerm,
    Query,
    SignedMonomial,
    assignment,
    check_prime_divisor,
    elementary_symmetric,
    encode,
    eval_poly,
    oracle_acc,
    oracle_gap,
    restrict,
    symmetric_family,
    valid_paths,
    verify_encoding,
)
from gaplab.trees import ACCEPT, BALANCED, REJECT

literals = st.lists(st.tuples(st.integers(min_value=0, max_value=3), st.booleans()), max_size=4, unique_by=lambda t: t[0])
signed_monomials = st.lists(st.tuples(st.sampled_from([1, -1]), literals), max_size=8)


def _poly(raw: list[tuple[int, list[tuple[int, bool]]]]) -> MultilinearPoly:
    return MultilinearPoly(4, tuple(SignedMonomial(s, tuple(Literal(v, p) for v, p in lits)) for s, lits in raw))


@pytest.fixture
def machines(oracle_document: str) -> dict[str, OracleMachine]:
    return load_document(oracle_document).oracle_machines


class TestOracleRuns:
    """Tests for valid paths and oracle-resolved counts."""

    def test_valid_paths(self, machines: dict[str, OracleMachine]) -> None:
        """Test the membership machine has one path per answer."""
        paths = valid_paths(machines["member"], "")
        assert sorted((sorted(path.qplus), sign) for path, sign in paths) == [([], -1), (["0"], 1)]

    def test_counts(self, machines: dict[str, OracleMachine]) -> None:
        """Test acc and gap under several oracles."""
        both = machines["both"]
        assert oracle_gap(both, "", {"0", "1"}) == 2
        assert oracle_gap(both, "", set()) == -2
        assert oracle_acc(both, "", {"0"}) == 1

    def test_requery(self) -> None:
        """Test a path asking the same string twice."""
        machine = OracleMachine("twice", NatPoly.constant(2), ("0",), default=Query("0", Query("0", ACCEPT, REJECT), REJECT))
        with pytest.raises(ModelViolationError):
            valid_paths(machine, "")

    def test_conflicting_answers(self) -> None:
        """Test a path cannot answer a string both ways."""
        with pytest.raises(ModelViolationError):
            ComputationPath("", frozenset({"0"}), frozenset({"0"}))


class TestEncode:
    """Tests for encode and the normal form."""

    def test_member_machine(self, machines: dict[str, OracleMachine]) -> None:
        """Test the membership machine encodes as 2y - 1."""
        poly = encode(machines["member"], "")
        assert poly.terms() == [([], -1), ([0], 2)]
        assert poly.degree == 1

    def test_two_queries(self, machines: dict[str, OracleMachine]) -> None:
        """Test the two-query machine encodes as 2y0 + 2y0y1 - 2."""
        poly = encode(machines["both"], "")
        assert poly.terms() == [([], -2), ([0], 2), ([0, 1], 2)]
        for oracle in [set(), {"0"}, {"1"}, {"0", "1"}]:
            point = assignment(machines["both"].universe, oracle)
            assert eval_poly(poly, point) == oracle_gap(machines["both"], "", oracle)

    def test_negative_literal(self) -> None:
        """Test (1 - y0) expands to 1 - y0 and is 1 at y0 = 0."""
        poly = MultilinearPoly(1, (SignedMonomial(1, (Literal(0, False),)),))
        assert poly.terms() == [([], 1), ([0], -1)]
        assert poly.evaluate_normal((0,)) == 1
        assert poly.evaluate_normal((1,)) == 0

    @given(signed_monomials)
    def test_normal_form_agrees(self, raw: list[tuple[int, list[tuple[int, bool]]]]) -> None:
        """Test the normal form and the path monomials agree on every 0/1 point."""
        poly = _poly(raw)
        for point in product((0, 1), repeat=4):
            assert poly.evaluate_normal(point) == poly.evaluate(point)
        assert poly.degree <= poly.factored_degree

    @given(signed_monomials)
    def test_monomial_list(self, raw: list[tuple[int, list[tuple[int, bool]]]]) -> None:
        """Test a polynomial rebuilt from its monomial list has the same normal form."""
        poly = _poly(raw)
        rebuilt = MultilinearPoly.from_terms(4, poly.to_terms())
        assert rebuilt.normal_form == poly.normal_form

    def test_monomial_list_json(self, machines: dict[str, OracleMachine]) -> None:
        """Test normal and factored forms serialize as JSON monomial lists."""
        poly = encode(machines["member"], "")
        assert [t.model_dump() for t in poly.to_terms()] == [
            {"variables": [], "coefficient": -1},
            {"variables": [0], "coefficient": 2},
        ]
        factored = sorted((t.sign, t.positive, t.negative) for t in poly.to_factored())
        assert factored == [(-1, [], [0]), (1, [0], [])]

    def test_terms_outside_variables(self) -> None:
        """Test monomial lists naming unknown variables."""
        with pytest.raises(DomainError):
            MultilinearPoly.from_terms(1, [PolyTerm(variables=[1], coefficient=1)])

    def test_cancellation(self) -> None:
        """Test a balanced machine encodes as the zero polynomial of degree 0."""
        machine = OracleMachine("balanced", NatPoly.constant(1), ("0",), default=Query("0", BALANCED, BALANCED))
        poly = encode(machine, "")
        assert poly.is_zero()
        assert poly.degree == 0
        assert poly.factored_degree == 1

    def test_outside_universe(self) -> None:
        """Test queries outside the universe."""
        machine = OracleMachine("stray", NatPoly.constant(1), ("0",), default=Query("1", ACCEPT, REJECT))
        with pytest.raises(EncodingError):
            encode(machine, "")

    def test_bad_points(self) -> None:
        """Test assignments must be 0/1 vectors of the right length."""
        poly = elementary_symmetric(2, 1)
        with pytest.raises(DomainError):
            poly.evaluate((1,))
        with pytest.raises(DomainError):
            poly.evaluate((2, 0))


class TestVerifyEncoding:
    """Tests for verify_encoding."""

    def test_report_monomials(self, machines: dict[str, OracleMachine]) -> None:
        """Test reports carry the normal form and the path monomials of the encoding."""
        report = verify_encoding(machines["member"], "")
        assert report.ok
        assert report.universe == ["0"]
        assert report.terms == [PolyTerm(variables=[], coefficient=-1), PolyTerm(variables=[0], coefficient=2)]
        assert report.factored is not None
        assert len(report.factored) == report.paths == 2
        dumped = report.model_dump(mode="json")
        assert dumped["terms"] == [{"variables": [], "coefficient": -1}, {"variables": [0], "coefficient": 2}]

    def test_report_rebuilds(self, machines: dict[str, OracleMachine]) -> None:
        """Test the reported monomial list rebuilds the encoding."""
        report = verify_encoding(machines["both"], "")
        rebuilt = MultilinearPoly.from_terms(report.variables, report.terms)
        assert rebuilt.normal_form == encode(machines["both"], "").normal_form

    def test_random_machines(self, rng: random.Random) -> None:
        """Test 100 random machines agree with the oracle-resolved gap everywhere."""
        for k in range(100):
            machine = random_oracle_machine(rng, max_universe=8, name=f"oracle-{k}")
            report = verify_encoding(machine, "")
            assert report.ok, machine.name
            assert report.oracles_checked == 2 ** len(machine.universe)

    def test_universe_bound(self, machines: dict[str, OracleMachine]) -> None:
        """Test universes beyond the bound."""
        with pytest.raises(ResourceError):
            verify_encoding(machines["both"], "", universe_bound=1)


class TestRestrict:
    """Tests for restrict."""

    def test_fix_member(self, machines: dict[str, OracleMachine]) -> None:
        """Test fixing y to 1 and to 0."""
        poly = encode(machines["member"], "")
        assert restrict(poly, {0: 1}).evaluate((0,)) == 1
        assert restrict(poly, {0: 0}).evaluate((1,)) == -1

    def test_partial(self, machines: dict[str, OracleMachine]) -> None:
        """Test fixing y0 = 1 in 2y0 + 2y0y1 - 2 leaves 2y1."""
        poly = restrict(encode(machines["both"], ""), {0: 1})
        assert poly.terms() == [([1], 2)]

    def test_bad_value(self) -> None:
        """Test only 0/1 substitutions."""
        with pytest.raises(DomainError):
            restrict(elementary_symmetric(2, 1), {0: 2})


class TestPrimeDivisor:
    """Tests for check_prime_divisor."""

    def test_linear(self) -> None:
        """Test e_1 on 4 variables with p = 2."""
        assert check_prime_divisor(elementary_symmetric(4, 1), 2) == Divides(2)

    def test_quadratic(self) -> None:
        """Test 2e_1 - e_2 on 6 variables with p = 3."""
        s = symmetric_family(6, [0, 2, -1])
        assert check_prime_divisor(s, 3) == Divides(3)

    @pytest.mark.parametrize(
        "s,p,reason",
        [
            (elementary_symmetric(4, 1), 4, "not prime"),
            (elementary_symmetric(4, 2), 2, "degree"),
            (elementary_symmetric(4, 1), 3, "N/2"),
            (symmetric_family(4, [1]), 2, "origin"),
            (MultilinearPoly(4, (SignedMonomial(1, (Literal(0),)),)), 2, "slice"),
        ],
    )
    def test_hypotheses(self, s: MultilinearPoly, p: int, reason: str) -> None:
        """Test each failed hypothesis is reported."""
        result = check_prime_divisor(s, p)
        assert isinstance(result, HypothesisFailed)
        assert reason in result.reason

    def test_budget(self) -> None:
        """Test slices beyond the budget."""
        with pytest.raises(BudgetExceededError):
            check_prime_divisor(elementary_symmetric(10, 1), 5, slice_budget=100)

    def test_variable_count(self) -> None:
        """Test N must match the polynomial."""
        with pytest.raises(DomainError):
            check_prime_divisor(elementary_symmetric(4, 1), 2, n=5)

    def test_symmetric_instances(self, rng: random.Random) -> None:
        """Test seeded instances meeting every hypothesis divide."""
        for _ in range(100):
            instance = symmetric_instance(rng)
            result = check_prime_divisor(instance.poly, instance.p, instance.n)
            assert isinstance(result, Divides)
            assert result.val % instance.p == 0

    def test_violating_instances(self, rng: random.Random) -> None:
        """Test seeded instances breaking a hypothesis are caught."""
        for _ in range(100):
            instance = violating_instance(rng)
            assert isinstance(check_prime_divisor(instance.poly, instance.p, instance.n), HypothesisFailed)
