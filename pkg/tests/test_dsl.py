"""Tests for the s-expression and JSON document forms."""

import json

import pytest

from gaplab.diagonalize import Probe, Value
from gaplab.dsl import (
    document_to_json,
    format_document,
    format_fp,
    format_machines,
    load_document,
    parse_document,
    parse_fp,
    parse_program,
    parse_spec,
    read,
)
from gaplab.errors import ParseError
from gaplab.fp import IndexProduct, Length
from gaplab.natpoly import ExpBound, NatPoly
from gaplab.polyenc import Query, oracle_gap
from gaplab.programs import PolyProd, eval_gap
from gaplab.strings import Domain
from gaplab.targets import TargetSpec, TwoSidedTargetSpec

DOMAIN = Domain("01", 2)


class TestReader:
    """Tests for the tokenizer and reader."""

    def test_nested_forms(self) -> None:
        """Test forms, comments and quoted strings."""
        nodes = read('(a (b "x y") 3) ; trailing comment\n(c)')
        assert len(nodes) == 2

    @pytest.mark.parametrize("text", ["(a (b)", "a)", '(a "open)'])
    def test_unbalanced(self, text: str) -> None:
        """Test unbalanced input raises ParseError with a position."""
        with pytest.raises(ParseError) as exc_info:
            read(text)
        assert exc_info.value.position is not None

    def test_bad_escape_position(self) -> None:
        """Test an invalid escape reports the offset of the literal."""
        text = '(a "\\q")'
        with pytest.raises(ParseError) as exc_info:
            read(text)
        assert exc_info.value.position is not None
        assert exc_info.value.position >= text.index('"')


class TestDocuments:
    """Tests for building documents."""

    def test_collapse_document(self, collapse_document: str) -> None:
        """Test machines, programs and specs of a document."""
        document = parse_document(collapse_document)
        assert set(document.machines) == {"m"}
        (program,) = document.programs()
        (spec,) = document.specs()
        assert isinstance(spec, TargetSpec)
        assert spec.targets("01") == [3, 5]
        assert [eval_gap(program, x, DOMAIN) for x in ["", "01", "10", "11"]] == [0, 3, 5, 0]

    def test_program_forms(self) -> None:
        """Test every program combinator parses."""
        text = """
        (machine m (time "1") (default (choice accept accept)))
        (add (neg (base m)) (mul (fp 3) (sub (fp len) (compose (base m) 0))))
        (prod (fp index) "3" from1)
        """
        programs = load_document(text).programs()
        assert eval_gap(programs[0], "01", DOMAIN) == -2 + 3 * (2 - 2)
        assert isinstance(programs[1], PolyProd)
        assert eval_gap(programs[1], "1", DOMAIN) == 6

    def test_fp_forms(self) -> None:
        """Test FP expressions."""
        assert parse_fp("(+ len 2)").evaluate("011", "01") == 5
        assert parse_fp("(* len (- 2))").evaluate("01", "01") == -4
        assert parse_fp('(table (("0" 7)) 1)').evaluate("0", "01") == 7
        assert isinstance(parse_fp('(iprod len "n" 1)'), IndexProduct)
        assert isinstance(parse_fp("len"), Length)

    def test_specs(self) -> None:
        """Test plain, exponential and two-sided specs."""
        spec = parse_spec('(spec length (targets-by-length ((1 2 4)) (default 1)) "n^2+2")')
        assert isinstance(spec, TargetSpec)
        assert spec.multiplicity == NatPoly.standard(2)
        assert spec.targets("0") == [2, 4, 2]
        exp = parse_spec('(spec length enumerator (exp "n"))')
        assert isinstance(exp, TargetSpec) and isinstance(exp.multiplicity, ExpBound)
        two = parse_spec('(two-sided (spec length 3 "1") (spec length (targets () (default 0 1)) "2"))')
        assert isinstance(two, TwoSidedTargetSpec)

    def test_json_form(self) -> None:
        """Test the JSON array form builds the same document."""
        text = json.dumps(
            [
                ["machine", "m", ["time", "2"], ["default", ["gap", 0]], ["on", "1", ["gap", -2]]],
                ["base", "m"],
                ["spec", "input", 2, "1"],
            ]
        )
        document = load_document(text)
        assert eval_gap(document.programs()[0], "1", DOMAIN) == -2

    def test_write_and_read_back(self, collapse_document: str) -> None:
        """Test a formatted document reads back with the same gaps."""
        document = parse_document(collapse_document)
        items = document.items
        again = parse_document(format_document(items))
        json_again = load_document(document_to_json(items))
        for x in DOMAIN.strings():
            expected = eval_gap(document.programs()[0], x, DOMAIN)
            assert eval_gap(again.programs()[0], x, DOMAIN) == expected
            assert eval_gap(json_again.programs()[0], x, DOMAIN) == expected
        assert format_fp(parse_fp("(at rank (pair first index))")) == "(at rank (pair first index))"

    @pytest.mark.parametrize(
        "text,message",
        [
            ("(base nowhere)", "undefined machine"),
            ("(frobnicate 1)", "unknown top-level form"),
            ('(machine m (default accept))', "after its name"),
            ('(machine m (time "n-") (default accept))', "cannot parse polynomial"),
            ('(spec sideways 1 "1")', "spec mode"),
            ('(prod (fp 1) "2" from7)', "from0 or from1"),
            ('(two-sided (spec input 1 "1") (spec length 2 "1"))', "length-indexed"),
            ("[1, 2", "invalid JSON"),
            ('(machine m (time "1") (on "\\q" accept))', "bad string literal"),
            ('(machine m (time "1") (on 01 accept))', "quoted string"),
            ('(oracle-machine o (time "1") (universe 0) (default accept))', "quoted string"),
            ('(function-machine f (time "1") (default (probe 1 0 1)))', "quoted string"),
        ],
    )
    def test_errors(self, text: str, message: str) -> None:
        """Test malformed documents raise ParseError."""
        with pytest.raises(ParseError, match=message):
            load_document(text)

    def test_parse_program_needs_program(self) -> None:
        """Test parse_program on a spec-only document."""
        with pytest.raises(ParseError, match="no program"):
            parse_program('(spec length 1 "1")')


class TestOracleForms:
    """Tests for oracle-machine and function-machine forms."""

    def test_oracle_machine(self, oracle_document: str) -> None:
        """Test query trees evaluate under an oracle."""
        machines = load_document(oracle_document).oracle_machines
        member = machines["member"]
        assert member.universe == ("0",)
        assert isinstance(member.default, Query)
        assert oracle_gap(member, "", {"0"}) == 1
        assert oracle_gap(member, "", set()) == -1
        assert oracle_gap(machines["both"], "", {"0", "1"}) == 2

    def test_function_machine(self) -> None:
        """Test integer leaves and probes."""
        text = '(function-machine f (time "2") (default (probe "0" 5 (probe "1" 2 -1))) (on "1" 9))'
        function = load_document(text).function_machines["f"]
        assert isinstance(function.default, Probe)
        assert function.trees["1"] == Value(9)
        assert function.run("", frozenset()) == (-1, ("0", "1"))
        assert function.run("", frozenset({"0"})) == (5, ("0",))

    def test_duplicate_universe(self) -> None:
        """Test a universe must not repeat a string."""
        with pytest.raises(ParseError, match="twice"):
            load_document('(oracle-machine o (time "1") (universe "0" "0") (default accept))')

    def test_bad_function_leaf(self) -> None:
        """Test function trees need integer leaves."""
        with pytest.raises(ParseError, match="expected an integer"):
            load_document('(function-machine f (time "1") (default accept))')

    @pytest.mark.parametrize("fixture", ["oracle_document", "stage_document"])
    def test_machines_read_back(self, fixture: str, request: pytest.FixtureRequest) -> None:
        """Test formatted oracle and function machines read back unchanged."""
        document = load_document(request.getfixturevalue(fixture))
        again = load_document(format_machines(document))
        assert again.oracle_machines.keys() == document.oracle_machines.keys()
        assert again.function_machines.keys() == document.function_machines.keys()
        for name, machine in document.oracle_machines.items():
            other = again.oracle_machines[name]
            assert other.universe == machine.universe
            assert other.time_bound == machine.time_bound
            assert other.default == machine.default
            assert dict(other.trees) == dict(machine.trees)
        for name, function in document.function_machines.items():
            other_function = again.function_machines[name]
            assert other_function.time_bound == function.time_bound
            assert other_function.default == function.default
            assert dict(other_function.trees) == dict(function.trees)

    def test_machines_with_overrides(self) -> None:
        """Test per-input trees and negative values survive formatting."""
        text = (
            '(oracle-machine o (time "n+1") (universe "0" "1") (default reject) (on "1" (query "1" accept reject)))\n'
            '(function-machine f (time "2") (default (probe "0" 5 (probe "1" 2 -1))) (on "1" 9))'
        )
        document = load_document(text)
        again = load_document(format_machines(document))
        assert dict(again.oracle_machines["o"].trees) == dict(document.oracle_machines["o"].trees)
        assert again.oracle_machines["o"].time_bound == document.oracle_machines["o"].time_bound
        assert again.function_machines["f"].default == document.function_machines["f"].default
        assert again.function_machines["f"].run("", frozenset()) == (-1, ("0", "1"))
