"""Tests for output formatters."""

from gaplab.diagonalize import ClaimReport, PrimeCheck, StagePolynomialReport, StageReport
from gaplab.formatters import (
    MAX_LISTED,
    format_claim_report,
    format_collapse_check,
    format_collapse_run,
    format_encoding_report,
    format_membership_report,
    format_pcount,
    format_polynomial,
    format_reconstruction_report,
    format_stage_polynomial,
    format_stage_report,
)
from gaplab.membership import GapClass, MembershipReport, Violation, verify_collapse
from gaplab.polyenc import EncodingMismatch, EncodingReport, PolyTerm
from gaplab.programs import Base, machine_from_gaps
from gaplab.reconstruct import OrderSummary, PcountViolation, ReconstructionReport
from gaplab.reports import CollapseRun
from gaplab.strings import Domain
from gaplab.targets import TargetSpec


class TestFormatMembershipReport:
    """Tests for format_membership_report function."""

    def test_clean_report(self) -> None:
        """Test formatting a report without violations."""
        report = MembershipReport(gap_class=GapClass.LWPP, checked=7, accepted=2)
        result = format_membership_report(report)
        assert "### LWPP" in result
        assert "Inputs: 7" in result
        assert "**OK**" in result

    def test_violations_truncated(self) -> None:
        """Test long violation lists are cut off."""
        violations = [Violation(input="0" * i, gap=4, expected=[3], verdict="miss") for i in range(MAX_LISTED + 3)]
        report = MembershipReport(gap_class=GapClass.WPP, checked=20, accepted=20, violations=violations)
        result = format_membership_report(report, "Source")
        assert "### Source" in result
        assert "**VIOLATIONS FOUND**" in result
        assert "`ε`: gap 4" in result
        assert "(3 more)" in result


class TestFormatCollapse:
    """Tests for collapse formatters."""

    def test_check(self) -> None:
        """Test a passing source/compiled pair."""
        domain = Domain("01", 2)
        g = Base(machine_from_gaps("g", {"01": 3, "10": 5}))
        check = verify_collapse(g, TargetSpec.constant("length", [3, 5]), domain, "two-target")
        result = format_collapse_check(check)
        assert "## Collapse `two-target` **OK**" in result
        assert "Source (rLWPP)" in result
        assert "Compiled (LWPP)" in result

    def test_promise_breaks(self) -> None:
        """Test promise breaks are listed."""
        domain = Domain("01", 2)
        g = Base(machine_from_gaps("g", {"11": 4}))
        check = verify_collapse(g, TargetSpec.constant("length", [3, 5]), domain)
        result = format_collapse_run(CollapseRun(checks=[check]))
        assert "**Promise breaks:** 1" in result
        assert "`11`" in result


class TestFormatReconstruction:
    """Tests for reconstruction formatters."""

    def test_sweep(self) -> None:
        """Test the order table and violations."""
        report = ReconstructionReport(
            n_min=2,
            n_max=3,
            q="1",
            graphs_checked=6,
            max_pcount=2,
            histogram={1: 4, 2: 2},
            orders=[OrderSummary(n=2, graphs=2, max_pcount=2), OrderSummary(n=3, graphs=4, max_pcount=1)],
            violations=[PcountViolation(n=2, graph="A?", pcount=2, bound=1)],
        )
        result = format_reconstruction_report(report)
        assert "n = 2..3" in result
        assert "| 3 | 4 | 1 |" in result
        assert "1: 4, 2: 2" in result
        assert "`A?` (n = 2): pcount 2 > 1" in result

    def test_pcount(self) -> None:
        """Test a single deck summary."""
        result = format_pcount("A_,A_,A_", 1, "proceed, pcount 1")
        assert "**pcount:** 1" in result
        assert "**Legitimate:** yes" in result
        assert "**Restricted class:** proceed" in result
        assert "**Legitimate:** no" in format_pcount("A_,A_", 0)


class TestFormatEncoding:
    """Tests for format_encoding_report."""

    def test_mismatch(self) -> None:
        """Test mismatches are listed."""
        report = EncodingReport(
            machine="m",
            input="",
            variables=1,
            paths=2,
            degree=1,
            time_bound=1,
            degree_ok=True,
            oracles_checked=2,
            mismatches=[EncodingMismatch(oracle=["0"], poly_value=1, normal_value=1, gap=3)],
        )
        result = format_encoding_report(report)
        assert "`m` on `ε`" in result
        assert "**VIOLATIONS FOUND**" in result
        assert "gap 3" in result
        assert "s = 0" in result

    def test_polynomial_line(self) -> None:
        """Test the normal form is printed with the report."""
        report = EncodingReport(
            machine="member",
            input="",
            variables=1,
            paths=2,
            degree=1,
            time_bound=1,
            degree_ok=True,
            terms=[PolyTerm(variables=[], coefficient=-1), PolyTerm(variables=[0], coefficient=2)],
        )
        assert "s = -1 + 2*y0" in format_encoding_report(report)

    def test_format_polynomial(self) -> None:
        """Test signs, unit coefficients and the cut-off tail."""
        assert format_polynomial([]) == "0"
        terms = [PolyTerm(variables=[0, 1], coefficient=1), PolyTerm(variables=[2], coefficient=-1)]
        assert format_polynomial(terms) == "y0*y1 - y2"
        assert format_polynomial([PolyTerm(variables=[], coefficient=3)]) == "3"
        many = [PolyTerm(variables=[i], coefficient=1) for i in range(MAX_LISTED + 2)]
        assert format_polynomial(many).endswith("+ ... (2 more)")


class TestFormatStages:
    """Tests for stage formatters."""

    def test_found(self) -> None:
        """Test a stage that found C."""
        report = StageReport(
            kind="gap",
            n=3,
            val=1,
            reserved=[],
            candidates=8,
            conditions={"a": True, "b": False},
            found=["000", "001"],
            value=2,
            confirmed=True,
        )
        result = format_stage_report(report)
        assert "gap stage at n = 3" in result
        assert "(b) fails" in result
        assert "C: {000, 001} (size 2)" in result

    def test_skipped(self) -> None:
        """Test a skipped stage."""
        report = StageReport(kind="acc", n=2, val=0, reserved=[], candidates=4, conditions={}, skipped="val = 0")
        assert "Skipped: val = 0" in format_stage_report(report)

    def test_claim(self) -> None:
        """Test the path-set summary."""
        report = ClaimReport(
            n=2,
            val=1,
            base_accepting=0,
            set_sizes={"00": 1},
            sizes_match_val=True,
            disjoint=True,
            conflicting={"00": []},
            conflicting_bound=3,
            bound_ok=True,
            pair=["00", "01"],
            pair_acc=2,
            pair_lower_bound=2,
            pair_ok=True,
        )
        result = format_claim_report(report)
        assert "Disjoint: True" in result
        assert "Largest conflicting set: 0 (bound 3)" in result
        assert "acc 2 >= 2" in result

    def test_polynomial(self) -> None:
        """Test prime outcomes and the empty range."""
        report = StagePolynomialReport(
            variables=["00", "01", "10", "11"],
            degree=1,
            primes=[2],
            checks=[PrimeCheck(prime=2, outcome="divides", val=2)],
        )
        assert "- p = 2: divides (val 2)" in format_stage_polynomial(report)
        empty = StagePolynomialReport(variables=["0"], degree=1, primes=[])
        assert "No prime" in format_stage_polynomial(empty)
