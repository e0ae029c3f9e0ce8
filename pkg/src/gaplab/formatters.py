"""Markdown formatters for GapLab reports.

These formatters turn report models into short human-readable summaries,
printed by the command line and returned by the MCP tools.
"""

from __future__ import annotations

from .diagonalize import ClaimReport, StagePolynomialReport, StageReport
from .membership import CollapseCheck, MembershipReport
from .polyenc import EncodingReport, PolyTerm
from .reconstruct import DeckWitnessReport, ReconstructionReport
from .reports import CollapseRun, DiagRun, EncodeRun, ReconstructRun

# Maximum number of individual violations listed per report
MAX_LISTED = 10


def _verdict(ok: bool) -> str:
    return "**OK**" if ok else "**VIOLATIONS FOUND**"


def _listing(items: list[str]) -> list[str]:
    lines = [f"- {item}" for item in items[:MAX_LISTED]]
    if len(items) > MAX_LISTED:
        lines.append(f"- ... ({len(items) - MAX_LISTED} more)")
    return lines


def format_membership_report(report: MembershipReport, title: str | None = None) -> str:
    """Format a class-membership check as Markdown.

    Args:
        report: Result of verify_class_membership.
        title: Optional heading; defaults to the class name.

    Returns:
        Formatted Markdown string.
    """
    lines = [f"### {title or report.gap_class.value}"]
    lines.append(
        f"Inputs: {report.checked} | Accepted: {report.accepted} | "
        f"Violations: {len(report.violations)} | {_verdict(report.ok)}"
    )
    lines.extend(
        _listing(
            [
                f"`{v.input or 'ε'}`: gap {v.gap}, expected one of {v.expected} ({v.verdict})"
                for v in report.violations
            ]
        )
    )
    return "\n".join(lines)


def format_collapse_check(check: CollapseCheck) -> str:
    """Format a source/compiled witness pair as Markdown."""
    lines = [f"## Collapse `{check.label}` {_verdict(check.ok)}", ""]
    lines.append(format_membership_report(check.source, f"Source ({check.source.gap_class.value})"))
    if check.intermediate is not None:
        lines.append("")
        lines.append(format_membership_report(check.intermediate, "Intermediate (rLWPP)"))
    lines.append("")
    lines.append(format_membership_report(check.compiled, f"Compiled ({check.compiled.gap_class.value})"))
    if check.promise_breaks:
        lines.append("")
        lines.append(f"**Promise breaks:** {len(check.promise_breaks)}")
        lines.extend(_listing([f"`{x or 'ε'}`" for x in check.promise_breaks]))
    if check.zero_mismatches:
        lines.append("")
        lines.append("**Compiled gap is zero off the rejected inputs at:**")
        lines.extend(_listing([f"`{x or 'ε'}`" for x in check.zero_mismatches]))
    return "\n".join(lines)


def format_collapse_run(run: CollapseRun) -> str:
    if len(run.checks) == 1:
        return format_collapse_check(run.checks[0])
    failed = [check for check in run.checks if not check.ok]
    lines = ["# Collapse Fixtures\n"]
    lines.append(f"**Fixtures:** {len(run.checks)} | **Failed:** {len(failed)} | {_verdict(run.ok)}")
    for check in failed[:MAX_LISTED]:
        lines.append("")
        lines.append(format_collapse_check(check))
    return "\n".join(lines)


def format_reconstruction_report(report: ReconstructionReport) -> str:
    """Format a q-Reconstruction sweep as Markdown.

    Args:
        report: Result of q_reconstruction_report.

    Returns:
        Formatted Markdown string.
    """
    lines = [f"# Reconstruction Sweep (n = {report.n_min}..{report.n_max}, q(n) = {report.q})\n"]
    lines.append(
        f"**Graphs:** {report.graphs_checked} | **Max pcount:** {report.max_pcount} | {_verdict(report.ok)}"
    )
    lines.append("")
    lines.append("| n | graphs | max pcount |")
    lines.append("|---|--------|------------|")
    for order in report.orders:
        lines.append(f"| {order.n} | {order.graphs} | {order.max_pcount} |")
    if report.histogram:
        lines.append("")
        histogram = ", ".join(f"{count}: {graphs}" for count, graphs in report.histogram.items())
        lines.append(f"**pcount histogram:** {histogram}")
    if report.violations:
        lines.append("")
        lines.append("**Over the bound:**")
        lines.extend(
            _listing([f"`{v.graph}` (n = {v.n}): pcount {v.pcount} > {v.bound}" for v in report.violations])
        )
    if report.extra_decks:
        lines.append("")
        lines.append("**Supplied decks:**")
        lines.extend(f"- `{deck}`: pcount {count}" for deck, count in report.extra_decks.items())
    return "\n".join(lines)


def format_pcount(deck: str, count: int, restricted: str | None = None) -> str:
    lines = [f"# Deck `{deck}`\n", f"**pcount:** {count}", f"**Legitimate:** {'yes' if count else 'no'}"]
    if restricted is not None:
        lines.append(f"**Restricted class:** {restricted}")
    return "\n".join(lines)


def format_deck_witness_report(report: DeckWitnessReport) -> str:
    lines = [f"## Deck Witnesses {_verdict(report.ok)}"]
    lines.append(f"Decks: {report.checked} | Failures: {len(report.failures)}")
    lines.extend(
        _listing(
            [
                f"`{w.deck}`: pcount {w.pcount}, gap {w.gap}, hhat {w.hhat}, index in range {w.index_in_range}"
                for w in report.failures
            ]
        )
    )
    return "\n".join(lines)


def format_reconstruct_run(run: ReconstructRun) -> str:
    parts = [format_reconstruction_report(run.sweep)]
    if run.witnesses is not None:
        parts.append(format_deck_witness_report(run.witnesses))
    if run.restricted:
        parts.append(
            "\n".join(["## Restricted Class"] + [f"- `{deck}`: {verdict}" for deck, verdict in run.restricted.items()])
        )
    return "\n\n".join(parts)


def format_polynomial(terms: list[PolyTerm]) -> str:
    """Render a normal form as ``-1 + 2*y0*y1``, cut after MAX_LISTED terms."""
    if not terms:
        return "0"
    parts: list[str] = []
    for i, term in enumerate(terms[:MAX_LISTED]):
        c = term.coefficient
        monomial = "*".join(f"y{v}" for v in term.variables)
        magnitude = str(abs(c)) if not monomial else (monomial if abs(c) == 1 else f"{abs(c)}*{monomial}")
        if i == 0:
            parts.append(magnitude if c > 0 else f"-{magnitude}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {magnitude}")
    if len(terms) > MAX_LISTED:
        parts.append(f"+ ... ({len(terms) - MAX_LISTED} more)")
    return " ".join(parts)


def format_encoding_report(report: EncodingReport) -> str:
    """Format a polynomial-encoding check as Markdown."""
    lines = [f"## Encoding of `{report.machine}` on `{report.input or 'ε'}` {_verdict(report.ok)}"]
    lines.append(
        f"Variables: {report.variables} | Paths: {report.paths} | Degree: {report.degree} "
        f"(bound {report.time_bound}) | Oracles: {report.oracles_checked}"
    )
    lines.append(f"s = {format_polynomial(report.terms)}")
    lines.extend(
        _listing(
            [
                f"oracle {m.oracle}: poly {m.poly_value}, normal form {m.normal_value}, gap {m.gap}"
                for m in report.mismatches
            ]
        )
    )
    return "\n".join(lines)


def format_encode_run(run: EncodeRun) -> str:
    failed = [report for report in run.encodings if not report.ok]
    lines = ["# Polynomial Encodings\n"]
    lines.append(f"**Machines:** {len(run.encodings)} | **Failed:** {len(failed)} | {_verdict(run.ok)}")
    shown = run.encodings if len(run.encodings) <= MAX_LISTED else failed
    for report in shown[:MAX_LISTED]:
        lines.append("")
        lines.append(format_encoding_report(report))
    if run.divisor_checks:
        outcomes: dict[str, int] = {}
        for check in run.divisor_checks:
            key = check.outcome.split(":")[0]
            outcomes[key] = outcomes.get(key, 0) + 1
        lines.append("")
        lines.append(f"## Prime-Divisor Instances ({len(run.divisor_checks)})")
        lines.extend(f"- {outcome}: {count}" for outcome, count in sorted(outcomes.items()))
        lines.extend(
            _listing(
                [
                    f"N = {c.variables}, p = {c.prime} ({c.generated}): {c.outcome}"
                    for c in run.divisor_checks
                    if not c.ok
                ]
            )
        )
    return "\n".join(lines)


def format_stage_report(report: StageReport) -> str:
    lines = [f"## {report.kind} stage at n = {report.n}"]
    lines.append(f"val = {report.val} | reserved: {len(report.reserved)} | candidates: {report.candidates}")
    conditions = ", ".join(f"({key}) {'holds' if value else 'fails'}" for key, value in report.conditions.items())
    lines.append(f"Conditions: {conditions}")
    if report.skipped:
        lines.append(f"Skipped: {report.skipped}")
    elif report.found is None:
        lines.append(f"C: None after {report.examined} candidate set(s)")
    else:
        lines.append(
            f"C: {{{', '.join(report.found)}}} (size {len(report.found)}), value {report.value}, "
            f"confirmed {report.confirmed}"
        )
    return "\n".join(lines)


def format_claim_report(report: ClaimReport) -> str:
    lines = [f"## Path-set analysis at n = {report.n}"]
    lines.append(
        f"val = {report.val} | base accepting paths: {report.base_accepting} | "
        f"|A_alpha| = val for all alpha: {report.sizes_match_val}"
    )
    lines.append(f"Disjoint: {report.disjoint} | path kills consistent: {report.path_kill_ok}")
    if report.bound_ok is not None:
        largest = max((len(c) for c in report.conflicting.values()), default=0)
        lines.append(f"Largest conflicting set: {largest} (bound {report.conflicting_bound}), ok {report.bound_ok}")
    if report.pair is not None:
        lines.append(
            f"Pair {report.pair}: acc {report.pair_acc} >= {report.pair_lower_bound}, ok {report.pair_ok}"
        )
    lines.append(f"Choice collisions: {report.choice_collisions}")
    return "\n".join(lines)


def format_stage_polynomial(report: StagePolynomialReport) -> str:
    lines = [f"## Stage polynomial over {len(report.variables)} free string(s), degree {report.degree}"]
    if not report.checks:
        lines.append("No prime in the admissible range.")
    for check in report.checks:
        value = "" if check.val is None else f" (val {check.val})"
        lines.append(f"- p = {check.prime}: {check.outcome}{value}")
    return "\n".join(lines)


def format_diag_run(run: DiagRun) -> str:
    """Format a diagonalization run as Markdown."""
    lines = [f"# Stages of `{run.machine}` against `{run.function}` {_verdict(run.ok)}"]
    for stage in run.stages:
        lines.append("")
        lines.append(format_stage_report(stage))
    for claim in run.claims:
        lines.append("")
        lines.append(format_claim_report(claim))
    for poly in run.polynomials:
        lines.append("")
        lines.append(format_stage_polynomial(poly))
    return "\n".join(lines)
