"""Exhaustive checks of the gap-class definitions on a finite domain."""

from __future__ import annotations

import logging
from collections.abc import Callable, Collection
from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, Field

from .collapse import collapse_ceqp, collapse_lwpp, collapse_two_sided, collapse_wpp, two_sided_targets
from .errors import InvalidSpecError
from .natpoly import NatPoly
from .programs import Base, BaseMachine, GapProgram, accepting_machine, eval_gap
from .strings import Domain
from .targets import TargetSpec, TwoSidedTargetSpec

logger = logging.getLogger("gaplab")

Language = Callable[[str], bool]


class GapClass(str, Enum):
    LWPP = "LWPP"
    R_LWPP = "rLWPP"
    WPP = "WPP"
    R_WPP = "rWPP"
    TWO_SIDED = "twoSided"
    CEQP = "CeqP"
    SPP = "SPP"


class Violation(BaseModel):
    input: str
    gap: int
    expected: list[int]
    verdict: str


class MembershipReport(BaseModel):
    gap_class: GapClass
    checked: int = 0
    accepted: int = 0
    violations: list[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class PromiseLanguage:
    """Inputs whose gap hits a target, and inputs that break the promise."""

    members: frozenset[str]
    breaks: tuple[str, ...]

    def __call__(self, x: str) -> bool:
        return x in self.members


def promise_language(g: GapProgram, spec: TargetSpec, domain: Domain | None = None) -> PromiseLanguage:
    domain = domain or Domain()
    members: set[str] = set()
    breaks: list[str] = []
    for x in domain.strings():
        value = eval_gap(g, x, domain)
        if value in spec.targets(x, domain.alphabet):
            members.add(x)
        elif value != 0:
            breaks.append(x)
    return PromiseLanguage(frozenset(members), tuple(breaks))


def _require_single(spec: TargetSpec, gap_class: GapClass) -> None:
    if spec.multiplicity != NatPoly.constant(1):
        raise InvalidSpecError(f"{gap_class.value} expects exactly one target per key")


def verify_class_membership(
    g: GapProgram,
    spec: TargetSpec | TwoSidedTargetSpec | None,
    language: Language,
    gap_class: GapClass | str,
    domain: Domain | None = None,
) -> MembershipReport:
    """Check the defining implications of ``gap_class`` on every domain input.

    Promise breaks are returned as violations, never raised. ``spec`` may be
    None only for SPP, whose single target is 1.
    """
    domain = domain or Domain()
    gap_class = GapClass(gap_class)
    alphabet = domain.alphabet

    if gap_class is GapClass.TWO_SIDED:
        if not isinstance(spec, TwoSidedTargetSpec):
            raise InvalidSpecError("twoSided membership needs a TwoSidedTargetSpec")
    elif gap_class is GapClass.SPP:
        spec = TargetSpec.constant("input", [1])
    else:
        if not isinstance(spec, TargetSpec):
            raise InvalidSpecError(f"{gap_class.value} membership needs a TargetSpec")
        if gap_class in (GapClass.LWPP, GapClass.R_LWPP) and spec.mode != "length":
            raise InvalidSpecError(f"{gap_class.value} needs length-indexed targets")
        if gap_class in (GapClass.LWPP, GapClass.WPP):
            _require_single(spec, gap_class)

    report = MembershipReport(gap_class=gap_class)
    for x in domain.strings():
        value = eval_gap(g, x, domain)
        member = language(x)
        report.checked += 1
        report.accepted += int(member)

        if isinstance(spec, TwoSidedTargetSpec):
            side = spec.accept if member else spec.reject
            expected = side.targets(x, alphabet)
            if value not in expected:
                verdict = "accepted input misses every A-target" if member else "rejected input misses every R-target"
                report.violations.append(Violation(input=x, gap=value, expected=expected, verdict=verdict))
            continue

        assert spec is not None
        expected = spec.targets(x, alphabet)
        if gap_class is GapClass.CEQP:
            if member != (value in expected):
                verdict = "accepted input misses every target" if member else "rejected input hits a target"
                report.violations.append(Violation(input=x, gap=value, expected=expected, verdict=verdict))
            continue

        if member and 0 in expected:
            report.violations.append(Violation(input=x, gap=value, expected=expected, verdict="zero target"))
        elif member and value not in expected:
            report.violations.append(
                Violation(input=x, gap=value, expected=expected, verdict="accepted input misses every target")
            )
        elif not member and value != 0:
            report.violations.append(
                Violation(input=x, gap=value, expected=[0], verdict="rejected input has nonzero gap")
            )

    logger.info(
        f"{gap_class.value} check: {report.checked} inputs, {report.accepted} accepted, "
        f"{len(report.violations)} violation(s)"
    )
    return report


# Compiled-witness checks


class CollapseCheck(BaseModel):
    """A source witness, its compiled single-target witness and both verdicts."""

    label: str
    source: MembershipReport
    compiled: MembershipReport
    intermediate: MembershipReport | None = None
    promise_breaks: list[str] = Field(default_factory=list)
    zero_mismatches: list[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        reports = [self.source, self.compiled] + ([self.intermediate] if self.intermediate else [])
        return all(report.ok for report in reports) and not self.zero_mismatches


def _zero_mismatches(ghat: GapProgram, language: Language, skip: Collection[str], domain: Domain) -> list[str]:
    """Inputs where ghat(x) = 0 disagrees with x being rejected."""
    return [
        x
        for x in domain.strings()
        if x not in skip and (eval_gap(ghat, x, domain) == 0) == language(x)
    ]


def verify_collapse(
    g: GapProgram,
    spec: TargetSpec | TwoSidedTargetSpec,
    domain: Domain | None = None,
    label: str = "witness",
) -> CollapseCheck:
    """Compile (g, spec) to a single-target witness and check both on ``domain``.

    Length-indexed targets go through collapse_lwpp, input-indexed ones
    through collapse_wpp and two-sided ones through collapse_two_sided
    followed by collapse_lwpp. The language is the one g decides under its
    promise.
    """
    domain = domain or Domain()
    if isinstance(spec, TwoSidedTargetSpec):
        accepted = frozenset(x for x in domain.strings() if eval_gap(g, x, domain) in spec.accept.targets(x, domain.alphabet))
        language = PromiseLanguage(accepted, ())
        source = verify_class_membership(g, spec, language, GapClass.TWO_SIDED, domain)
        middle_g, middle_f, r_accept = collapse_two_sided(g, spec, domain)
        middle = two_sided_targets(middle_f, r_accept)
        intermediate = verify_class_membership(middle_g, middle, language, GapClass.R_LWPP, domain)
        ghat, fhat = collapse_lwpp(middle_g, middle, domain)
        compiled = verify_class_membership(ghat, TargetSpec.single("length", fhat), language, GapClass.LWPP, domain)
        breaks = [v.input for v in source.violations]
        return CollapseCheck(
            label=label,
            source=source,
            compiled=compiled,
            intermediate=intermediate,
            promise_breaks=breaks,
            zero_mismatches=_zero_mismatches(ghat, language, breaks, domain),
        )

    language = promise_language(g, spec, domain)
    if spec.mode == "length":
        source_class, target_class = GapClass.R_LWPP, GapClass.LWPP
        ghat, fhat = collapse_lwpp(g, spec, domain)
    else:
        source_class, target_class = GapClass.R_WPP, GapClass.WPP
        ghat, fhat = collapse_wpp(g, spec, domain)
    source = verify_class_membership(g, spec, language, source_class, domain)
    compiled = verify_class_membership(ghat, TargetSpec.single(spec.mode, fhat), language, target_class, domain)
    return CollapseCheck(
        label=label,
        source=source,
        compiled=compiled,
        promise_breaks=list(language.breaks),
        zero_mismatches=_zero_mismatches(ghat, language, language.breaks, domain),
    )


def verify_ceqp(machine: BaseMachine, spec: TargetSpec, domain: Domain | None = None, label: str = "ceqp") -> CollapseCheck:
    """Check that collapse_ceqp vanishes exactly where acc hits a target."""
    domain = domain or Domain()
    counter = Base(accepting_machine(machine))
    language = PromiseLanguage(
        frozenset(x for x in domain.strings() if counter.machine.gap(x) in spec.targets(x, domain.alphabet)),
        (),
    )
    source = verify_class_membership(counter, spec, language, GapClass.CEQP, domain)
    h2 = collapse_ceqp(machine, spec)
    compiled = verify_class_membership(h2, TargetSpec.constant("input", [0]), language, GapClass.CEQP, domain)
    return CollapseCheck(label=label, source=source, compiled=compiled)
