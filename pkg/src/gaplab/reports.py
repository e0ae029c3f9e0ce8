"""Experiment configs and the append-only JSON report corpus."""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, model_validator

from .diagonalize import ClaimReport, StagePolynomialReport, StageReport
from .membership import CollapseCheck
from .polyenc import EncodingReport
from .reconstruct import DeckWitnessReport, ReconstructionReport

logger = logging.getLogger("gaplab")

# Upper bounds shared with the library guards.
LIMIT_BOUNDS = {"max_length": 12, "n_max": 8, "universe_bound": 20}


class ExperimentConfig(BaseModel):
    """Everything that determines a report; two equal configs give equal files."""

    subcommand: str
    inputs: dict[str, str] = Field(default_factory=dict, description="input path -> sha256 of its content")
    limits: dict[str, int] = Field(default_factory=dict)
    options: dict[str, str | int | bool | None] = Field(default_factory=dict)
    seed: int = Field(default=0, ge=0)
    output: str = "reports"

    @model_validator(mode="after")
    def check_limits(self) -> ExperimentConfig:
        for key, value in self.limits.items():
            if value < 0:
                raise ValueError(f"limit {key} must be nonnegative, got {value}")
            bound = LIMIT_BOUNDS.get(key)
            if bound is not None and value > bound:
                raise ValueError(f"limit {key} = {value} exceeds {bound}")
        return self

    def canonical(self) -> dict[str, Any]:
        """The hashed part of the config; the output directory is excluded."""
        return self.model_dump(mode="json", exclude={"output"})

    def digest(self) -> str:
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def report_name(self) -> str:
        return f"{self.subcommand}-{self.digest()[:16]}.json"


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# Run reports


class CollapseRun(BaseModel):
    checks: list[CollapseCheck] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)


class ReconstructRun(BaseModel):
    sweep: ReconstructionReport
    witnesses: DeckWitnessReport | None = None
    restricted: dict[str, str] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.sweep.ok and (self.witnesses is None or self.witnesses.ok)


class DivisorCheck(BaseModel):
    """One prime-divisor instance; ``generated`` says which hypotheses it was built to meet."""

    variables: int
    prime: int
    generated: str
    outcome: str
    val: int | None = None

    @property
    def ok(self) -> bool:
        if self.generated == "valid":
            return self.outcome == "divides"
        return self.outcome.startswith("hypothesis failed")


class EncodeRun(BaseModel):
    encodings: list[EncodingReport] = Field(default_factory=list)
    divisor_checks: list[DivisorCheck] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(report.ok for report in self.encodings) and all(check.ok for check in self.divisor_checks)


class DiagRun(BaseModel):
    machine: str
    function: str
    stages: list[StageReport] = Field(default_factory=list)
    claims: list[ClaimReport] = Field(default_factory=list)
    polynomials: list[StagePolynomialReport] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        stages_ok = all(stage.found is None or stage.confirmed for stage in self.stages)
        claims_ok = all(
            claim.path_kill_ok and claim.disjoint is not False and claim.bound_ok is not False and claim.pair_ok is not False
            for claim in self.claims
        )
        divisions_ok = all(
            check.outcome != "not divisible" for poly in self.polynomials for check in poly.checks
        )
        return stages_ok and claims_ok and divisions_ok


def render_report(config: ExperimentConfig, report: BaseModel) -> str:
    payload = {
        "config": config.canonical(),
        "seed": config.seed,
        "ok": bool(getattr(report, "ok", True)),
        "report": report.model_dump(mode="json"),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_report(config: ExperimentConfig, report: BaseModel, directory: str | Path | None = None) -> Path:
    """Write ``report`` under its content-addressed name; never overwrite.

    Returns the report path, which may be a file left by an earlier run
    with the same config.
    """
    target = Path(directory if directory is not None else config.output)
    target.mkdir(parents=True, exist_ok=True)
    path = target / config.report_name()
    text = render_report(config, report)
    try:
        with path.open("x", encoding="utf-8") as f:
            f.write(text)
    except FileExistsError:
        if path.read_text(encoding="utf-8") != text:
            logger.warning(f"Report {path} exists with different content; keeping the earlier file")
        else:
            logger.info(f"Report {path} already recorded")
        return path
    logger.info(f"Wrote report {path}")
    return path
