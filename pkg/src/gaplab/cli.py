"""GapLab command line.

Each subcommand runs one experiment, prints a Markdown summary and records
a JSON report named by the hash of its config.

Usage:
    gaplab collapse witness.gap --max-length 5
    gaplab collapse --random 200 --kind lwpp --seed 7
    gaplab reconstruct --n-max 7 --q-poly 1 --deck decks.txt --class-k 1
    gaplab encode machines.gap --input 0
    gaplab encode --random 100 --divisors 100
    gaplab diag --fixture acc-counter --n 3 --kind both --claim

Exit codes: 0 when nothing was violated, 1 when a check found a violation,
2 for usage, parse and resource errors.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from pydantic import BaseModel, ValidationError

from .config import Settings, get_settings
from .diagonalize import (
    FunctionMachine,
    StageKind,
    claim_report,
    joint_time_bound,
    run_stage,
    stage_context,
    stage_polynomial,
)
from .dsl import Document, load_document, parse_fp
from .errors import GapLabError, ParseError
from .fixtures import (
    STAGE_FIXTURES,
    broken_collapse_fixture,
    ceqp_fixture,
    collapse_fixture,
    constant_function,
    make_rng,
    random_oracle_machine,
    random_stage_machine,
    stage_fixture,
    symmetric_instance,
    two_sided_fixture,
    violating_instance,
)
from .formatters import format_collapse_run, format_diag_run, format_encode_run, format_reconstruct_run
from .membership import CollapseCheck, verify_ceqp, verify_collapse
from .natpoly import NatPoly
from .polyenc import Divides, HypothesisFailed, OracleMachine, check_prime_divisor, verify_encoding
from .reconstruct import (
    Proceed,
    deck_witness_report,
    load_decks,
    q_reconstruction_report,
    restricted_legitimate,
)
from .reports import (
    CollapseRun,
    DiagRun,
    DivisorCheck,
    EncodeRun,
    ExperimentConfig,
    ReconstructRun,
    file_digest,
    write_report,
)
from .strings import Domain
from .targets import TargetSpec

logger = logging.getLogger("gaplab")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2

COLLAPSE_KINDS = ("lwpp", "wpp", "two-sided", "ceqp", "broken")


class UsageError(GapLabError):
    """The arguments do not describe a runnable experiment."""


def configure_logging(level: str) -> None:
    """Configure logging for the command line and the MCP server.

    Args:
        level: Logging level string (DEBUG, INFO, WARNING, ERROR).
    """
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def _read_inputs(paths: Sequence[str]) -> dict[str, str]:
    digests = {}
    for path in paths:
        try:
            digests[path] = file_digest(Path(path))
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from e
    return digests


def _load(path: str, settings: Settings) -> Document:
    return load_document(Path(path).read_text(encoding="utf-8"), settings.alphabet)


def _config(args: argparse.Namespace, settings: Settings, limits: dict[str, int], **options: str | int | bool | None) -> ExperimentConfig:
    inputs = [p for p in [getattr(args, "document", None), *(getattr(args, "deck", None) or [])] if p]
    return ExperimentConfig(
        subcommand=args.command,
        inputs=_read_inputs(inputs),
        limits=limits,
        options=options,
        seed=args.seed if args.seed is not None else settings.seed,
        output=args.out or settings.report_dir,
    )


# Subcommands


def cmd_collapse(args: argparse.Namespace, settings: Settings) -> tuple[ExperimentConfig, BaseModel, str]:
    """Compile target-collapse witnesses and check source and result exhaustively."""
    max_length = args.max_length if args.max_length is not None else settings.max_length
    if args.document is None and not args.random:
        raise UsageError("collapse needs a document or --random N")
    config = _config(
        args,
        settings,
        {"max_length": max_length, "random": args.random},
        kind=args.kind if args.random else ("ceqp" if args.ceqp else None),
        r_poly=args.r_poly if args.random else None,
    )
    domain = Domain(settings.alphabet, max_length)
    run = CollapseRun()
    if args.document is not None:
        run.checks.append(_collapse_document(_load(args.document, settings), args.ceqp, domain, Path(args.document).name))
    if args.random:
        rng = make_rng(config.seed)
        r = NatPoly.parse(args.r_poly)
        for i in range(args.random):
            run.checks.append(_collapse_fixture(args.kind, rng, domain, r, f"{args.kind}-{i}"))
        logger.info(f"Checked {args.random} {args.kind} fixture(s)")
    return config, run, format_collapse_run(run)


def _collapse_document(document: Document, ceqp: bool, domain: Domain, label: str) -> CollapseCheck:
    specs = document.specs()
    if not specs:
        raise ParseError("document contains no spec")
    if ceqp:
        if not document.machines or not isinstance(specs[0], TargetSpec):
            raise ParseError("a C=P check needs a machine and a plain spec")
        return verify_ceqp(next(iter(document.machines.values())), specs[0], domain, label)
    programs = document.programs()
    if not programs:
        raise ParseError("document contains no program")
    return verify_collapse(programs[0], specs[0], domain, label)


def _collapse_fixture(kind: str, rng: random.Random, domain: Domain, r: NatPoly, label: str) -> CollapseCheck:
    if kind == "ceqp":
        ceqp = ceqp_fixture(rng, domain)
        return verify_ceqp(ceqp.machine, ceqp.spec, domain, label)
    if kind == "two-sided":
        fixture = two_sided_fixture(rng, domain)
    elif kind == "broken":
        fixture = broken_collapse_fixture(rng, domain, r)
    else:
        fixture = collapse_fixture(rng, domain, r, "input" if kind == "wpp" else "length", kind)
    return verify_collapse(fixture.g, fixture.spec, domain, label)


def cmd_reconstruct(args: argparse.Namespace, settings: Settings) -> tuple[ExperimentConfig, BaseModel, str]:
    """Sweep pcount over all decks and evaluate supplied decks."""
    config = _config(
        args,
        settings,
        {"n_max": args.n_max, "n_min": args.n_min},
        q_poly=args.q_poly,
        class_k=args.class_k,
        witness=args.witness,
        h=args.h if args.witness else None,
    )
    bound = settings.graph_bound
    q = NatPoly.parse(args.q_poly)
    decks = [d for path in args.deck or [] for d in load_decks(Path(path).read_text(encoding="utf-8"))]
    run = ReconstructRun(sweep=q_reconstruction_report(args.n_max, q, args.n_min, bound, decks))
    if args.witness:
        h = parse_fp(args.h, settings.alphabet)
        run.witnesses = deck_witness_report(args.n_max, q, h, decks, bound)
    if args.class_k is not None:
        for d in decks:
            verdict = restricted_legitimate(d, args.class_k, bound)
            run.restricted[d.serialization()] = (
                f"proceed, pcount {verdict.count}"
                if isinstance(verdict, Proceed)
                else f"reject with gap 0, card {verdict.card} has minimum degree above {args.class_k}"
            )
    return config, run, format_reconstruct_run(run)


def cmd_encode(args: argparse.Namespace, settings: Settings) -> tuple[ExperimentConfig, BaseModel, str]:
    """Verify polynomial encodings of oracle machines against direct simulation."""
    universe_bound = args.universe_bound if args.universe_bound is not None else settings.universe_bound
    if args.document is None and not args.random and not args.divisors:
        raise UsageError("encode needs a document, --random N or --divisors N")
    config = _config(
        args,
        settings,
        {"universe_bound": universe_bound, "random": args.random, "divisors": args.divisors},
        inputs=",".join(args.input or [""]),
    )
    run = EncodeRun()
    if args.document is not None:
        machines = _load(args.document, settings).oracle_machines
        if not machines:
            raise ParseError("document contains no oracle-machine")
        for machine in machines.values():
            for x in args.input or [""]:
                run.encodings.append(verify_encoding(machine, x, universe_bound))
    rng = make_rng(config.seed)
    for i in range(args.random):
        machine = random_oracle_machine(rng, min(10, universe_bound), name=f"random-{i}")
        run.encodings.append(verify_encoding(machine, "", universe_bound))
    for i in range(args.divisors):
        valid = i % 4 != 3
        instance = symmetric_instance(rng) if valid else violating_instance(rng)
        result = check_prime_divisor(instance.poly, instance.p, instance.n, settings.slice_budget)
        if isinstance(result, HypothesisFailed):
            outcome, val = f"hypothesis failed: {result.reason}", None
        else:
            outcome, val = ("divides" if isinstance(result, Divides) else "not divisible"), result.val
        run.divisor_checks.append(
            DivisorCheck(
                variables=instance.n,
                prime=instance.p,
                generated="valid" if valid else "violating",
                outcome=outcome,
                val=val,
            )
        )
    return config, run, format_encode_run(run)


def cmd_diag(args: argparse.Namespace, settings: Settings) -> tuple[ExperimentConfig, BaseModel, str]:
    """Run stage searches, path-set analysis and the stage polynomial at length n."""
    max_candidates = args.max_candidates if args.max_candidates is not None else settings.max_candidates
    config = _config(
        args,
        settings,
        {"n": args.n, "max_candidates": max_candidates, "random": args.random},
        fixture=args.fixture,
        function_val=args.function_val,
        kind=args.kind,
        r_poly=args.r_poly,
        claim=args.claim,
        polynomial=args.polynomial,
    )
    pairs: list[tuple[OracleMachine, FunctionMachine]] = []
    function = constant_function(args.function_val)
    if args.document is not None:
        document = _load(args.document, settings)
        if not document.oracle_machines:
            raise ParseError("document contains no oracle-machine")
        if document.function_machines:
            function = next(iter(document.function_machines.values()))
        pairs.append((next(iter(document.oracle_machines.values())), function))
    if args.fixture is not None:
        pairs.append((stage_fixture(args.fixture, args.n, args.function_val, settings.alphabet), function))
    rng = make_rng(config.seed)
    for _ in range(args.random):
        pairs.append((random_stage_machine(rng, args.n, alphabet=settings.alphabet), function))
    if not pairs:
        raise UsageError("diag needs a document, --fixture NAME or --random N")

    kinds: list[StageKind] = ["gap", "acc"] if args.kind == "both" else [args.kind]
    r = NatPoly.parse(args.r_poly)
    run = DiagRun(
        machine=pairs[0][0].name if len(pairs) == 1 else f"{len(pairs)} machines",
        function=function.name,
    )
    for machine, fn in pairs:
        p = joint_time_bound(machine, fn, args.n)
        ctx = stage_context(machine, fn, args.n, r=r, p=p, alphabet=settings.alphabet)
        for kind in kinds:
            run.stages.append(run_stage(ctx, kind, max_candidates))
        if args.claim:
            run.claims.append(claim_report(ctx))
        if args.polynomial:
            run.polynomials.append(stage_polynomial(ctx, settings.slice_budget)[1])
    return config, run, format_diag_run(run)


# Entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaplab", description="Experiments on gap-based counting classes.")
    parser.add_argument("--log-level", help="override GAPLAB_LOG_LEVEL")
    parser.add_argument("--out", help="report directory (default GAPLAB_REPORT_DIR)")
    parser.add_argument("--seed", type=int, help="seed for generated fixtures (default GAPLAB_SEED)")
    parser.add_argument("--no-report", action="store_true", help="print the summary without writing a report")
    sub = parser.add_subparsers(dest="command", required=True)

    collapse = sub.add_parser("collapse", help="compile and verify target-collapse witnesses")
    collapse.add_argument("document", nargs="?", help="program and spec document (s-expression or JSON)")
    collapse.add_argument("--max-length", type=int, help="largest input length L")
    collapse.add_argument("--ceqp", action="store_true", help="read the first machine and spec as an r-C=P witness")
    collapse.add_argument("--random", type=int, default=0, metavar="N", help="also check N generated fixtures")
    collapse.add_argument("--kind", choices=COLLAPSE_KINDS, default="lwpp", help="kind of generated fixture")
    collapse.add_argument("--r-poly", default="n^2+2", help="multiplicity r(n) of generated fixtures")

    reconstruct = sub.add_parser("reconstruct", help="pcount sweeps and deck checks")
    reconstruct.add_argument("--n-max", type=int, default=7)
    reconstruct.add_argument("--n-min", type=int, default=3)
    reconstruct.add_argument("--q-poly", default="1", help="bound q(n) on pcount")
    reconstruct.add_argument("--deck", action="append", metavar="FILE", help="decks to evaluate")
    reconstruct.add_argument("--class-k", type=int, help="restrict to graphs of minimum degree at most K")
    reconstruct.add_argument("--witness", action="store_true", help="check the padded gap witness on every deck")
    reconstruct.add_argument("--h", default="(+ len 1)", help="nonvanishing FP function h for --witness")

    encode = sub.add_parser("encode", help="verify multilinear encodings of oracle machines")
    encode.add_argument("document", nargs="?", help="document with oracle-machine forms")
    encode.add_argument("--input", action="append", help="input string (repeatable, default empty)")
    encode.add_argument("--universe-bound", type=int, help="largest universe verified by brute force")
    encode.add_argument("--random", type=int, default=0, metavar="N", help="check N generated machines")
    encode.add_argument("--divisors", type=int, default=0, metavar="N", help="check N prime-divisor instances")

    diag = sub.add_parser("diag", help="stage searches of the oracle constructions")
    diag.add_argument("document", nargs="?", help="document with an oracle-machine and a function-machine")
    diag.add_argument("--fixture", choices=STAGE_FIXTURES, help="built-in machine N")
    diag.add_argument("--function-val", type=int, default=1, help="val of the default constant machine M")
    diag.add_argument("--n", type=int, default=3, help="stage length n_j")
    diag.add_argument("--kind", choices=("gap", "acc", "both"), default="both")
    diag.add_argument("--r-poly", default="n^2+2", help="size bound r(n) of the gap stage")
    diag.add_argument("--max-candidates", type=int)
    diag.add_argument("--claim", action="store_true", help="analyze accepting path sets")
    diag.add_argument("--polynomial", action="store_true", help="check primes against the stage polynomial")
    diag.add_argument("--random", type=int, default=0, metavar="N", help="also run N random machines")
    return parser


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], tuple[ExperimentConfig, BaseModel, str]]] = {
    "collapse": cmd_collapse,
    "reconstruct": cmd_reconstruct,
    "encode": cmd_encode,
    "diag": cmd_diag,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the gaplab command."""
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
        configure_logging(args.log_level.upper() if args.log_level else settings.log_level)
        config, report, summary = COMMANDS[args.command](args, settings)
    except (GapLabError, ValidationError, OSError) as e:
        # violations are report data; anything raised means the input was unusable
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR

    print(summary)
    if not args.no_report:
        path = write_report(config, report)
        print(f"\nReport: {path}")
    return EXIT_OK if getattr(report, "ok", True) else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
