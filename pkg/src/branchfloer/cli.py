"""Command-line entry point.

    branchfloer compute --two-bridge 3 1 --report json
    branchfloer compute --grid data/trefoil5.grid
    branchfloer checks --max-n 3

Exit codes: 0 success, 2 invalid input (validation, parameters, non-nice
diagrams, cover restrictions, check families left empty by the range
flags), 3 a failed verdict or check, 4 unreadable input files.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from branchfloer.checks import load_expectations, run_checks
from branchfloer.errors import (
    BranchFloerError,
    CoverError,
    DiagramParseError,
    DiagramValidationError,
    ExpectationsError,
    NotNiceError,
    SpecError,
)
from branchfloer.pipeline import DiagramSource, Pipeline
from branchfloer.settings import Settings

logger = logging.getLogger("branchfloer.cli")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILED = 3
EXIT_PARSE = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchfloer",
        description="Knot Floer homology of double branched covers and its Borel localization.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for detail")
    commands = parser.add_subparsers(dest="command", required=True)

    compute = commands.add_parser("compute", help="run the pipeline on one diagram")
    source = compute.add_mutually_exclusive_group(required=True)
    source.add_argument("--two-bridge", nargs=2, type=int, metavar=("P", "Q"), help="two-bridge knot b(P, Q)")
    source.add_argument("--grid", metavar="FILE", help="grid diagram file")
    source.add_argument("--diagram", metavar="FILE", help="Heegaard diagram file")
    compute.add_argument(
        "--lift",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="build the double branched cover (default: only for genus-0 bases)",
    )
    compute.add_argument("--report", choices=("text", "json"), default="text")
    compute.add_argument("--max-domain-coeff", type=int, default=None, metavar="K", help="periodic-domain search bound")
    compute.add_argument("--timing", action="store_true", help="include stage timings")
    compute.add_argument("--checks", action="store_true", help="append the identity checks to the report")

    checks = commands.add_parser("checks", help="run the identity checks")
    checks.add_argument("--max-k", type=int, default=5)
    checks.add_argument("--max-m", type=int, default=9)
    checks.add_argument("--max-n", type=int, default=5)
    checks.add_argument("--expectations", metavar="FILE", help="JSON object overriding expected values by check name")
    return parser


def _source(args: argparse.Namespace) -> DiagramSource:
    if args.two_bridge is not None:
        return DiagramSource.two_bridge(*args.two_bridge)
    if args.grid is not None:
        return DiagramSource.grid_file(args.grid)
    return DiagramSource.diagram_file(args.diagram)


def cmd_compute(args: argparse.Namespace) -> int:
    """Run the pipeline on one input and print the report."""
    settings = Settings()
    settings.update(
        {
            "lift": args.lift,
            "max_domain_coeff": args.max_domain_coeff,
            "report": args.report,
            "timing": args.timing,
            "checks": args.checks,
        }
    )
    pipeline = Pipeline(_source(args), settings)
    sys.stdout.write(pipeline.render())
    return EXIT_OK if pipeline.run().ok else EXIT_FAILED


def cmd_checks(args: argparse.Namespace) -> int:
    """Run the identity checks and print one line per result."""
    expectations = load_expectations(args.expectations) if args.expectations else None
    summary = run_checks(args.max_k, args.max_m, args.max_n, expectations)
    for result in summary.results:
        status = "ok" if result.passed else "FAILED"
        sys.stdout.write(f"[{status}] {result.name}: {result.observed}\n")
    for family in summary.skipped:
        sys.stdout.write(f"[skipped] {family}: empty range\n")
    tally = f"{len(summary.results) - len(summary.failures)}/{len(summary.results)} checks passed"
    if summary.skipped:
        tally += f", {len(summary.skipped)} skipped"
    sys.stdout.write(tally + "\n")
    if summary.failures:
        return EXIT_FAILED
    return EXIT_INVALID if summary.skipped else EXIT_OK


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the command and map errors to exit codes."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        if args.command == "compute":
            return cmd_compute(args)
        return cmd_checks(args)
    except (DiagramParseError, ExpectationsError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (DiagramValidationError, SpecError, NotNiceError, CoverError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except BranchFloerError as exc:
        logger.exception("Internal consistency check failed")
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
