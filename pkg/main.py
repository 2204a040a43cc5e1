"""
Semigroup Conjugacy Toolkit - Command Line Entry Point
Conjugacy classes and irreducible representations of finite inverse semigroups
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from backend.models.errors import SemigroupError
from backend.models.schemas import AnalysisConfig, ErrorReport, InvariantStatus
from backend.services.report_service import ReportService, dump_json
from backend.utils.fixtures import builtin_generators

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger("semigroup")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semigroup",
        description="Conjugacy and representation structure of finite inverse semigroups",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--input", required=True, help="Generator file (JSON)")
        sub.add_argument("--output", help="Write the JSON report here")
        sub.add_argument("--field", default="q", help="q or fp:P (default q)")
        sub.add_argument("--reps", help="Supplied representations file (JSON)")
        sub.add_argument("--cap", type=int, help="Element cap for enumeration")
        sub.add_argument("--seed", type=int, default=0, help="Seed for sampled audits")
        sub.add_argument("--skip-reps", action="store_true", help="Skip the representation pipeline")

    analyze = subparsers.add_parser("analyze", help="Full analysis with bijection verdict")
    common(analyze)
    verify = subparsers.add_parser("verify", help="Run every invariant and report each")
    common(verify)

    builtin = subparsers.add_parser("builtin", help="Emit a built-in generator file")
    builtin.add_argument("name", help="rook-n, sym-n, chain-n or random-n")
    builtin.add_argument("--output", help="Write the generator file here")
    builtin.add_argument("--seed", type=int, default=0, help="Seed for random-n")
    builtin.add_argument("--generators", type=int, default=3, help="Generator count for random-n")
    return parser


def write_output(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def run(args: argparse.Namespace) -> int:
    if args.command == "builtin":
        text = dump_json(builtin_generators(args.name, seed=args.seed, count=args.generators))
        if args.output:
            write_output(text, args.output)
        else:
            print(text, end="")
        return 0

    overrides = {"field": args.field, "seed": args.seed, "skip_reps": args.skip_reps}
    if args.cap is not None:
        overrides["element_cap"] = args.cap
    config = AnalysisConfig.from_env(**overrides)
    logging.getLogger().setLevel(config.log_level.upper())

    service = ReportService(config)
    generators = service.load_generators(args.input)
    supplied = service.load_supplied(args.reps)
    if args.command == "analyze":
        report = service.analyze(generators, supplied)
        write_output(dump_json(report), args.output)
        print(service.summarize_analysis(report))
        return 0

    report = service.verify(generators, supplied)
    write_output(dump_json(report), args.output)
    print(service.summarize_verification(report))
    return 0 if report.verdict != InvariantStatus.FAIL else 1


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except SemigroupError as e:
        logger.error("%s: %s", e.label, e.message)
        print(f"Error ({e.label}): {e.message}", file=sys.stderr)
        if e.detail:
            print(e.detail, file=sys.stderr)
        output = getattr(args, "output", None)
        if output and args.command != "builtin":
            write_output(dump_json(ErrorReport(error=e.label, detail=e.message, exit_code=e.exit_code)), output)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
