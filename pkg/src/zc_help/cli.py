"""
Command-Line Interface

    zc-help validate <file>
    zc-help solve --group <ref> --order <n> [--toggles ...] [--modular p,...] [--format text|json]
    zc-help verify --group <ref> [--quotient <file>...] [--toggles ...] [--out <path>]
    zc-help list

Exit codes: 0 verified, 2 open orders exist, 3 data or validation error,
4 configuration error.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import NoReturn, Optional, Sequence

import structlog
from pydantic import ValidationError

from . import __version__
from .adapters.group_repository import GroupRepository
from .config import Settings
from .constraints import TOGGLES, ConstraintOptions
from .errors import ConfigurationError, DataIOError, HelpError
from .logging_config import configure_logging
from .observability import setup_telemetry
from .reporting import Report, render_text
from .services.verification_service import VerificationService

logger = structlog.get_logger()

EXIT_VERIFIED = 0
EXIT_OPEN = 2


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors, not argparse's exit status 2."""

    def error(self, message: str) -> NoReturn:
        raise ConfigurationError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zc-help", description="HeLP verification of torsion units in ZG")
    parser.add_argument("--version", action="version", version=f"zc-help {__version__}")
    parser.add_argument(
        "--data-dir", type=Path, default=None, help="Group directory (overrides ZC_HELP_DATA_DIR)"
    )
    parser.add_argument("--workers", type=int, default=None, help="Process pool size")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    validate = sub.add_parser("validate", help="Validate a group file")
    validate.add_argument("file")

    toggle_help = "Comma list of " + ", ".join(TOGGLES) + "; prefix no- to disable"

    solve = sub.add_parser("solve", help="Solve one unit order")
    solve.add_argument("--group", required=True, help="Group file, file stem or group name")
    solve.add_argument("--order", required=True, type=int)
    solve.add_argument("--quotient", action="append", default=[], help="Quotient group file")
    solve.add_argument("--toggles", default=None, help=toggle_help)
    solve.add_argument("--modular", default=None, help="Brauer primes, e.g. 5 or 3,5")
    solve.add_argument("--format", choices=("text", "json"), default="text")
    solve.add_argument("--out", type=Path, default=None)

    verify = sub.add_parser("verify", help="Verify ZC1 for every candidate order")
    verify.add_argument("--group", required=True, help="Group file, file stem or group name")
    verify.add_argument("--quotient", action="append", default=[], help="Quotient group file")
    verify.add_argument("--toggles", default=None, help=toggle_help)
    verify.add_argument("--modular", default=None, help="Brauer primes, e.g. 5 or 3,5")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--out", type=Path, default=None)

    sub.add_parser("list", help="List the visible groups")
    return parser


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as e:
        raise DataIOError(f"cannot write {out}: {e.strerror or e}") from e


def _render(report: Report, fmt: str) -> str:
    return report.to_json() if fmt == "json" else render_text(report)


def _run(args: argparse.Namespace, config: Settings) -> int:
    repository = GroupRepository(data_dir=args.data_dir or config.data_dir)

    if args.command == "list":
        for entry in repository.entries():
            sys.stdout.write(
                f"{entry.stem:<8} {entry.name:<10} order {entry.order:<6} {entry.origin}\n"
            )
        return EXIT_VERIFIED

    workers = args.workers if args.workers is not None else config.workers
    if workers < 1:
        raise ConfigurationError(f"--workers must be at least 1, got {workers}")
    service = VerificationService(repository, workers=workers, report_timings=config.report_timings)

    if args.command == "validate":
        g = service.validate(args.file)
        sys.stdout.write(
            f"ok: {g.name} (order {g.order}, {len(g.classes)} classes, "
            f"{len(g.characters)} characters, Brauer primes {list(g.brauer_primes)})\n"
        )
        return EXIT_VERIFIED

    options = ConstraintOptions.from_toggles(args.toggles, args.modular)
    if args.command == "solve":
        report = service.solve(args.group, args.order, options, args.quotient)
    else:
        report = service.verify(args.group, options, args.quotient)
    _emit(_render(report, args.format), args.out)
    return report.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = Settings()
    except HelpError as e:
        sys.stderr.write(f"error [{e.category}] {e.message}\n")
        return e.exit_code
    except ValidationError as e:
        sys.stderr.write(f"error [configuration-error] invalid settings: {e.errors()[0]['msg']}\n")
        return ConfigurationError.exit_code

    configure_logging(config.log_level, config.log_format)
    setup_telemetry(config)

    try:
        return _run(args, config)
    except HelpError as e:
        logger.debug("Command failed", command=args.command, **e.to_dict())
        sys.stderr.write(f"error [{e.category}] {e.message}\n")
        if e.detail:
            sys.stderr.write(json.dumps(e.to_dict()) + "\n")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
