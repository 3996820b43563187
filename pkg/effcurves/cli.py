"""
Command-line front end.

    effcurves thm-a --chi-s 2 --chi-y 1 --dy "2*a"
    effcurves verify --chain all --json
    effcurves curves distance s11 0/1 1/0
    effcurves project --fixture fixA --curve crossing

Exit codes: 0 success, 1 a chain is Refuted, 2 Unresolved or Unknown,
3 BelowThreshold or NoEssentialIntersection, 64 usage error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .bounds import LEDGER_VARIANTS, PRIMARY_VARIANT, runner
from .config import get_settings
from .report import Report, validate_report
from .store import initialize_database, store_report

logger = logging.getLogger(__name__)

COMMANDS = ("thm-a", "thm-b", "verify", "curves", "project", "ledger", "pipeline")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code instead of 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(runner.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser, eps0: bool = True) -> None:
    if eps0:
        parser.add_argument("--eps0", help="Margulis parameter, exact (default 1/10)")
    parser.add_argument("--precision", type=int, help="working precision in bits")
    parser.add_argument("--digits", type=int, default=runner.DEFAULT_DIGITS,
                        help="significant digits of rendered enclosures")
    parser.add_argument("--json", action="store_true", help="print the JSON report")
    parser.add_argument("--out", type=Path, help="write the report to a .json file or store it in a .db file")
    parser.add_argument("--timestamp", action="store_true", help="include a timestamp in the report")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")


def _add_variant(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--variant", choices=LEDGER_VARIANTS, default=PRIMARY_VARIANT,
                        help="which printed values c1, c2, c3 take")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="effcurves",
                     description="Certified bounds, curve-graph queries and chain verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thm-a", help="Theorem A threshold and length bound")
    p.add_argument("--chi-s", required=True, help="|chi(S)|")
    p.add_argument("--chi-y", required=True, help="|chi(Y)|")
    p.add_argument("--dy", required=True, help="d_Y, a number or an expression over the ledger")
    _add_variant(p)
    _add_common(p)

    p = sub.add_parser("thm-b", help="Theorem B bound")
    p.add_argument("--chi-s", required=True, help="|chi(S)|")
    p.add_argument("--inj", required=True, help="injectivity radius of M")
    _add_variant(p)
    _add_common(p)

    p = sub.add_parser("pipeline", help="stage-by-stage Theorem A trace")
    p.add_argument("--chi-s", required=True)
    p.add_argument("--chi-y", required=True)
    p.add_argument("--dy", required=True)
    _add_variant(p)
    _add_common(p)

    p = sub.add_parser("ledger", help="the constant ledger at eps0")
    p.add_argument("--chi", type=int, help="evaluate the |chi|-dependent thresholds too")
    _add_variant(p)
    _add_common(p)

    p = sub.add_parser("verify", help="verify the inequality chains")
    p.add_argument("--chain", default="all", help="chain id or 'all'")
    p.add_argument("--eps0-lo", help="lower end of the eps0 box")
    p.add_argument("--eps0-hi", help="upper end of the eps0 box")
    p.add_argument("--max-depth", type=int, help="bisection depth cap")
    p.add_argument("--workers", type=int, help="threads for the certifier")
    p.add_argument("--chains-dir", type=Path, help="read the corpus from this directory")
    _add_common(p)

    p = sub.add_parser("curves", help="curve-graph distance, intersection or slice")
    p.add_argument("action", choices=("distance", "intersect", "graph"))
    p.add_argument("surface", help="s11, s04 or fixture:<file>")
    p.add_argument("curves", nargs="*", help="slopes p/q, or fixture curve names / label walks")
    p.add_argument("--radius", type=int, help="largest distance searched")
    p.add_argument("--bound", type=int, help="slice bound (slope height or normal weight)")
    p.add_argument("--budget", type=int, help="intersection work budget")
    _add_common(p, eps0=False)

    p = sub.add_parser("project", help="subsurface projection of a fixture curve")
    p.add_argument("--fixture", required=True, help="shipped fixture name or .fix path")
    p.add_argument("--curve", required=True, help="curve name or label walk")
    p.add_argument("--other", help="second curve: report d_Y of the pair")
    p.add_argument("--budget", type=int, help="surgery work budget")
    _add_common(p, eps0=False)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s", force=True)


# ============================================================================
# DISPATCH
# ============================================================================

def _edges_out(args: argparse.Namespace) -> Optional[Path]:
    if args.command == "curves" and args.action == "graph" and args.out is not None \
            and args.out.suffix not in (".json", ".db"):
        return args.out
    return None


def run_command(args: argparse.Namespace) -> Dict[str, Any]:
    """Dispatch parsed arguments to the runner."""
    common = {"precision": args.precision}
    if args.command == "thm-a":
        return runner.run_thm_a(args.chi_s, args.chi_y, args.dy, args.eps0, args.variant,
                                digits=args.digits, **common)
    if args.command == "thm-b":
        return runner.run_thm_b(args.chi_s, args.inj, args.eps0, args.variant,
                                digits=args.digits, **common)
    if args.command == "pipeline":
        return runner.run_pipeline(args.chi_s, args.chi_y, args.dy, args.eps0, args.variant,
                                   digits=args.digits, with_timestamp=args.timestamp, **common)
    if args.command == "ledger":
        return runner.run_ledger(args.eps0, args.variant, args.chi, digits=args.digits, **common)
    if args.command == "verify":
        return runner.run_verify(args.chain, args.eps0, args.eps0_lo, args.eps0_hi,
                                 max_depth=args.max_depth, workers=args.workers,
                                 chains_dir=args.chains_dir, **common)
    if args.command == "curves":
        return runner.run_curves(args.action, args.surface, args.curves, args.radius, args.bound,
                                 _edges_out(args), args.budget, args.digits)
    if args.command == "project":
        return runner.run_project(args.fixture, args.curve, args.other, args.budget)
    raise ValueError(f"unknown command {args.command!r}")


def _write_out(report: Report, path: Path) -> None:
    if path.suffix == ".json":
        report.write(path)
    elif path.suffix == ".db":
        db_manager = initialize_database(str(path))
        with db_manager.get_session() as session:
            store_report(session, report.to_dict())


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    if args.out is not None and args.out.suffix not in (".json", ".db") and _edges_out(args) is None:
        parser.error(f"--out must end in .json or .db, got {args.out}")

    result = run_command(args)
    if result["exit_code"] == runner.EXIT_USAGE:
        print(f"effcurves {args.command}: error: {result['message']}", file=sys.stderr)
        return runner.EXIT_USAGE

    eps0 = runner.eps0_label(getattr(args, "eps0", None))
    precision = args.precision or get_settings().precision
    report = Report.from_result(args.command, result, eps0, precision, args.digits, args.timestamp)
    validate_report(report)
    if args.json:
        print(report.to_json())
    else:
        print(report.to_text(), end="")
    if args.out is not None and _edges_out(args) is None:
        _write_out(report, args.out)
    logger.info("%s finished: %s", args.command, report.status)
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
