"""
Command-line entry point for the mediated persuasion solver
Registers the sub-commands and maps errors to exit codes
"""
import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

from cli.commands import cmd_check, cmd_plot, cmd_solve, cmd_sweep, cmd_verify
from cli.output import render_check, render_rows, render_solve, render_verify, report_json, write_report
from config import settings  # noqa: F401  (configures logging)
from errors import PersuasionError
from models import CheckPayload, RunReport, SolvePayload, SweepPayload, VerifyPayload
from services.solvers.factory import STRATEGIES

logger = logging.getLogger(__name__)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-v", "--verbose", action="store_true", help="Log pipeline milestones at INFO")
    parser.add_argument("--json", action="store_true", help="Print the run report as JSON")
    parser.add_argument("--report", type=Path, help="Also write the JSON run report to this file")
    parser.add_argument("--timing", action="store_true", help="Include wall-clock time in the report")


def _problem_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", type=Path, help="JSON problem file")
    parser.add_argument("--eps", help="Override eps (number or a/b)")
    parser.add_argument("--grid-step", dest="grid_step", help="Replace the grid by a uniform mesh of this step")
    parser.add_argument("--denominator", type=int, help="Lattice weight denominator Q")
    parser.add_argument("--rational", action="store_true", help="Exact rational arithmetic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="persuasion", description="Mediated Bayesian persuasion solver")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Sender value and optimal distribution")
    _problem_options(solve)
    solve.add_argument("--prior", help="Override the prior")
    solve.add_argument("--mediators", type=int, help="Keep only the first K mediators")
    solve.add_argument("--solver", choices=STRATEGIES, default="auto", help="Force the lattice solver with 'chain'")
    _common(solve)
    solve.set_defaults(handler=cmd_solve)

    sweep = sub.add_parser("sweep", help="Value curves over a range of priors")
    _problem_options(sweep)
    sweep.add_argument("--from", dest="start", type=float, default=0.0)
    sweep.add_argument("--to", dest="stop", type=float, default=1.0)
    sweep.add_argument("--step", type=float, default=0.01)
    sweep.add_argument("--mediators", type=int)
    sweep.add_argument("--solver", choices=STRATEGIES, default="auto")
    sweep.add_argument("--csv", type=Path, help="Write prior,v_s,cav_unconstrained,cav_constrained rows")
    sweep.add_argument("--svg", type=Path, help="Render the curves to an SVG file")
    _common(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    check = sub.add_parser("check", help="Affine domination and M^eps membership queries")
    _problem_options(check)
    query = check.add_mutually_exclusive_group(required=True)
    query.add_argument("--pair", help="q1,q2")
    query.add_argument("--set", help="q1,q2,...")
    query.add_argument("--dist", help="Weights over the grid points")
    check.add_argument("--mediator", type=int, default=1, help="1-based mediator index")
    _common(check)
    check.set_defaults(handler=cmd_check)

    verify = sub.add_parser("verify", help="Cross-check the chain value by backward induction")
    verify.add_argument("file", type=Path, nargs="?")
    verify.add_argument("--random", type=int, metavar="SEED", help="Verify a seeded random instance")
    verify.add_argument("--eps")
    verify.add_argument("--denominator", type=int)
    verify.add_argument("--rational", action="store_true")
    _common(verify)
    verify.set_defaults(handler=cmd_verify)

    plot = sub.add_parser("plot", help="Render a sweep CSV to SVG")
    plot.add_argument("csv", type=Path)
    plot.add_argument("-o", "--output", type=Path, required=True)
    plot.add_argument("--title")
    _common(plot)
    plot.set_defaults(handler=cmd_plot)
    return parser


def render(report: RunReport) -> str:
    if report.command == "solve":
        return render_solve(SolvePayload(**report.result))
    if report.command == "sweep":
        return render_rows(SweepPayload(**report.result).rows)
    if report.command == "check":
        return render_check(CheckPayload(**report.result))
    if report.command == "verify":
        return render_verify(VerifyPayload(**report.result))
    return f"wrote {report.result['svg_path']} ({report.result['rows']} rows)"


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.INFO)

    started = time.perf_counter()
    try:
        report = args.handler(args)
    except PersuasionError as e:
        logger.debug(f"{type(e).__name__}: {e.message}")
        print(json.dumps(e.to_dict(), sort_keys=True, default=str), file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected failure")
        print(json.dumps({"error": type(e).__name__, "message": str(e), "detail": {}}), file=sys.stderr)
        return 3

    elapsed = time.perf_counter() - started
    logger.info(f"{args.command} finished in {elapsed:.3f}s")
    if args.timing:
        report = report.model_copy(update={"timing_seconds": elapsed})

    print(report_json(report) if args.json else render(report))
    if args.report:
        write_report(report, args.report)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(run())
