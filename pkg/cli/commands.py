"""
Command handlers with fail-early approach
Each handler takes parsed arguments and returns a RunReport; main.py prints it
"""
import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from cli.output import read_sweep_csv, sweep_frame, write_sweep_csv
from cli.plotting import render_sweep_svg
from config import settings
from errors import InputError, UnsupportedStatesError
from models import (
    CheckPayload,
    PlotPayload,
    RunReport,
    SweepPayload,
    SweepRow,
    VerifyPayload,
    ViolationInfo,
)
from services.beliefs import Belief, FiniteBeliefDistribution, Prior
from services.domination import DominationQuery, Violation, set_violation
from services.instances import random_chain_problem
from services.solvers.base import distribution_entries
from services.solvers.chain import solve_chain, to_poset_game
from services.solvers.factory import SolverFactory
from services.solvers.poset_game import poset_game_value, verify_backward_induction
from services.solvers.problem import ChainProblem
from services.solvers.single import best_contraction, membership_M_eps
from services.utility import concavify_unconstrained, expected_utility
from utils.numeric import format_number, parse_scalar
from utils.problem_loader import load_problem

logger = logging.getLogger(__name__)

# Sweep priors are rounded to this many decimals so k * step lands on grid points
PRIOR_DECIMALS = 12


def _arguments(args: argparse.Namespace) -> Dict[str, Any]:
    """Parsed arguments as plain JSON values"""
    echoed = {}
    for key, value in sorted(vars(args).items()):
        if callable(value):
            continue
        echoed[key] = str(value) if isinstance(value, Path) else value
    return echoed


def _configuration(problem: Optional[ChainProblem]) -> Dict[str, Any]:
    config: Dict[str, Any] = {"settings": settings.model_dump()}
    if problem is not None:
        config["problem"] = {
            "description": problem.description,
            "states": problem.states,
            "mediators": problem.n,
            "prior": str(problem.prior),
            "grid_size": problem.grid.size,
            "grid_resolution": problem.grid.resolution,
            "denominator": problem.denominator,
            "eps": format_number(problem.eps),
            "rational": problem.rational,
        }
    return config


def _load(args: argparse.Namespace) -> ChainProblem:
    return load_problem(
        args.file,
        rational=getattr(args, "rational", False),
        eps=getattr(args, "eps", None),
        grid_step=getattr(args, "grid_step", None),
        denominator=getattr(args, "denominator", None),
    )


def _violation_info(violation: Optional[Violation]) -> Optional[ViolationInfo]:
    if violation is None:
        return None
    return ViolationInfo(
        weights=list(violation.weights),
        beliefs=[str(b) for b in violation.beliefs],
        mean=str(violation.mean),
        gap=violation.gap,
    )


def parse_beliefs(text: str, states: int, rational: bool = False) -> List[Belief]:
    """
    "q1,q2,..." for two states; with more states each belief is a full
    probability vector and beliefs are separated by ';'
    """
    text = text.strip()
    if not text:
        raise InputError("Empty belief list")
    try:
        if states == 2:
            return [Belief.binary(parse_scalar(part, rational), rational) for part in text.split(",")]
        return [
            Belief.from_coords([parse_scalar(c, rational) for c in group.split(",")], rational)
            for group in text.split(";")
        ]
    except InputError as e:
        raise InputError(f"Malformed belief list {text!r}: {e.message}", query=text)


def prior_range(start: float, stop: float, step: float) -> List[float]:
    if step <= 0:
        raise InputError(f"Sweep step must be positive, got {step}")
    if not 0 <= start <= stop <= 1:
        raise InputError(f"Sweep range must satisfy 0 <= from <= to <= 1, got [{start}, {stop}]")
    count = int(np.floor((stop - start) / step + 1e-9))
    return [round(start + k * step, PRIOR_DECIMALS) for k in range(count + 1)]


def cmd_solve(args: argparse.Namespace) -> RunReport:
    problem = _load(args).with_mediators(args.mediators)
    if args.prior is not None:
        problem = problem.with_prior(Prior.of(args.prior, problem.states, problem.rational))
    payload = SolverFactory.solve(problem, args.solver)
    logger.info(f"Solved with value {payload.value}")
    return RunReport(
        command="solve",
        arguments=_arguments(args),
        configuration=_configuration(problem),
        result=payload.model_dump(mode="json"),
        warnings=payload.warnings,
    )


def sweep_rows(problem: ChainProblem, priors: List[float], strategy: str = "auto") -> List[SweepRow]:
    """One row per prior; the constrained column is exactly what solve reports at that prior"""
    if problem.states != 2:
        raise UnsupportedStatesError("Prior sweeps are defined for two states", states=problem.states)
    rows = []
    for value in priors:
        prior = Prior.of(value, 2, problem.rational)
        at_prior = problem.with_prior(prior)
        payload = SolverFactory.solve(at_prior, strategy)
        rows.append(SweepRow(
            prior=value,
            v_s=float(problem.sender.evaluate(prior.belief)),
            cav_unconstrained=float(concavify_unconstrained(problem.sender, problem.grid, prior.belief)),
            cav_constrained=payload.value_float,
        ))
    return rows


def cmd_sweep(args: argparse.Namespace) -> RunReport:
    problem = _load(args).with_mediators(args.mediators)
    priors = prior_range(args.start, args.stop, args.step)
    logger.info(f"Sweeping {len(priors)} priors from {priors[0]} to {priors[-1]}")
    rows = sweep_rows(problem, priors, args.solver)
    if args.csv:
        write_sweep_csv(rows, args.csv)
    if args.svg:
        render_sweep_svg(sweep_frame(rows), args.svg, title=problem.description)
    payload = SweepPayload(
        rows=rows,
        csv_path=str(args.csv) if args.csv else None,
        svg_path=str(args.svg) if args.svg else None,
    )
    return RunReport(
        command="sweep",
        arguments=_arguments(args),
        configuration=_configuration(problem),
        result=payload.model_dump(mode="json"),
    )


def _check_distribution(problem: ChainProblem, mediator: int, text: str) -> CheckPayload:
    u = problem.mediators[mediator - 1]
    weights = [parse_scalar(w, problem.rational) for w in text.split(",")]
    if len(weights) != problem.grid.size:
        raise InputError(
            f"--dist needs one weight per grid point: got {len(weights)}, grid has {problem.grid.size}",
            grid_size=problem.grid.size,
        )
    mu = FiniteBeliefDistribution.create(problem.grid.points, weights)
    best = best_contraction(mu, u, problem.grid)
    inside = membership_M_eps(mu, u, problem.grid, problem.eps)
    return CheckPayload(
        query="dist",
        mediator=mediator,
        beliefs=[str(b) for b in mu.support],
        dominating=inside,
        own_value=format_number(expected_utility(u, mu)),
        best_contraction_value=format_number(best.value),
        garbling=[] if inside else distribution_entries(best.distribution),
    )


def cmd_check(args: argparse.Namespace) -> RunReport:
    problem = _load(args)
    if problem.n == 0:
        raise InputError("check needs a problem with at least one mediator")
    if not 1 <= args.mediator <= problem.n:
        raise InputError(f"--mediator must lie in [1, {problem.n}], got {args.mediator}")
    u = problem.mediators[args.mediator - 1]

    if args.dist is not None:
        payload = _check_distribution(problem, args.mediator, args.dist)
    else:
        query = "pair" if args.pair is not None else "set"
        beliefs = parse_beliefs(args.pair if query == "pair" else args.set, problem.states, problem.rational)
        if query == "pair":
            if len(beliefs) != 2:
                raise InputError(f"--pair needs exactly two beliefs, got {len(beliefs)}")
            violation = DominationQuery(u, tuple(beliefs)).violation()
        else:
            violation = set_violation(u, beliefs)
        payload = CheckPayload(
            query=query,
            mediator=args.mediator,
            beliefs=[str(b) for b in beliefs],
            dominating=violation is None,
            violation=_violation_info(violation),
        )
    return RunReport(
        command="check",
        arguments=_arguments(args),
        configuration=_configuration(problem),
        result=payload.model_dump(mode="json"),
    )


def cmd_verify(args: argparse.Namespace) -> RunReport:
    """Feasible-set value against explicit backward induction on the same lattice"""
    if args.random is not None:
        problem = random_chain_problem(np.random.default_rng(args.random))
    elif args.file is not None:
        problem = _load(args)
    else:
        raise InputError("verify needs a problem file or --random SEED")
    if problem.n == 0:
        raise InputError("verify needs at least one mediator")

    result = solve_chain(problem)
    game = to_poset_game(result.lattice, problem.sender, list(problem.mediators))
    game.validate()
    poset_value, _ = poset_game_value(game, problem.eps)
    verifier_value = verify_backward_induction(game, problem.eps)
    passed = bool(result.value == poset_value == verifier_value)
    if not passed:
        logger.warning(
            f"Oracle disagreement: chain {result.value}, poset {poset_value}, backward induction {verifier_value}"
        )
    payload = VerifyPayload(
        chain_value=format_number(result.value),
        poset_value=format_number(poset_value),
        verifier_value=format_number(verifier_value),
        passed=passed,
        element_count=result.element_count,
        seed=args.random,
    )
    return RunReport(
        command="verify",
        arguments=_arguments(args),
        configuration=_configuration(problem),
        result=payload.model_dump(mode="json"),
        exit_code=0 if passed else 4,
    )


def cmd_plot(args: argparse.Namespace) -> RunReport:
    frame = read_sweep_csv(args.csv)
    render_sweep_svg(frame, args.output, title=args.title or "")
    payload = PlotPayload(csv_path=str(args.csv), svg_path=str(args.output), rows=len(frame))
    return RunReport(
        command="plot",
        arguments=_arguments(args),
        configuration=_configuration(None),
        result=payload.model_dump(mode="json"),
    )
