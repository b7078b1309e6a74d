"""
Problem file loading with fail-early validation
"""
import json
import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from errors import InputError, ProblemFileError
from models import ProblemFile, UtilitySpec
from services.beliefs import BeliefGrid, Prior
from services.solvers.problem import ChainProblem
from services.utility import CosineTerm, Piece, UtilityFunction
from utils.numeric import parse_scalar

logger = logging.getLogger(__name__)

# Lattice denominator when a problem file does not set one
DEFAULT_DENOMINATOR = 12


def load_problem_file(path: Union[str, Path]) -> ProblemFile:
    """
    Read and schema-validate a JSON problem file
    Raises ProblemFileError with line/column or field paths
    """
    path = Path(path)
    if not path.is_file():
        raise ProblemFileError(f"Problem file not found: {path}", path=str(path))
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFileError(
            f"{path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}",
            path=str(path), line=e.lineno, column=e.colno,
        )
    try:
        return ProblemFile.model_validate(raw)
    except ValidationError as e:
        issues = [
            f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
            for err in e.errors()
        ]
        raise ProblemFileError(f"{path}: " + "; ".join(issues), path=str(path), issues=issues)


def build_utility(spec: UtilitySpec, states: int, rational: bool) -> UtilityFunction:
    if spec.kind == "constant":
        return UtilityFunction.constant(parse_scalar(spec.value, rational), states, name=spec.name)
    if spec.kind == "sampled":
        grid = BeliefGrid.explicit(spec.points, states, rational)
        lookup = {}
        for point, value in zip(spec.points, spec.values):
            one = BeliefGrid.explicit([point], states, rational).points[0]
            lookup[one] = parse_scalar(value, rational)
        return UtilityFunction.sampled(grid, [lookup[b] for b in grid.points], name=spec.name)

    if states != 2:
        raise InputError(
            f"Piecewise utility {spec.name} needs two states, the problem has {states}", utility=spec.name
        )
    pieces = []
    for k, piece in enumerate(spec.pieces):
        cosine = None
        if piece.cosine is not None:
            if rational:
                raise InputError(
                    f"Utility {spec.name} piece {k} has a cosine term, which exact mode cannot evaluate",
                    utility=spec.name, piece=k, hint="drop --rational",
                )
            cosine = CosineTerm(
                float(parse_scalar(piece.cosine.amplitude)),
                float(parse_scalar(piece.cosine.frequency)),
                float(parse_scalar(piece.cosine.phase)),
            )
        pieces.append(Piece(
            start=parse_scalar(piece.interval[0], rational),
            end=parse_scalar(piece.interval[1], rational),
            coefficients=tuple(parse_scalar(c, rational) for c in piece.coefficients),
            center=parse_scalar(piece.center, rational),
            cosine=cosine,
        ))
    return UtilityFunction.piecewise(pieces, continuous=spec.continuous, name=spec.name)


def build_grid(spec: ProblemFile, rational: bool, grid_step=None) -> BeliefGrid:
    if grid_step is not None:
        return BeliefGrid.uniform(grid_step, spec.states, rational)
    if spec.grid.step is not None:
        return BeliefGrid.uniform(spec.grid.step, spec.states, rational)
    return BeliefGrid.explicit(spec.grid.points, spec.states, rational)


def build_problem(
    spec: ProblemFile,
    rational: bool = False,
    eps=None,
    grid_step=None,
    denominator: Optional[int] = None,
) -> ChainProblem:
    """Turn a validated file into a ChainProblem, applying command-line overrides"""
    sender = build_utility(spec.sender_utility, spec.states, rational)
    mediators = tuple(
        build_utility(m, spec.states, rational) for m in spec.mediator_utilities
    )
    problem = ChainProblem(
        sender=sender,
        mediators=mediators,
        prior=Prior.of(spec.prior, spec.states, rational),
        grid=build_grid(spec, rational, grid_step),
        denominator=denominator or spec.denominator or DEFAULT_DENOMINATOR,
        eps=parse_scalar(spec.eps if eps is None else eps, rational),
        rational=rational,
        include_full_information=spec.include_full_information,
        description=spec.description,
    )
    if problem.n >= 1:
        problem.require_prior_on_grid()
    return problem


def load_problem(
    path: Union[str, Path],
    rational: bool = False,
    eps=None,
    grid_step=None,
    denominator: Optional[int] = None,
) -> ChainProblem:
    spec = load_problem_file(path)
    problem = build_problem(spec, rational, eps, grid_step, denominator)
    logger.info(
        f"Loaded {path}: {problem.n} mediators, prior {problem.prior}, "
        f"grid {problem.grid.size} points, Q={problem.denominator}"
    )
    return problem
