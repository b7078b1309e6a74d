"""
Factory for choosing the solver that fits a problem
Following Factory Pattern for extensibility
"""
import logging

from errors import InputError
from models import SolvePayload
from services.solvers.base import BaseSolver
from services.solvers.chain_solver import ChainSolver
from services.solvers.direct import DirectSolver
from services.solvers.problem import ChainProblem
from services.solvers.single_solver import SingleMediatorSolver

logger = logging.getLogger(__name__)

STRATEGIES = ("auto", "chain")


class SolverFactory:
    """
    Factory for creating and running persuasion solvers
    """

    @staticmethod
    def should_use_single(problem: ChainProblem) -> bool:
        """One mediator with exact best replies has the dominating-pair characterization"""
        return problem.n == 1 and problem.eps == 0

    @staticmethod
    def create_solver(problem: ChainProblem, strategy: str = "auto") -> BaseSolver:
        """strategy "chain" forces the lattice solver whenever there is a mediator"""
        if strategy not in STRATEGIES:
            raise InputError(f"Unknown solver strategy {strategy!r}", choices=list(STRATEGIES))
        if problem.n == 0:
            return DirectSolver(problem)
        if strategy == "auto" and SolverFactory.should_use_single(problem):
            return SingleMediatorSolver(problem)
        return ChainSolver(problem)

    @staticmethod
    def solve(problem: ChainProblem, strategy: str = "auto") -> SolvePayload:
        solver = SolverFactory.create_solver(problem, strategy)
        logger.info(f"Using {solver.describe()}")
        return solver.solve()
