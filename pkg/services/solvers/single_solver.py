"""
One mediator with exact best replies: constrained concavification over dominating pairs
"""
from models import SolvePayload
from services.solvers.base import BaseSolver, distribution_entries
from services.solvers.single import solve_single
from services.utility import concavify_unconstrained
from utils.numeric import format_number


class SingleMediatorSolver(BaseSolver):
    name = "single"

    def solve(self) -> SolvePayload:
        problem = self.problem
        p = problem.prior.belief
        result = solve_single(problem.sender, problem.mediators[0], p, problem.grid)
        unconstrained = concavify_unconstrained(problem.sender, problem.grid, p)
        posteriors = ", ".join(str(b) for b in result.posteriors)
        self.logger.info(f"Best dominating split at {p}: [{posteriors}] value {format_number(result.value)}")
        return SolvePayload(
            solver=self.name,
            prior=str(p),
            value=format_number(result.value),
            value_float=float(result.value),
            distribution=distribution_entries(result.distribution),
            used_no_information=result.used_no_information,
            unconstrained_bound=format_number(unconstrained),
            warnings=list(result.warnings),
        )
