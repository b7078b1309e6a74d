"""
No mediators: the sender's value is the concavification of v_S
"""
from models import SolvePayload
from services.solvers.base import BaseSolver, distribution_entries
from services.utility import concavify_unconstrained, upper_envelope_support
from utils.numeric import format_number


class DirectSolver(BaseSolver):
    name = "direct"

    def solve(self) -> SolvePayload:
        p = self.problem.prior.belief
        value = concavify_unconstrained(self.problem.sender, self.problem.grid, p)
        support = upper_envelope_support(self.problem.sender, self.problem.grid, p)
        self.logger.info(f"Unconstrained concavification at {p}: {format_number(value)}")
        return SolvePayload(
            solver=self.name,
            prior=str(p),
            value=format_number(value),
            value_float=float(value),
            distribution=distribution_entries(support),
            used_no_information=len(support) == 1,
            unconstrained_bound=format_number(value),
        )
