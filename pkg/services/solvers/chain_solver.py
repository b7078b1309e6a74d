"""
Any number of mediators (or eps > 0): recursive feasible sets on the distribution lattice
"""
from models import LatticeInfo, SolvePayload
from services.solvers.base import BaseSolver, distribution_entries
from services.solvers.chain import solve_chain
from utils.numeric import format_number


class ChainSolver(BaseSolver):
    name = "chain"

    def solve(self) -> SolvePayload:
        problem = self.problem
        result = solve_chain(problem)
        lattice = None
        if result.lattice is not None:
            lattice = LatticeInfo(
                grid_size=result.lattice.grid.size,
                denominator=result.lattice.denominator,
                element_count=result.element_count,
                order_edges=result.order_edges,
                support_size=result.support_size,
            )
        return SolvePayload(
            solver=self.name,
            prior=str(problem.prior),
            value=format_number(result.value),
            value_float=float(result.value),
            distribution=distribution_entries(result.optimal_distribution),
            used_no_information=result.support_size == 1,
            feasible_set_cardinalities=result.cardinalities,
            naive_lower_bound=None if result.naive_lower_bound is None else format_number(result.naive_lower_bound),
            unconstrained_bound=format_number(result.unconstrained_bound),
            lattice=lattice,
        )
