"""
Base abstract class for persuasion solvers
Following Strategy Pattern: one solver per way of computing the sender's value
"""
import logging
from abc import ABC, abstractmethod
from typing import List

from models import DistributionEntry, SolvePayload
from services.beliefs import FiniteBeliefDistribution
from services.solvers.problem import ChainProblem
from utils.numeric import format_number


def distribution_entries(dist: FiniteBeliefDistribution) -> List[DistributionEntry]:
    return [
        DistributionEntry(
            belief=str(b),
            coords=[float(v) for v in b.coords],
            weight=format_number(w),
        )
        for b, w in zip(dist.support, dist.weights)
    ]


class BaseSolver(ABC):
    """
    Abstract base class for solvers
    Subclasses implement one characterization of the sender's optimal value
    """
    name = "base"

    def __init__(self, problem: ChainProblem):
        self.problem = problem
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def solve(self) -> SolvePayload:
        """
        Compute the sender's value and an optimal belief distribution
        Must be implemented by subclasses
        """
        pass

    def describe(self) -> str:
        p = self.problem
        return (
            f"{self.name}: n={p.n}, prior={p.prior}, grid={p.grid.size} points ({p.grid.resolution}), "
            f"Q={p.denominator}, eps={format_number(p.eps)}"
        )
