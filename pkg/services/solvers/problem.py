"""
The mediated persuasion problem: sender, a chain of mediators, prior and lattice parameters
"""
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from errors import ContinuityError, DimensionMismatchError, InputError, PriorNotRepresentableError
from services.beliefs import BeliefGrid, Prior
from services.utility import UtilityFunction
from utils.numeric import Number


@dataclass(frozen=True, eq=False)
class ChainProblem:
    """
    Sender S -> M_1 -> ... -> M_n -> receiver
    With n = 0 the sender persuades the receiver directly.
    """
    sender: UtilityFunction
    mediators: Tuple[UtilityFunction, ...]
    prior: Prior
    grid: BeliefGrid
    denominator: int
    eps: Number = 0
    rational: bool = False
    include_full_information: bool = True
    description: str = ""

    def __post_init__(self):
        if self.eps < 0:
            raise InputError(f"eps must be nonnegative, got {self.eps}")
        if self.denominator < 1:
            raise InputError(f"Denominator must be a positive integer, got {self.denominator}")
        states = self.prior.states
        for role, u in [("sender", self.sender)] + [(f"mediator {i + 1}", m) for i, m in enumerate(self.mediators)]:
            if u.states != states:
                raise DimensionMismatchError(
                    f"{role} utility has {u.states} states, prior has {states}", role=role
                )
        if self.grid.states != states:
            raise DimensionMismatchError(
                f"Grid has {self.grid.states} states, prior has {states}", grid=self.grid.states
            )
        if self.eps == 0:
            broken = [i + 1 for i, m in enumerate(self.mediators) if not m.continuous]
            if broken:
                raise ContinuityError(
                    f"eps = 0 needs continuous mediator utilities; mediators {broken} are not",
                    mediators=broken, hint="pass a positive eps",
                )

    @property
    def n(self) -> int:
        return len(self.mediators)

    @property
    def states(self) -> int:
        return self.prior.states

    def with_mediators(self, count: Optional[int]) -> "ChainProblem":
        """The same problem keeping only the first `count` mediators"""
        if count is None:
            return self
        if not 0 <= count <= self.n:
            raise InputError(f"Mediator count must lie in [0, {self.n}], got {count}")
        return replace(self, mediators=self.mediators[:count])

    def with_prior(self, prior: Prior) -> "ChainProblem":
        return replace(self, prior=prior)

    def require_prior_on_grid(self) -> int:
        """Grid index of the prior; lattice runs need delta_p as an element"""
        index = self.grid.index_of(self.prior.belief, tol=None if self.rational else 1e-12)
        if index is None:
            raise PriorNotRepresentableError(
                f"Prior {self.prior} is not representable: it is not a point of the grid",
                prior=str(self.prior), denominator=self.denominator,
                hint="add the prior to the grid or choose a grid step that hits it",
            )
        return index
