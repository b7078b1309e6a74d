"""
Chain of n mediators on the finite distribution lattice

M_{n+1} is the whole lattice and M_i keeps the elements of M_{i+1} that
mediator i cannot improve on by more than eps through a garbling inside
M_{i+1}. The sender's value is the best expected v_S over M_1.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from config import settings
from errors import InconsistencyError, UnsupportedStatesError
from services.beliefs import DistributionLattice, FiniteBeliefDistribution, enumerate_lattice
from services.domination import check_set, pairwise_domination_matrix
from services.solvers.poset_game import PosetGame, feasible_levels
from services.solvers.problem import ChainProblem
from services.utility import UtilityFunction, concavify_unconstrained, upper_envelope_support
from utils.numeric import Number

logger = logging.getLogger(__name__)

# Bound checks on results allow this much float error
BOUND_TOL = 1e-9


@dataclass(frozen=True)
class ExclusionWitness:
    """Element excluded at `level` because mediator `level` gains `gain` by moving to `deviation`"""
    level: int
    element: int
    deviation: int
    gain: Number


@dataclass(frozen=True, eq=False)
class FeasibleSets:
    masks: Tuple[np.ndarray, ...]
    witnesses: Tuple[ExclusionWitness, ...]

    @property
    def levels(self) -> int:
        """n + 1"""
        return len(self.masks)

    def level(self, i: int) -> np.ndarray:
        """Membership mask of M_i, i = 1..n+1"""
        return self.masks[i - 1]

    def cardinalities(self) -> List[int]:
        return [int(m.sum()) for m in self.masks]

    def witness_for(self, element: int) -> Optional[ExclusionWitness]:
        return next((w for w in self.witnesses if w.element == element), None)


def _slack(lattice: DistributionLattice) -> Number:
    return 0 if lattice.rational else settings.membership_slack


def mediator_values(lattice: DistributionLattice, u: UtilityFunction) -> np.ndarray:
    return lattice.expected_values(u.values_on(lattice.grid, rational=lattice.rational))


def compute_feasible_sets(
    lattice: DistributionLattice, mediators: List[UtilityFunction], eps: Number
) -> FeasibleSets:
    utilities = [mediator_values(lattice, m) for m in mediators]
    masks, found = feasible_levels(lattice.order, utilities, eps, _slack(lattice))
    witnesses = tuple(ExclusionWitness(w.level, w.element, w.deviation, w.gain) for w in found)
    sets = FeasibleSets(tuple(masks), witnesses)
    logger.info(f"Feasible set sizes M_1..M_{len(masks)}: {sets.cardinalities()}")
    return sets


def build_lattice(problem: ChainProblem) -> DistributionLattice:
    if problem.n >= 2 and problem.states != 2:
        raise UnsupportedStatesError(
            "Chains of two or more mediators are solved for two states only", states=problem.states
        )
    problem.require_prior_on_grid()
    return enumerate_lattice(
        problem.grid,
        problem.denominator,
        problem.prior,
        include_full_information=problem.include_full_information,
    )


def to_poset_game(
    lattice: DistributionLattice, sender: UtilityFunction, mediators: List[UtilityFunction]
) -> PosetGame:
    """Lattice elements as positions, expected utilities as payoffs, full information as the start"""
    utilities = tuple(mediator_values(lattice, u) for u in [sender, *mediators])
    return PosetGame(lattice.order, utilities, lattice.full_information_index)


@dataclass(frozen=True, eq=False)
class ChainSolveResult:
    value: Number
    optimal_distribution: FiniteBeliefDistribution
    optimal_index: Optional[int]
    feasible_sets: Optional[FeasibleSets]
    lattice: Optional[DistributionLattice]
    naive_lower_bound: Optional[Number]
    unconstrained_bound: Number

    @property
    def cardinalities(self) -> List[int]:
        return self.feasible_sets.cardinalities() if self.feasible_sets else []

    @property
    def element_count(self) -> int:
        return self.lattice.size if self.lattice else 0

    @property
    def order_edges(self) -> int:
        return self.lattice.edge_count if self.lattice else 0

    @property
    def support_size(self) -> int:
        return len(self.optimal_distribution)


def naive_lower_bound(
    lattice: DistributionLattice, sender_values: np.ndarray, mediators: List[UtilityFunction]
) -> Tuple[Number, int]:
    """
    Best sender value over elements whose support is affine dominating for
    every mediator at once; always a lower bound on the chain value

    On a rational lattice domination is decided exactly against the
    lattice: no element below the candidate may raise any mediator's
    expected utility.
    """
    if lattice.rational:
        utilities = [mediator_values(lattice, m) for m in mediators]

        def passes_element(e):
            below = lattice.order[:, e]
            return all(np.all(vals[below] <= vals[e]) for vals in utilities)
    elif lattice.grid.states == 2:
        matrices = [pairwise_domination_matrix(m, lattice.grid) for m in mediators]

        def passes_element(e):
            idx = np.array(lattice.support_indices(e))
            return all(np.all(mat[np.ix_(idx, idx)]) for mat in matrices)
    else:
        def passes_element(e):
            points = [lattice.grid.points[g] for g in lattice.support_indices(e)]
            return all(check_set(m, points) for m in mediators)

    best_index = None
    for e in range(lattice.size):
        if best_index is not None and not sender_values[e] > sender_values[best_index]:
            continue
        if passes_element(e):
            best_index = e
    return sender_values[best_index], best_index


def solve_chain(problem: ChainProblem) -> ChainSolveResult:
    p = problem.prior.belief
    unconstrained = concavify_unconstrained(problem.sender, problem.grid, p)
    if problem.n == 0:
        return ChainSolveResult(
            value=unconstrained,
            optimal_distribution=upper_envelope_support(problem.sender, problem.grid, p),
            optimal_index=None,
            feasible_sets=None,
            lattice=None,
            naive_lower_bound=None,
            unconstrained_bound=unconstrained,
        )

    lattice = build_lattice(problem)
    mediators = list(problem.mediators)
    sets = compute_feasible_sets(lattice, mediators, problem.eps)
    sender_values = mediator_values(lattice, problem.sender)

    candidates = np.nonzero(sets.level(1))[0]
    k = int(np.argmax(sender_values[candidates]))
    best = int(candidates[k])
    value = sender_values[best]
    naive, _ = naive_lower_bound(lattice, sender_values, mediators)

    no_information = problem.sender.evaluate(p)
    if value > unconstrained + BOUND_TOL or value < naive - BOUND_TOL or value < no_information - BOUND_TOL:
        raise InconsistencyError(
            "Chain value violates its bounds",
            value=float(value), unconstrained=float(unconstrained),
            naive_lower_bound=float(naive), no_information=float(no_information),
        )
    logger.info(f"Chain value {float(value):.12g} at element {best} of {lattice.size}")
    return ChainSolveResult(
        value=value,
        optimal_distribution=lattice.elements[best],
        optimal_index=best,
        feasible_sets=sets,
        lattice=lattice,
        naive_lower_bound=naive,
        unconstrained_bound=unconstrained,
    )
