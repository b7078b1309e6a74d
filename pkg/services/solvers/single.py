"""
One-mediator persuasion: the sender's value is the concavification of v_S
restricted to affine-dominating posterior pairs of the mediator's utility
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from config import settings
from errors import HullError
from services.beliefs import Belief, BeliefGrid, FiniteBeliefDistribution
from services.domination import check_collection, pairwise_domination_matrix
from services.lp_kernel import LpProblem, LpStatus, solve_lp
from services.utility import UtilityFunction, expected_utility
from utils.numeric import Number

logger = logging.getLogger(__name__)

# Improvements at or below this size keep the earlier (simpler) candidate
IMPROVEMENT_EPS = 1e-12
# Upper bound on posterior tuples tried by the best-effort search with three or more states
TUPLE_CAP = 200_000


@dataclass(frozen=True)
class SingleSolveResult:
    value: Number
    posteriors: Tuple[Belief, ...]
    weights: Tuple[Number, ...]
    used_no_information: bool
    warnings: Tuple[str, ...] = ()

    @property
    def distribution(self) -> FiniteBeliefDistribution:
        return FiniteBeliefDistribution.create(list(self.posteriors), list(self.weights))


def _no_information(v_S: UtilityFunction, p: Belief, warnings=()) -> SingleSolveResult:
    one = Fraction(1) if p.exact else 1.0
    return SingleSolveResult(v_S.evaluate(p), (p,), (one,), True, tuple(warnings))


def solve_single(
    v_S: UtilityFunction,
    v_M: UtilityFunction,
    p: Belief,
    grid: BeliefGrid,
    domination: Optional[np.ndarray] = None,
) -> SingleSolveResult:
    """
    Best split of the prior into two grid posteriors q1 < p < q2 whose pair is
    affine dominating for v_M; no information (delta_p) is always a candidate
    """
    if not grid.hull_contains(p):
        raise HullError(f"Prior {p} lies outside the hull of the grid", prior=str(p))
    if p.states != 2:
        return _solve_tuples(v_S, v_M, p, grid)

    xs = grid.values
    matrix = pairwise_domination_matrix(v_M, grid) if domination is None else domination
    values = v_S.values_on(grid)
    x = float(p.q)
    base = float(v_S.evaluate(p))

    lower = np.nonzero(xs < x)[0]
    upper = np.nonzero(xs > x)[0]
    if len(lower) == 0 or len(upper) == 0:
        return _no_information(v_S, p)

    I, J = np.meshgrid(lower, upper, indexing="ij")
    I, J = I.ravel(), J.ravel()
    lam = (x - xs[I]) / (xs[J] - xs[I])
    candidates = (1 - lam) * values[I] + lam * values[J]
    candidates = np.where(matrix[I, J], candidates, -np.inf)

    best = float(np.max(candidates))
    if not best > base + IMPROVEMENT_EPS:
        return _no_information(v_S, p)
    k = int(np.nonzero(candidates >= best - IMPROVEMENT_EPS)[0][0])
    q1, q2 = grid.points[int(I[k])], grid.points[int(J[k])]

    if p.exact and q1.exact and q2.exact:
        weight = (Fraction(p.q) - q1.q) / (q2.q - q1.q)
        weights = (1 - weight, weight)
    else:
        weight = (x - float(q1.q)) / (float(q2.q) - float(q1.q))
        weights = (1.0 - weight, weight)
    value = weights[0] * v_S.evaluate(q1) + weights[1] * v_S.evaluate(q2)
    return SingleSolveResult(value, (q1, q2), weights, False)


def _solve_tuples(v_S: UtilityFunction, v_M: UtilityFunction, p: Belief, grid: BeliefGrid) -> SingleSolveResult:
    """Best-effort search over posterior tuples of size at most |Ω| on a coarse grid"""
    warning = (
        f"{p.states}-state single-mediator search is best effort over grid tuples "
        f"({grid.size} points); results depend on the grid"
    )
    logger.warning(warning)
    best = _no_information(v_S, p, [warning])
    best_value = float(best.value)
    coords = grid.coordinate_matrix
    target = np.append(p.as_array(), 1.0)
    tried = 0
    for size in range(2, p.states + 1):
        for combo in combinations(range(grid.size), size):
            tried += 1
            if tried > TUPLE_CAP:
                logger.warning(f"Stopped after {TUPLE_CAP} posterior tuples")
                return best
            system = np.vstack([coords[list(combo)].T, np.ones(size)])
            alphas, *_ = np.linalg.lstsq(system, target, rcond=None)
            if np.max(np.abs(system @ alphas - target)) > settings.feasibility_tol:
                continue
            if np.min(alphas) < -settings.feasibility_tol:
                continue
            posteriors = [grid.points[g] for g in combo]
            value = sum(float(a) * float(v_S.evaluate(b)) for a, b in zip(alphas, posteriors))
            if value > best_value + IMPROVEMENT_EPS and check_collection(v_M, posteriors):
                best_value = value
                weights = tuple(float(max(a, 0.0)) for a in alphas)
                best = SingleSolveResult(value, tuple(posteriors), weights, False, (warning,))
    return best


@dataclass(frozen=True)
class Contraction:
    """Best mean-preserving contraction of a distribution for one utility"""
    value: Number
    distribution: FiniteBeliefDistribution


def best_contraction(
    mu: FiniteBeliefDistribution, v_M: UtilityFunction, grid: BeliefGrid
) -> Contraction:
    """
    max E_nu[v_M] over nu supported on the grid (and mu's support) with nu ⪯ mu

    Variables pi(y, i) move mass of mu's point x_i to the garbled belief y;
    column sums reproduce mu and each y is the mean of the mass sent to it.
    """
    points = sorted(set(grid.points) | set(mu.support))
    rational = mu.exact and all(b.exact for b in points) and v_M.exact
    I, K = len(mu), len(points)
    values = [v_M.evaluate(y) for y in points]
    zero = Fraction(0) if rational else 0.0

    objective = [values[k] for k in range(K) for _ in range(I)]
    rows, rhs = [], []
    for i in range(I):
        row = [zero] * (K * I)
        for k in range(K):
            row[k * I + i] = 1
        rows.append(row)
        rhs.append(mu.weights[i])
    for k, y in enumerate(points):
        for c in range(mu.states - 1):
            row = [zero] * (K * I)
            for i, x in enumerate(mu.support):
                row[k * I + i] = x.point[c] - y.point[c]
            rows.append(row)
            rhs.append(zero)

    result = solve_lp(LpProblem(objective, rows, rhs, rational=rational))
    if result.status != LpStatus.OPTIMAL:
        # nu = mu is always feasible
        logger.warning(f"Best-contraction LP returned {result.status.value}; falling back to mu")
        return Contraction(expected_utility(v_M, mu), mu)
    mass = [sum(result.solution[k * I + i] for i in range(I)) for k in range(K)]
    nu = FiniteBeliefDistribution.create(
        points, mass, normalize=not rational, drop_below=0 if rational else 1e-12
    )
    return Contraction(result.value, nu)


def membership_M_eps(
    mu: FiniteBeliefDistribution, v_M: UtilityFunction, grid: BeliefGrid, eps: Number
) -> bool:
    """True iff no contraction of mu raises the mediator's expected utility by more than eps"""
    best = best_contraction(mu, v_M, grid)
    own = expected_utility(v_M, mu)
    slack = 0 if isinstance(best.value, Fraction) and isinstance(own, Fraction) else settings.membership_slack
    return own >= best.value - eps - slack


def sweep_single(
    v_S: UtilityFunction,
    v_M: UtilityFunction,
    prior_grid: BeliefGrid,
    grid: BeliefGrid,
) -> List[Tuple[Belief, Number]]:
    """The one-mediator value at every prior of prior_grid"""
    matrix = pairwise_domination_matrix(v_M, grid) if grid.states == 2 else None
    return [(p, solve_single(v_S, v_M, p, grid, matrix).value) for p in prior_grid.points]
