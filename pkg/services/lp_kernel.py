"""
Dense two-phase simplex kernel for the small linear programs the solvers need
(transport feasibility, envelope minimization, best-contraction search)

Pivoting follows Bland's rule with lowest-index tie-breaking, so identical
input always produces identical output. Exact mode runs the same tableau on
numpy object arrays of Fractions.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from errors import DimensionMismatchError, LpIterationLimitError
from utils import numeric
from utils.numeric import Number, as_array

logger = logging.getLogger(__name__)

# Column entries below this magnitude never serve as pivots in float mode
PIVOT_EPS = 1e-12


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True, eq=False)
class LpProblem:
    """
    maximize objective . x  subject to  eq_matrix x = eq_rhs,  lower <= x <= upper
    lower defaults to 0 for every variable; an upper entry of None means unbounded
    """
    objective: Sequence[Any]
    eq_matrix: Sequence[Sequence[Any]]
    eq_rhs: Sequence[Any]
    lower: Optional[Sequence[Any]] = None
    upper: Optional[Sequence[Optional[Any]]] = None
    rational: bool = False

    def __post_init__(self):
        n = len(self.objective)
        if len(self.eq_matrix) != len(self.eq_rhs):
            raise DimensionMismatchError(
                "Constraint matrix row count does not match right-hand side length",
                rows=len(self.eq_matrix), rhs=len(self.eq_rhs),
            )
        for i, row in enumerate(self.eq_matrix):
            if len(row) != n:
                raise DimensionMismatchError(
                    f"Constraint row {i} has {len(row)} columns, objective has {n}",
                    row=i, columns=len(row), expected=n,
                )
        if self.lower is not None and len(self.lower) != n:
            raise DimensionMismatchError("Lower bounds length does not match variable count",
                                         bounds=len(self.lower), expected=n)
        if self.upper is not None and len(self.upper) != n:
            raise DimensionMismatchError("Upper bounds length does not match variable count",
                                         bounds=len(self.upper), expected=n)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    @property
    def n_rows(self) -> int:
        return len(self.eq_rhs)


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    value: Optional[Number] = None
    solution: Tuple[Number, ...] = ()
    iterations: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL

    def max_violation(self, problem: LpProblem) -> float:
        """Largest absolute constraint or bound violation of the returned point"""
        if not self.solution:
            return 0.0
        x = np.array([float(v) for v in self.solution])
        worst = 0.0
        if problem.n_rows:
            A = np.array([[float(v) for v in row] for row in problem.eq_matrix])
            b = np.array([float(v) for v in problem.eq_rhs])
            worst = float(np.max(np.abs(A @ x - b)))
        lower = np.zeros(len(x)) if problem.lower is None else np.array([float(v) for v in problem.lower])
        worst = max(worst, float(np.max(np.maximum(lower - x, 0.0), initial=0.0)))
        if problem.upper is not None:
            for xj, uj in zip(x, problem.upper):
                if uj is not None:
                    worst = max(worst, float(xj) - float(uj))
        return worst


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] = tableau[row] / tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0
    tableau -= np.outer(factors, tableau[row])


def _run_simplex(
    tableau: np.ndarray,
    basis: List[int],
    cost: np.ndarray,
    allowed: int,
    opt_tol: Number,
    pivot_tol: Number,
    max_iterations: int,
    phase: str,
) -> Tuple[str, int]:
    """
    Minimize cost . x over the tableau in place
    Only the first `allowed` columns may enter the basis
    """
    n_cols = tableau.shape[1] - 1
    iterations = 0
    while True:
        if tableau.shape[0]:
            reduced = cost[:n_cols] - cost[basis] @ tableau[:, :n_cols]
        else:
            reduced = cost[:n_cols].copy()

        entering = next((j for j in range(allowed) if reduced[j] < -opt_tol), None)
        if entering is None:
            return "optimal", iterations

        column = tableau[:, entering]
        rows = [i for i in range(tableau.shape[0]) if column[i] > pivot_tol]
        if not rows:
            return "unbounded", iterations

        ratios = [tableau[i, -1] / column[i] for i in rows]
        best = min(ratios)
        leaving = min(
            (i for i, r in zip(rows, ratios) if r <= best),
            key=lambda i: basis[i],
        )
        _pivot(tableau, leaving, entering)
        basis[leaving] = entering

        iterations += 1
        if iterations > max_iterations:
            raise LpIterationLimitError(
                f"Simplex {phase} exceeded {max_iterations} pivots",
                iterations=iterations, phase=phase,
            )


def solve_lp(
    problem: LpProblem,
    max_iterations: Optional[int] = None,
    tol: Optional[float] = None,
) -> LpResult:
    """
    Solve a small dense LP with the two-phase simplex method
    Returns a vertex solution when a finite optimum exists
    """
    rational = problem.rational
    max_iterations = max_iterations or settings.lp_max_iterations
    if rational:
        feas_tol: Number = Fraction(0)
        pivot_tol: Number = Fraction(0)
    else:
        feas_tol = settings.feasibility_tol if tol is None else tol
        pivot_tol = PIVOT_EPS

    n = problem.n_vars
    m = problem.n_rows
    dtype = object if rational else float

    c = as_array(problem.objective, rational)
    b = as_array(problem.eq_rhs, rational)
    A = np.zeros((m, n), dtype=dtype) if not rational else np.full((m, n), Fraction(0), dtype=object)
    for i, row in enumerate(problem.eq_matrix):
        A[i] = as_array(row, rational)
    lower = as_array(problem.lower, rational) if problem.lower is not None else as_array([0] * n, rational)

    # Shift x = lower + y so every variable is nonnegative
    if m:
        b = b - A @ lower

    upper_rows = []
    if problem.upper is not None:
        for j, ub in enumerate(problem.upper):
            if ub is None:
                continue
            span = (Fraction(ub) if rational else float(ub)) - lower[j]
            if span < -feas_tol:
                return LpResult(LpStatus.INFEASIBLE)
            upper_rows.append((j, span))

    k = len(upper_rows)
    n_std = n + k
    m_std = m + k
    zero, one = numeric.zero(rational), numeric.one(rational)

    A_std = np.full((m_std, n_std), zero, dtype=dtype)
    b_std = np.full(m_std, zero, dtype=dtype)
    if m:
        A_std[:m, :n] = A
        b_std[:m] = b
    for r, (j, span) in enumerate(upper_rows):
        A_std[m + r, j] = one
        A_std[m + r, n + r] = one
        b_std[m + r] = span if span > 0 else zero

    for i in range(m_std):
        if b_std[i] < 0:
            A_std[i] = -A_std[i]
            b_std[i] = -b_std[i]

    # Phase one: artificial basis, minimize the artificial sum
    tableau = np.full((m_std, n_std + m_std + 1), zero, dtype=dtype)
    tableau[:, :n_std] = A_std
    for i in range(m_std):
        tableau[i, n_std + i] = one
    tableau[:, -1] = b_std
    basis = [n_std + i for i in range(m_std)]

    cost_one = np.full(n_std + m_std, zero, dtype=dtype)
    cost_one[n_std:] = one
    _, it_one = _run_simplex(tableau, basis, cost_one, n_std + m_std, feas_tol, pivot_tol,
                             max_iterations, "phase one")
    infeasibility = sum((tableau[i, -1] for i in range(m_std) if basis[i] >= n_std), zero)
    if infeasibility > feas_tol:
        logger.debug(f"LP infeasible: residual artificial mass {float(infeasibility):.3e}")
        return LpResult(LpStatus.INFEASIBLE, iterations=it_one)

    # Drive remaining artificials out of the basis, dropping redundant rows
    redundant = []
    for i in range(m_std):
        if basis[i] < n_std:
            continue
        col = next((j for j in range(n_std) if abs(tableau[i, j]) > pivot_tol), None)
        if col is None:
            redundant.append(i)
        else:
            _pivot(tableau, i, col)
            basis[i] = col
    if redundant:
        keep = [i for i in range(m_std) if i not in redundant]
        tableau = tableau[keep]
        basis = [basis[i] for i in keep]
    tableau = np.delete(tableau, np.s_[n_std:n_std + m_std], axis=1)

    # Phase two on the original objective (minimize its negation)
    cost_two = np.full(n_std, zero, dtype=dtype)
    cost_two[:n] = -c
    status, it_two = _run_simplex(tableau, basis, cost_two, n_std, feas_tol, pivot_tol,
                                  max_iterations, "phase two")
    iterations = it_one + it_two
    if status == "unbounded":
        return LpResult(LpStatus.UNBOUNDED, iterations=iterations)

    y = np.full(n_std, zero, dtype=dtype)
    for i, j in enumerate(basis):
        y[j] = tableau[i, -1]
    x = lower + y[:n]
    if not rational:
        x = np.where(np.abs(x) < PIVOT_EPS, 0.0, x)
    value = sum((c[j] * x[j] for j in range(n)), zero)
    solution = tuple(Fraction(v) if rational else float(v) for v in x)
    return LpResult(LpStatus.OPTIMAL, value if rational else float(value), solution, iterations)


def check_feasible(
    eq_matrix: Sequence[Sequence[Any]],
    eq_rhs: Sequence[Any],
    lower: Optional[Sequence[Any]] = None,
    upper: Optional[Sequence[Optional[Any]]] = None,
    rational: bool = False,
    tol: Optional[float] = None,
) -> bool:
    """True iff the system has a solution within the bounds (phase one of solve_lp)"""
    n = len(eq_matrix[0]) if len(eq_matrix) else (len(lower) if lower is not None else 0)
    problem = LpProblem(
        objective=[0] * n,
        eq_matrix=eq_matrix,
        eq_rhs=eq_rhs,
        lower=lower,
        upper=upper,
        rational=rational,
    )
    return solve_lp(problem, tol=tol).status != LpStatus.INFEASIBLE
