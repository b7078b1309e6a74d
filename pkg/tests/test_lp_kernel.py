"""
Dense simplex kernel, checked against hand-solved programs and scipy's linprog
"""
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from errors import DimensionMismatchError, LpIterationLimitError
from services.lp_kernel import LpProblem, LpStatus, check_feasible, solve_lp

TOL = 1e-9


def test_textbook_maximum():
    # max 3x + 2y  s.t.  x + y + s1 = 4,  x + 3y + s2 = 6
    problem = LpProblem([3, 2, 0, 0], [[1, 1, 1, 0], [1, 3, 0, 1]], [4, 6])
    result = solve_lp(problem)
    assert result.status == LpStatus.OPTIMAL
    assert result.value == pytest.approx(12.0)
    assert result.solution[0] == pytest.approx(4.0)
    assert result.max_violation(problem) <= TOL


def test_value_matches_solution():
    problem = LpProblem([1, -2, 3], [[1, 1, 1]], [1], upper=[None, None, 0.5])
    result = solve_lp(problem)
    recomputed = sum(c * x for c, x in zip(problem.objective, result.solution))
    assert result.value == pytest.approx(recomputed, abs=TOL)
    assert result.value == pytest.approx(2.0)


def test_infeasible():
    result = solve_lp(LpProblem([1, 1], [[1, 1]], [-1]))
    assert result.status == LpStatus.INFEASIBLE
    assert not result.is_optimal


def test_unbounded():
    result = solve_lp(LpProblem([1, 0], [[1, -1]], [0]))
    assert result.status == LpStatus.UNBOUNDED


def test_bounds_without_rows():
    result = solve_lp(LpProblem([1, 1], [], [], upper=[1, 2]))
    assert result.value == pytest.approx(3.0)
    shifted = solve_lp(LpProblem([-1], [], [], lower=[1]))
    assert shifted.value == pytest.approx(-1.0)


def test_crossed_bounds_are_infeasible():
    result = solve_lp(LpProblem([1], [], [], lower=[2], upper=[1]))
    assert result.status == LpStatus.INFEASIBLE


def test_exact_mode_returns_fractions():
    result = solve_lp(LpProblem([1, 0], [[3, 3]], [1], rational=True))
    assert result.value == Fraction(1, 3)
    assert all(isinstance(v, Fraction) for v in result.solution)


def test_redundant_rows():
    result = solve_lp(LpProblem([1, 1], [[1, 1], [2, 2]], [1, 2]))
    assert result.status == LpStatus.OPTIMAL
    assert result.value == pytest.approx(1.0)


def test_iteration_limit():
    problem = LpProblem([3, 2, 0, 0], [[1, 1, 1, 0], [1, 3, 0, 1]], [4, 6])
    with pytest.raises(LpIterationLimitError) as info:
        solve_lp(problem, max_iterations=1)
    assert info.value.detail["iterations"] == 2


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        LpProblem([1, 1], [[1, 1, 1]], [1])
    with pytest.raises(DimensionMismatchError):
        LpProblem([1, 1], [[1, 1]], [1, 2])


def test_check_feasible():
    assert check_feasible([[1, 1]], [1])
    assert not check_feasible([[1, 1]], [1], upper=[0.2, 0.3])
    assert check_feasible([[1, 1]], [1], rational=True)


@pytest.mark.parametrize("seed", range(25))
def test_agrees_with_linprog(seed):
    rng = np.random.default_rng(seed)
    m, n = 3, 6
    A = rng.uniform(-1, 1, size=(m, n))
    b = A @ rng.uniform(0, 5, size=n)
    c = rng.uniform(-1, 1, size=n)
    ours = solve_lp(LpProblem(c.tolist(), A.tolist(), b.tolist(), upper=[10.0] * n))
    theirs = linprog(-c, A_eq=A, b_eq=b, bounds=[(0, 10)] * n, method="highs")
    assert theirs.status == 0
    assert ours.status == LpStatus.OPTIMAL
    assert ours.value == pytest.approx(-theirs.fun, abs=1e-7)
    assert ours.max_violation(LpProblem(c.tolist(), A.tolist(), b.tolist(), upper=[10.0] * n)) <= 1e-7


@pytest.mark.parametrize("scale", [0.5, 3.0, 1000.0])
def test_objective_scaling(scale):
    rng = np.random.default_rng(7)
    A = rng.uniform(-1, 1, size=(3, 6))
    b = A @ rng.uniform(0, 5, size=6)
    c = rng.uniform(-1, 1, size=6)
    base = solve_lp(LpProblem(c.tolist(), A.tolist(), b.tolist(), upper=[10.0] * 6))
    scaled = solve_lp(LpProblem((scale * c).tolist(), A.tolist(), b.tolist(), upper=[10.0] * 6))
    assert scaled.status == base.status == LpStatus.OPTIMAL
    assert scaled.value == pytest.approx(scale * base.value, rel=1e-9, abs=1e-9)
    assert np.allclose(scaled.solution, base.solution, atol=1e-9)


def test_repeated_solves_are_identical():
    rng = np.random.default_rng(11)
    A = rng.uniform(-1, 1, size=(4, 8))
    b = A @ rng.uniform(0, 2, size=8)
    problem = LpProblem(rng.uniform(-1, 1, size=8).tolist(), A.tolist(), b.tolist(), upper=[5.0] * 8)
    first, second = solve_lp(problem), solve_lp(problem)
    assert first.value == second.value
    assert list(first.solution) == list(second.solution)
    exact = LpProblem([3, 2, 0, 0], [[1, 1, 1, 0], [1, 3, 0, 1]], [4, 6], rational=True)
    assert solve_lp(exact).solution == solve_lp(exact).solution
