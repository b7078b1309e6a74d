"""
Chains of mediators on the distribution lattice
"""
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from errors import UnsupportedStatesError
from services.beliefs import Belief, BeliefGrid, FiniteBeliefDistribution, Prior
from services.instances import random_chain_problem, random_three_point_problem
from services.solvers.chain import build_lattice, mediator_values, naive_lower_bound, solve_chain, to_poset_game
from services.solvers.poset_game import poset_game_value, verify_backward_induction
from services.solvers.single import solve_single
from services.utility import UtilityFunction
from utils.problem_loader import load_problem

F = Fraction
TOL = 1e-9


def test_three_signals_optimum(three_signals):
    result = solve_chain(three_signals)
    assert result.value == 1
    optimal = result.optimal_distribution
    assert [b.q for b in optimal.support] == [0, F(1, 2), 1]
    assert optimal.weights == (F(2, 3), F(1, 6), F(1, 6))
    assert result.support_size == 3
    assert result.cardinalities[0] == 3
    assert result.element_count == 7
    assert result.naive_lower_bound <= result.value <= result.unconstrained_bound


def test_three_signals_exclusion_witness(problems_dir):
    problem = load_problem(problems_dir / "three_signals_two_mediators.json", rational=True, denominator=12)
    result = solve_chain(problem)
    lattice, sets = result.lattice, result.feasible_sets
    grid = problem.grid
    mu = FiniteBeliefDistribution.create(
        [grid.points[0], grid.points[2], grid.points[3]], [F(7, 12), F(4, 12), F(1, 12)]
    )
    e = lattice.find(mu)
    assert e is not None
    assert sets.level(2)[e] and not sets.level(1)[e]
    witness = sets.witness_for(e)
    assert witness.level == 1
    assert witness.gain == F(1, 2)
    assert witness.deviation == lattice.point_mass_index(Belief.binary("1/4", rational=True))


def test_full_revelation_optimum(full_revelation):
    result = solve_chain(full_revelation)
    assert result.value == pytest.approx(1.0)
    assert [float(b.q) for b in result.optimal_distribution.support] == [0.0, 1.0]
    assert result.optimal_index == result.lattice.full_information_index


def test_no_mediators_is_concavification(bump):
    direct = solve_chain(bump.with_mediators(0))
    assert direct.lattice is None and direct.feasible_sets is None
    assert direct.value == pytest.approx(4.0, abs=0.01)


def test_random_chain_invariants(rng):
    for _ in range(40):
        problem = random_chain_problem(rng, mediators=int(rng.integers(1, 4)))
        result = solve_chain(problem)
        lattice, sets = result.lattice, result.feasible_sets
        assert sets.levels == problem.n + 1
        assert sets.level(problem.n + 1).all()
        for i in range(1, problem.n + 1):
            assert not np.any(sets.level(i) & ~sets.level(i + 1))
        delta_p = lattice.point_mass_index(problem.prior.belief)
        assert sets.level(1)[delta_p]
        assert result.value >= problem.sender.evaluate(problem.prior.belief) - TOL
        assert result.naive_lower_bound - TOL <= result.value <= result.unconstrained_bound + TOL
        assert sets.level(1)[result.optimal_index]


def test_value_grows_with_eps(rng):
    # gains of the last mediator are multiples of 1/Q >= 1/4, so only M_1 moves
    for _ in range(20):
        problem = random_chain_problem(rng, mediators=2)
        values = [solve_chain(replace(problem, eps=e)).value for e in (0, 0.05, 0.1, 0.2)]
        assert all(a <= b + TOL for a, b in zip(values, values[1:]))


def test_one_mediator_matches_single_solver(rng):
    for _ in range(50):
        problem = random_three_point_problem(rng)
        a, p, c = (float(b.q) for b in problem.grid.points)
        chain = solve_chain(problem).value
        single = solve_single(problem.sender, problem.mediators[0], problem.prior.belief, problem.grid)
        weight = F(round(p * 20) - round(a * 20), round(c * 20) - round(a * 20))
        if (weight * problem.denominator).denominator == 1 or single.used_no_information:
            assert chain == pytest.approx(single.value, abs=1e-6)
        else:
            assert problem.sender.evaluate(problem.prior.belief) - TOL <= chain <= single.value + TOL


def test_chain_needs_two_states():
    mesh = BeliefGrid.simplex_mesh(2, states=3)
    flat = UtilityFunction.constant(0.0, 3)
    problem = replace(
        random_chain_problem(np.random.default_rng(0)),
        sender=flat, mediators=(flat, flat),
        prior=Prior.of([0.5, 0.5, 0.0], 3), grid=mesh,
    )
    with pytest.raises(UnsupportedStatesError):
        build_lattice(problem)


@pytest.mark.parametrize("fixture", ["full_revelation", "three_signals", "three_signals_float"])
def test_verifier_agrees(fixture, request):
    problem = request.getfixturevalue(fixture)
    result = solve_chain(problem)
    game = to_poset_game(result.lattice, problem.sender, list(problem.mediators))
    game.validate()
    value, _ = poset_game_value(game, problem.eps)
    assert value == result.value
    assert verify_backward_induction(game, problem.eps) == result.value


def test_float_third_prior_end_to_end(full_revelation):
    problem = replace(
        full_revelation,
        grid=BeliefGrid.uniform("1/3"), denominator=3, prior=Prior.of(1 / 3),
    )
    result = solve_chain(problem)
    assert result.lattice.size == 3
    assert result.lattice.full_information_index is not None
    game = to_poset_game(result.lattice, problem.sender, list(problem.mediators))
    game.validate()
    assert verify_backward_induction(game, problem.eps) == pytest.approx(result.value, abs=TOL)


def test_rational_naive_bound_is_exact(three_signals):
    lattice = build_lattice(three_signals)
    mediators = list(three_signals.mediators)
    sender_values = mediator_values(lattice, three_signals.sender)
    bound, index = naive_lower_bound(lattice, sender_values, mediators)
    assert isinstance(bound, Fraction)
    assert bound <= solve_chain(three_signals).value
    for m in mediators:
        values = mediator_values(lattice, m)
        assert np.all(values[lattice.order[:, index]] <= values[index])
    # the no-information element has nothing below it
    bottom = lattice.point_mass_index(three_signals.prior.belief)
    assert np.nonzero(lattice.order[:, bottom])[0].tolist() == [bottom]


def test_naive_bound_with_indifferent_mediators(three_signals):
    flat = UtilityFunction.constant(0, 2)
    problem = replace(three_signals, mediators=(flat, flat))
    lattice = build_lattice(problem)
    sender_values = mediator_values(lattice, problem.sender)
    bound, _ = naive_lower_bound(lattice, sender_values, [flat, flat])
    assert bound == max(sender_values) == solve_chain(problem).value
