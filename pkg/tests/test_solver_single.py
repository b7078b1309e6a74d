"""
One-mediator solver: dominating splits, M^eps membership and prior sweeps
"""
from fractions import Fraction

import numpy as np
import pytest

from errors import HullError
from services.beliefs import Belief, BeliefGrid, FiniteBeliefDistribution, mean
from services.domination import check_collection
from services.instances import random_piecewise_linear
from services.solvers.single import best_contraction, membership_M_eps, solve_single, sweep_single
from services.utility import Piece, UtilityFunction, concavify_unconstrained, expected_utility

TOL = 1e-9


def test_bump_optimal_split(bump):
    p = bump.prior.belief
    result = solve_single(bump.sender, bump.mediators[0], p, bump.grid)
    assert not result.used_no_information
    q1, q2 = (float(b.q) for b in result.posteriors)
    assert q1 == pytest.approx(0.14, abs=0.01)
    assert q2 == pytest.approx(0.80, abs=0.01)
    assert check_collection(bump.mediators[0], list(result.posteriors))
    assert float(mean(result.distribution).q) == pytest.approx(0.5, abs=TOL)
    expected = sum(w * bump.sender.evaluate(b) for b, w in zip(result.posteriors, result.weights))
    assert result.value == pytest.approx(expected, abs=TOL)


@pytest.mark.parametrize("prior", [0.1, 0.2, 0.27, 0.8, 0.9])
def test_bump_no_information_region(bump, prior):
    result = solve_single(bump.sender, bump.mediators[0], Belief.binary(prior), bump.grid)
    assert result.used_no_information
    assert result.value == pytest.approx(bump.sender.evaluate(Belief.binary(prior)))


@pytest.mark.parametrize("prior", [0.3, 0.5, 0.7, 0.78])
def test_bump_revealing_region(bump, prior):
    result = solve_single(bump.sender, bump.mediators[0], Belief.binary(prior), bump.grid)
    assert not result.used_no_information
    assert result.value > bump.sender.evaluate(Belief.binary(prior))


def test_dummy_mediator_matches_concavification(dummy):
    for prior in np.linspace(0, 1, 11):
        p = Belief.binary(float(prior))
        value = solve_single(dummy.sender, dummy.mediators[0], p, dummy.grid).value
        assert value == pytest.approx(concavify_unconstrained(dummy.sender, dummy.grid, p), abs=TOL)


def test_full_revelation_single_mediator_value(full_revelation):
    result = solve_single(full_revelation.sender, full_revelation.mediators[0], full_revelation.prior.belief, full_revelation.grid)
    assert result.value == pytest.approx(1 / 3)
    assert result.value <= 0.6
    assert [float(b.q) for b in result.posteriors] == [0.25, 1.0]


def test_exact_weights(three_signals):
    result = solve_single(three_signals.sender, three_signals.mediators[1], three_signals.prior.belief, three_signals.grid)
    assert all(isinstance(w, Fraction) for w in result.weights)
    assert sum(result.weights) == 1


def test_prior_outside_grid():
    grid = BeliefGrid.explicit([0.2, 0.6])
    u = UtilityFunction.sampled(grid, [0.0, 1.0])
    with pytest.raises(HullError):
        solve_single(u, u, Belief.binary(0.9), grid)


def test_never_above_unconstrained(rng):
    grid = BeliefGrid.uniform(0.05)
    priors = BeliefGrid.uniform(0.1)
    for _ in range(200):
        v_S = random_piecewise_linear(rng, name="sender")
        v_M = random_piecewise_linear(rng, name="mediator")
        for p, value in sweep_single(v_S, v_M, priors, grid):
            assert value <= concavify_unconstrained(v_S, grid, p) + TOL
            assert value >= v_S.evaluate(p) - TOL


def test_concave_sender_reveals_nothing(rng):
    v_S = UtilityFunction.piecewise([Piece(0.0, 1.0, (0.0, 1.0, -1.0))])
    grid = BeliefGrid.uniform(0.05)
    v_M = random_piecewise_linear(rng)
    for p, value in sweep_single(v_S, v_M, BeliefGrid.uniform(0.1), grid):
        assert value == pytest.approx(v_S.evaluate(p), abs=TOL)


def test_best_contraction_and_membership(three_signals):
    v_M = three_signals.mediators[1]
    points = [Belief.binary(q, rational=True) for q in (0, "1/2", 1)]
    # v_M2 is 1 on {0, 1/2, 1}; no garbling of this support beats it
    mu = FiniteBeliefDistribution.create(points, [Fraction(2, 3), Fraction(1, 6), Fraction(1, 6)])
    assert membership_M_eps(mu, v_M, three_signals.grid, 0)
    spread = FiniteBeliefDistribution.create(
        [Belief.binary("1/4", rational=True), Belief.binary(1, rational=True)], [Fraction(2, 3), Fraction(1, 3)]
    )
    best = best_contraction(spread, v_M, three_signals.grid)
    assert expected_utility(v_M, spread) == Fraction(1, 3)
    assert best.value > Fraction(1, 3)
    assert mean(best.distribution) == mean(spread)
    assert not membership_M_eps(spread, v_M, three_signals.grid, 0)
    assert membership_M_eps(spread, v_M, three_signals.grid, best.value - Fraction(1, 3))


def test_bump_split_is_in_m_eps(bump):
    p = bump.prior.belief
    result = solve_single(bump.sender, bump.mediators[0], p, bump.grid)
    coarse = BeliefGrid.uniform(0.01).with_points(result.posteriors)
    # the chord touches the cosine bump, so allow for sampling error there
    assert membership_M_eps(result.distribution, bump.mediators[0], coarse, 1e-6)


def test_bump_symmetric_split_is_not_in_m_eps(bump):
    points = [Belief.binary(0.2), Belief.binary(0.8)]
    split = FiniteBeliefDistribution.create(points, [0.5, 0.5])
    assert not membership_M_eps(split, bump.mediators[0], BeliefGrid.uniform(0.01).with_points(points), 0)


def test_value_grows_as_grid_refines(bump):
    p = bump.prior.belief
    values = [
        solve_single(bump.sender, bump.mediators[0], p, BeliefGrid.uniform(step)).value
        for step in ("1/10", "1/20", "1/40", "1/80")
    ]
    assert all(a <= b + TOL for a, b in zip(values, values[1:]))
    assert values[-1] <= concavify_unconstrained(bump.sender, BeliefGrid.uniform("1/80"), p) + TOL
