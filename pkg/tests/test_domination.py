"""
Affine domination of pairs and sets, dominating partners and maximal supports
"""
import numpy as np
import pytest

from errors import InputError
from services.beliefs import Belief, BeliefGrid
from services.domination import (
    DominationQuery,
    check_collection,
    check_set,
    dominating_partners,
    maximal_dominating_supports,
    pair_gap,
    pairwise_domination_matrix,
)
from services.instances import random_piecewise_linear
from services.utility import Piece, UtilityFunction


def b(q):
    return Belief.binary(q)


def test_bump_pair_is_not_dominating(bump):
    u = bump.mediators[0]
    violation = DominationQuery(u, (b(0.2), b(0.8))).violation()
    assert violation is not None
    assert 0.2 < violation.mean.q < 0.8
    assert violation.gap < 0
    assert sum(violation.weights) == pytest.approx(1.0)


def test_identical_pair_dominates(bump):
    assert check_collection(bump.mediators[0], [b(0.3), b(0.3)])


def test_bump_partners(bump):
    u = bump.mediators[0]
    assert check_collection(u, [b(0.15), b(0.29)])
    assert not check_collection(u, [b(0.15), b(0.5)])
    partners = [float(p.q) for p in dominating_partners(u, b(0.15), bump.grid)]
    assert partners == sorted(partners)
    assert 0.15 in partners
    assert partners[0] == 0.0 and partners[-1] == 1.0
    below = [q for q in partners if q < 0.5]
    above = [q for q in partners if q > 0.5]
    assert max(below) == pytest.approx(0.29, abs=0.01)
    assert min(above) == pytest.approx(0.87, abs=0.01)


def test_pair_gap_uses_stationary_points():
    # chord from 0 to 1 of 4x(1-x) sits at 0, the dip is at 0.5 exactly
    u = UtilityFunction.piecewise([Piece(0.0, 1.0, (0.0, 4.0, -4.0))])
    gap, x = pair_gap(u, 0.0, 1.0, step=0.3)
    assert gap == pytest.approx(-1.0)
    assert x == pytest.approx(0.5)


def test_jump_is_seen_from_the_right():
    u = UtilityFunction.piecewise([Piece(0.0, 0.5, (0.0,)), Piece(0.5, 1.0, (1.0,))])
    assert not check_collection(u, [b(0.25), b(0.75)])
    assert check_collection(u, [b(0.0), b(0.5)])


def test_three_signals_set_checks(three_signals_float):
    u = three_signals_float.mediators[1]
    assert check_set(u, [b(0.0), b(0.5), b(1.0)])
    assert not check_set(u, [b(0.25), b(1.0)])
    assert check_set(u, [b(0.25)])


def test_three_signals_maximal_supports(three_signals_float):
    family = maximal_dominating_supports(three_signals_float.mediators[1], three_signals_float.grid)
    assert set(family.supports) == {(0, 1, 2), (0, 2, 3)}
    assert all(family.maximal)
    assert family.covers((0, 2))
    assert not family.covers((1, 3))
    assert [float(x.q) for x in family.beliefs(family.supports.index((0, 2, 3)))] == [0.0, 0.5, 1.0]


def test_supports_are_downward_closed(three_signals_float):
    u = three_signals_float.mediators[1]
    family = maximal_dominating_supports(u, three_signals_float.grid)
    for support in family.supports:
        points = family.beliefs(family.supports.index(support))
        for k in range(len(points)):
            assert check_set(u, points[:k] + points[k + 1:])


def test_set_and_pair_checks_agree(rng):
    for _ in range(100):
        u = random_piecewise_linear(rng)
        for _ in range(5):
            q1, q2 = sorted(rng.uniform(0, 1, 2))
            check_set(u, [b(q1), b(q2)], cross_check=True)


def test_pairwise_matrix_is_symmetric(bump):
    grid = BeliefGrid.uniform(0.05)
    matrix = pairwise_domination_matrix(bump.mediators[0], grid)
    assert np.array_equal(matrix, matrix.T)
    assert np.all(np.diag(matrix))
    assert not matrix.flags.writeable


def test_query_validation(bump):
    u = bump.mediators[0]
    with pytest.raises(InputError):
        DominationQuery(u, ())
    with pytest.raises(InputError):
        DominationQuery(u, (b(0.1), b(0.2)), step=0)


def test_constant_utility_has_one_support():
    grid = BeliefGrid.uniform(0.25)
    family = maximal_dominating_supports(UtilityFunction.constant(1.0), grid)
    assert family.supports == (tuple(range(grid.size)),)
    assert all(family.maximal)


def test_strictly_concave_utility_has_singleton_supports():
    grid = BeliefGrid.uniform(0.25)
    concave = UtilityFunction.piecewise([Piece(0.0, 1.0, (0.0, 1.0, -1.0))])
    family = maximal_dominating_supports(concave, grid)
    assert family.supports == tuple((g,) for g in range(grid.size))


def test_set_checks_follow_curvature(rng):
    convex = UtilityFunction.piecewise([Piece(0.0, 1.0, (0.0, 0.0, 1.0))])
    concave = UtilityFunction.piecewise([Piece(0.0, 1.0, (0.0, 1.0, -1.0))])
    for _ in range(20):
        qs = np.unique(rng.choice(np.arange(11), size=int(rng.integers(2, 6))) / 10)
        points = [b(q) for q in qs.tolist()]
        assert check_set(convex, points)
        assert check_set(concave, points[:1])
        if len(points) > 1:
            assert not check_set(concave, points)
