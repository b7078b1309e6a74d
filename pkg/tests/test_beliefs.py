"""
Beliefs, distributions, the convex order and the distribution lattice
"""
from fractions import Fraction

import numpy as np
import pytest

from errors import BeliefError, DimensionMismatchError, InputError, LatticeCapError, PriorNotRepresentableError
from services.beliefs import (
    Belief,
    BeliefGrid,
    FiniteBeliefDistribution,
    Prior,
    enumerate_lattice,
    full_information_distribution,
    is_contraction,
    is_contraction_1d,
    mean,
)

F = Fraction


def dist(pairs, rational=False):
    """[(q, w), ...] -> distribution"""
    return FiniteBeliefDistribution.create(
        [Belief.binary(q, rational) for q, _ in pairs], [w for _, w in pairs]
    )


def test_belief_validation():
    with pytest.raises(BeliefError):
        Belief.binary(1.5)
    with pytest.raises(BeliefError):
        Belief.from_coords([0.5, 0.6])
    with pytest.raises(DimensionMismatchError):
        Belief.from_coords([0.2, 0.3, 0.5]).q


def test_belief_views():
    b = Belief.from_coords(["1/2", "1/4", "1/4"], rational=True)
    assert b.point == (F(1, 4), F(1, 4))
    assert b.coords == (F(1, 2), F(1, 4), F(1, 4))
    assert b.exact
    assert str(Belief.binary("1/3", rational=True)) == "1/3"


def test_create_canonicalizes():
    d = dist([(0.5, 0.25), (0.0, 0.5), (0.5, 0.25)])
    assert [b.q for b in d.support] == [0.0, 0.5]
    assert d.weights == (0.5, 0.5)
    with pytest.raises(BeliefError):
        dist([(0.0, 0.5), (1.0, -0.5)])
    with pytest.raises(BeliefError):
        FiniteBeliefDistribution((Belief.binary(0.5),), (0.9,))


@pytest.mark.parametrize("pairs,expected", [
    ([(0, F(1, 2)), (1, F(1, 2))], F(1, 2)),
    ([("1/4", F(1))], F(1, 4)),
    ([(0, F(2, 3)), ("1/2", F(1, 6)), (1, F(1, 6))], F(1, 4)),
])
def test_mean(pairs, expected):
    assert mean(dist(pairs, rational=True)).q == expected


def test_contraction_examples():
    spread = dist([(0, F(1, 2)), (1, F(1, 2))], rational=True)
    point = dist([("1/2", F(1))], rational=True)
    assert is_contraction(point, spread)
    assert not is_contraction(spread, point)
    three = dist([(0, F(2, 3)), ("1/2", F(1, 6)), (1, F(1, 6))], rational=True)
    quarter = dist([("1/4", F(1))], rational=True)
    assert is_contraction(quarter, three)
    for nu, mu, expected in [(point, spread, True), (spread, point, False), (quarter, three, True)]:
        assert is_contraction_1d(nu, mu) == expected


def test_contraction_1d_examples():
    inner = dist([(0.25, 0.5), (0.75, 0.5)])
    outer = dist([(0.0, 0.5), (1.0, 0.5)])
    assert is_contraction_1d(inner, outer)
    assert is_contraction(inner, outer)
    shifted = dist([(0.1, 0.5), (0.5, 0.5)])
    assert not is_contraction_1d(shifted, outer)
    assert not is_contraction(shifted, outer)


def _random_distribution(rng, size):
    points = rng.choice(np.arange(21), size=size, replace=False) / 20
    counts = rng.integers(1, 10, size=size)
    return dist(list(zip(points.tolist(), (counts / counts.sum()).tolist())))


def _random_garbling(rng, mu):
    """Merge random groups of mu's support into their means"""
    labels = rng.integers(0, len(mu), size=len(mu))
    support, weights = [], []
    for label in np.unique(labels):
        members = np.nonzero(labels == label)[0]
        w = sum(mu.weights[i] for i in members)
        q = sum(mu.weights[i] * mu.support[i].q for i in members) / w
        support.append(Belief.binary(min(max(q, 0.0), 1.0)))
        weights.append(w)
    return FiniteBeliefDistribution.create(support, weights, normalize=True)


def test_convex_order_oracles_agree(rng):
    disagreements = 0
    for _ in range(500):
        mu = _random_distribution(rng, int(rng.integers(1, 7)))
        kind = rng.integers(0, 3)
        if kind == 0:
            nu = _random_garbling(rng, mu)
            pair = (nu, mu)
        elif kind == 1:
            nu = _random_garbling(rng, mu)
            pair = (mu, nu)
        else:
            pair = (_random_distribution(rng, int(rng.integers(1, 7))), mu)
        if is_contraction(*pair) != is_contraction_1d(*pair):
            disagreements += 1
        if kind == 0:
            assert is_contraction_1d(*pair)
    assert disagreements == 0


def test_contraction_three_states():
    center = Belief.from_coords(["1/3", "1/3", "1/3"], rational=True)
    vertices = [Belief.vertex(k, 3, rational=True) for k in range(3)]
    full = FiniteBeliefDistribution.create(vertices, [F(1, 3)] * 3)
    point = FiniteBeliefDistribution.point_mass(center)
    assert is_contraction(point, full)
    assert not is_contraction(full, point)


def test_grids():
    grid = BeliefGrid.uniform("1/4")
    assert grid.values.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert grid.contains_vertices()
    with pytest.raises(InputError):
        BeliefGrid.uniform(0.3)
    mesh = BeliefGrid.simplex_mesh(2, states=3)
    assert mesh.size == 6
    assert mesh.hull_contains(Belief.from_coords([0.2, 0.3, 0.5]))
    partial = BeliefGrid.explicit([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]], states=3)
    assert not partial.hull_contains(Belief.from_coords([0.9, 0.05, 0.05]))
    assert not partial.contains_vertices()


def test_full_information():
    assert full_information_distribution(Prior.of(0.5)).key == dist([(0.0, 0.5), (1.0, 0.5)]).key
    quarter = full_information_distribution(Prior.of("1/4", rational=True))
    assert quarter.weights == (F(3, 4), F(1, 4))
    ternary = full_information_distribution(Prior.of(["1/3", "1/3", "1/3"], 3, rational=True))
    assert len(ternary) == 3 and set(ternary.weights) == {F(1, 3)}


def test_lattice_example_three_signals():
    grid = BeliefGrid.explicit([0, "1/4", "1/2", 1], rational=True)
    lattice = enumerate_lattice(grid, 6, Prior.of("1/4", rational=True))
    three = dist([(0, F(2, 3)), ("1/2", F(1, 6)), (1, F(1, 6))], rational=True)
    assert lattice.find(three) is not None
    assert lattice.point_mass_index(Belief.binary("1/4", rational=True)) is not None
    # six count vectors plus the full-information element 3/4 on 0, 1/4 on 1
    assert lattice.size == 7
    full = lattice.full_information_index
    assert lattice.elements[full].weights == (F(3, 4), F(1, 4))
    assert np.all(lattice.order[:, full])


def test_lattice_small_cases():
    two = enumerate_lattice(BeliefGrid.explicit([0, 1]), 2, Prior.of(0.5))
    assert two.size == 1
    three = enumerate_lattice(BeliefGrid.explicit([0, 0.5, 1]), 2, Prior.of(0.5))
    assert three.size == 2
    point = three.point_mass_index(Belief.binary(0.5))
    spread = 1 - point
    assert three.order[point, spread] and not three.order[spread, point]
    assert three.edge_count == 1


def test_lattice_order_axioms():
    grid = BeliefGrid.explicit([0, 0.25, 0.5, 0.75, 1])
    lattice = enumerate_lattice(grid, 4, Prior.of(0.5))
    order = lattice.order
    assert np.all(np.diag(order))
    both = order & order.T
    np.fill_diagonal(both, False)
    assert not np.any(both)
    reach = (order.astype(int) @ order.astype(int)) > 0
    assert not np.any(reach & ~order)
    for a in range(lattice.size):
        for b in range(lattice.size):
            assert order[a, b] == is_contraction(lattice.elements[a], lattice.elements[b])


def test_lattice_errors():
    grid = BeliefGrid.explicit([0, 0.25, 0.5, 1])
    with pytest.raises(PriorNotRepresentableError) as info:
        enumerate_lattice(grid, 2, Prior.of(0.3))
    assert info.value.detail["denominator"] == 2
    with pytest.raises(LatticeCapError):
        enumerate_lattice(BeliefGrid.uniform(0.05), 20, Prior.of(0.5), cap=10)


@pytest.mark.parametrize("denominator,k", [(3, 1), (3, 2), (5, 4), (6, 2), (6, 4), (6, 5)])
def test_float_lattice_keeps_full_information_unique(denominator, k):
    # 1 - k/Q and (Q - k)/Q can differ in the last bit
    lattice = enumerate_lattice(BeliefGrid.uniform(f"1/{denominator}"), denominator, Prior.of(k / denominator))
    exact = enumerate_lattice(
        BeliefGrid.uniform(f"1/{denominator}", rational=True),
        denominator,
        Prior.of(f"{k}/{denominator}", rational=True),
    )
    both = lattice.order & lattice.order.T
    np.fill_diagonal(both, False)
    assert not np.any(both)
    assert lattice.size == exact.size
    assert lattice.full_information_index is not None
    assert np.all(lattice.order[:, lattice.full_information_index])


def test_third_prior_lattice():
    lattice = enumerate_lattice(BeliefGrid.uniform("1/3"), 3, Prior.of(1 / 3))
    assert lattice.size == 3
    full = lattice.elements[lattice.full_information_index]
    assert [float(b.q) for b in full.support] == [0.0, 1.0]


def test_point_mass_at_mean_is_below(rng):
    for _ in range(100):
        mu = _random_distribution(rng, int(rng.integers(1, 7)))
        point = FiniteBeliefDistribution.point_mass(mean(mu))
        assert is_contraction_1d(point, mu)
        assert is_contraction(point, mu)


@pytest.mark.parametrize("step,denominator,prior", [
    ("1/4", 4, 0.5),
    ("1/4", 6, 0.25),
    ("1/10", 5, 0.4),
    ("1/8", 8, 0.375),
])
def test_full_information_is_top(step, denominator, prior):
    lattice = enumerate_lattice(BeliefGrid.uniform(step), denominator, Prior.of(prior))
    full = lattice.full_information_index
    assert full is not None
    assert np.all(lattice.order[:, full])
    assert not np.any(np.delete(lattice.order[full], full))
