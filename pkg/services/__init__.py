# Services package
from .beliefs import (
    Belief,
    BeliefGrid,
    DistributionLattice,
    FiniteBeliefDistribution,
    Prior,
    enumerate_lattice,
    full_information_distribution,
    is_contraction,
    is_contraction_1d,
    mean,
)
from .utility import (
    UtilityFunction,
    ValueAtBelief,
    concavify_unconstrained,
    expected_utility,
    lower_convex_envelope,
)

__all__ = [
    'Belief',
    'BeliefGrid',
    'DistributionLattice',
    'FiniteBeliefDistribution',
    'Prior',
    'UtilityFunction',
    'ValueAtBelief',
    'concavify_unconstrained',
    'enumerate_lattice',
    'expected_utility',
    'full_information_distribution',
    'is_contraction',
    'is_contraction_1d',
    'lower_convex_envelope',
    'mean',
]
