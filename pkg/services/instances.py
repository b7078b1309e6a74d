"""
Seeded random instances for property checks and `verify --random`
"""
import logging
from typing import Optional

import numpy as np

from services.beliefs import Belief, BeliefGrid, Prior, enumerate_lattice
from services.solvers.poset_game import PosetGame
from services.solvers.problem import ChainProblem
from services.utility import Piece, UtilityFunction

logger = logging.getLogger(__name__)

QUARTERS = (0.25, 0.5, 0.75)


def random_piecewise_linear(
    rng: np.random.Generator, max_pieces: int = 8, low: float = -1.0, high: float = 1.0, name: str = ""
) -> UtilityFunction:
    """Continuous piecewise-linear utility with knots on multiples of 0.01"""
    count = int(rng.integers(1, max_pieces + 1))
    inner = np.sort(rng.choice(np.arange(1, 100), size=count - 1, replace=False)) / 100
    knots = [0.0, *inner.tolist(), 1.0]
    values = rng.uniform(low, high, size=len(knots))
    pieces = [
        Piece(a, b, (float(va), float((vb - va) / (b - a))), center=a)
        for a, b, va, vb in zip(knots, knots[1:], values, values[1:])
    ]
    return UtilityFunction.piecewise(pieces, continuous=True, name=name)


def random_sampled(
    rng: np.random.Generator, grid: BeliefGrid, low: int = 0, high: int = 10, integer: bool = True, name: str = ""
) -> UtilityFunction:
    if integer:
        values = [float(v) for v in rng.integers(low, high, size=grid.size)]
    else:
        values = [float(v) for v in rng.uniform(low, high, size=grid.size)]
    return UtilityFunction.sampled(grid, values, name=name)


def random_chain_problem(
    rng: np.random.Generator, mediators: int = 2, eps: float = 0.0, denominator: Optional[int] = None
) -> ChainProblem:
    """
    Binary chain on a grid of quarters with prior a multiple of 1/Q, Q in {2, 4}
    The last mediator has integer values, so its gains are multiples of 1/Q.
    """
    Q = denominator or int(rng.choice([2, 4]))
    prior = int(rng.integers(1, Q)) / Q
    chosen = [q for q in QUARTERS if rng.random() < 0.5]
    grid = BeliefGrid.explicit(sorted({0.0, 1.0, prior, *chosen}))
    sender = random_sampled(rng, grid, 0, 1, integer=False, name="sender")
    chain = []
    for i in range(mediators):
        last = i == mediators - 1
        chain.append(random_sampled(rng, grid, 0, 4, integer=last, name=f"mediator {i + 1}"))
    return ChainProblem(
        sender=sender,
        mediators=tuple(chain),
        prior=Prior(Belief.binary(prior)),
        grid=grid,
        denominator=Q,
        eps=eps,
        description="random chain instance",
    )


def random_poset_game(rng: np.random.Generator, max_size: int = 60, players: int = 2) -> PosetGame:
    """Game on a small random distribution lattice with random integer payoffs"""
    chosen = [q for q in QUARTERS if rng.random() < 0.6] or [0.5]
    grid = BeliefGrid.explicit([0.0, 1.0, *chosen])
    prior = Prior(Belief.binary(float(rng.choice(chosen))))
    for Q in (int(rng.integers(2, 5)), 2):
        lattice = enumerate_lattice(grid, Q, prior)
        if lattice.size <= max_size:
            break
    utilities = tuple(
        rng.integers(0, 6, size=lattice.size).astype(float) for _ in range(players + 1)
    )
    return PosetGame(lattice.order, utilities, lattice.full_information_index)


def random_three_point_problem(rng: np.random.Generator, denominator: int = 120) -> ChainProblem:
    """One mediator on a grid {a, p, c} of multiples of 0.05 with integer sampled utilities"""
    a, p, c = sorted(rng.choice(np.arange(0, 21), size=3, replace=False).tolist())
    grid = BeliefGrid.explicit([a / 20, p / 20, c / 20])
    return ChainProblem(
        sender=random_sampled(rng, grid, 0, 10, name="sender"),
        mediators=(random_sampled(rng, grid, 0, 10, name="mediator 1"),),
        prior=Prior(Belief.binary(p / 20)),
        grid=grid,
        denominator=denominator,
        description="random three-point instance",
    )
