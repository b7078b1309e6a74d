"""
Finite poset games: agents 0..n move a token down a partial order in turn,
each payoff depends only on where the token ends up
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from errors import DimensionMismatchError, InputError, OrderViolationError, VerifierCapError
from utils.numeric import Number

logger = logging.getLogger(__name__)

# Transitivity is audited with a dense product up to this many elements
TRANSITIVITY_AUDIT_CAP = 3_000


@dataclass(frozen=True, eq=False)
class PosetGame:
    """
    order[a, b] means element a ⪯ element b (a is reachable from b)
    utilities[0] is agent 0 (the sender), utilities[i] agent i
    start None means every element is reachable by agent 0
    """
    order: np.ndarray
    utilities: Tuple[np.ndarray, ...]
    start: Optional[int] = None

    def __post_init__(self):
        if self.order.ndim != 2 or self.order.shape[0] != self.order.shape[1]:
            raise DimensionMismatchError("Order relation must be a square matrix", shape=list(self.order.shape))
        if not self.utilities:
            raise InputError("A poset game needs at least agent 0's utility")
        for i, w in enumerate(self.utilities):
            if len(w) != self.size:
                raise DimensionMismatchError(
                    f"Utility of agent {i} has {len(w)} entries for {self.size} elements", agent=i
                )
        if self.start is not None and not 0 <= self.start < self.size:
            raise InputError(f"Start element {self.start} out of range", size=self.size)

    @property
    def size(self) -> int:
        return self.order.shape[0]

    @property
    def players(self) -> int:
        """Number of agents after agent 0"""
        return len(self.utilities) - 1

    @property
    def exact(self) -> bool:
        return any(w.dtype == object for w in self.utilities)

    def validate(self) -> None:
        order = self.order.astype(bool)
        if not np.all(np.diag(order)):
            bad = int(np.nonzero(~np.diag(order))[0][0])
            raise OrderViolationError(f"Order is not reflexive at element {bad}", element=bad)
        both = order & order.T
        np.fill_diagonal(both, False)
        if np.any(both):
            a, b = (int(v) for v in np.argwhere(both)[0])
            raise OrderViolationError(f"Order is not antisymmetric: {a} and {b}", elements=[a, b])
        if self.size <= TRANSITIVITY_AUDIT_CAP:
            counts = order.astype(np.int64)
            reach = (counts @ counts) > 0
            if np.any(reach & ~order):
                a, b = (int(v) for v in np.argwhere(reach & ~order)[0])
                raise OrderViolationError(f"Order is not transitive: {a} ⪯ {b} is missing", elements=[a, b])

    def reachable(self, element: Optional[int]) -> np.ndarray:
        """Boolean mask of elements below `element` (everything when None)"""
        if element is None:
            return np.ones(self.size, dtype=bool)
        return self.order[:, element].astype(bool)

    def reversed(self) -> "PosetGame":
        """The game on the reversed order: agents move the token upward"""
        return PosetGame(self.order.T.copy(), self.utilities, self.start)


@dataclass(frozen=True)
class LevelWitness:
    level: int
    element: int
    deviation: int
    gain: Number


def _default_slack(utilities: Sequence[np.ndarray]) -> Number:
    return 0 if any(np.asarray(w).dtype == object for w in utilities) else settings.membership_slack


def feasible_levels(
    order: np.ndarray,
    utilities: Sequence[np.ndarray],
    eps: Number,
    slack: Optional[Number] = None,
) -> Tuple[List[np.ndarray], List[LevelWitness]]:
    """
    masks[i - 1] is X_i for i = 1..n+1 with X_{n+1} everything and
    X_i = {x in X_{i+1} : w_i(x) >= w_i(x') - eps - slack for all x' ⪯ x in X_{i+1}}
    utilities[i - 1] is w_i.
    """
    slack = _default_slack(utilities) if slack is None else slack
    size = order.shape[0]
    n = len(utilities)
    masks: List[Optional[np.ndarray]] = [None] * (n + 1)
    masks[n] = np.ones(size, dtype=bool)
    witnesses: List[LevelWitness] = []
    for level in range(n, 0, -1):
        w = utilities[level - 1]
        previous = masks[level]
        current = previous.copy()
        for x in np.nonzero(previous)[0]:
            below = np.nonzero(order[:, x] & previous)[0]
            k = int(np.argmax(w[below]))
            gain = w[below[k]] - w[x]
            if gain > eps + slack:
                current[x] = False
                witnesses.append(LevelWitness(level, int(x), int(below[k]), gain))
        masks[level - 1] = current
        logger.debug(f"Level {level}: {int(current.sum())} of {int(previous.sum())} elements kept")
    return masks, witnesses


def poset_game_value(
    game: PosetGame, eps: Number, slack: Optional[Number] = None
) -> Tuple[Number, int]:
    """Agent 0's best payoff over X_1 restricted to the down-set of the start, and the first argmax"""
    masks, _ = feasible_levels(game.order, game.utilities[1:], eps, slack)
    candidates = np.nonzero(masks[0] & game.reachable(game.start))[0]
    w0 = game.utilities[0]
    k = int(np.argmax(w0[candidates]))
    return w0[candidates[k]], int(candidates[k])


def verify_backward_induction(
    game: PosetGame, eps: Number, cap: Optional[int] = None, slack: Optional[Number] = None
) -> Number:
    """
    Solve the explicit sequential game by backward induction

    Agent i at x picks any x' ⪯ x; it stays put (full revelation) whenever that
    is within eps of its best move, otherwise it takes the first best move.
    Agent 0 then picks the best starting move against these policies.
    """
    cap = cap or settings.verifier_cap
    if game.size > cap:
        raise VerifierCapError(
            f"Poset of {game.size} elements exceeds the verifier cap {cap}; use a coarser lattice",
            size=game.size, cap=cap,
        )
    slack = _default_slack(game.utilities) if slack is None else slack
    outcome = np.arange(game.size)
    for agent in range(game.players, 0, -1):
        w = game.utilities[agent]
        policy = outcome.copy()
        for x in range(game.size):
            options = np.nonzero(game.order[:, x])[0]
            continuation = outcome[options]
            payoffs = w[continuation]
            k = int(np.argmax(payoffs))
            if w[outcome[x]] < payoffs[k] - eps - slack:
                policy[x] = continuation[k]
        outcome = policy
    reachable = np.nonzero(game.reachable(game.start))[0]
    w0 = game.utilities[0]
    return max(w0[outcome[x]] for x in reachable)
