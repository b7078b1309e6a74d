"""
Affine domination: chords (and hyperplanes) through utility values that stay
above the utility on the convex hull of their beliefs
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from config import settings
from errors import (
    CliqueCapError,
    DimensionMismatchError,
    InconsistencyError,
    InputError,
    UnsupportedStatesError,
)
from services.beliefs import Belief, BeliefGrid
from services.utility import PIECEWISE, UtilityFunction, ValueAtBelief, _envelope_lp, _lower_hull

logger = logging.getLogger(__name__)

# Mean points tested by set-level checks with three or more states
DEFAULT_MEAN_MESH = "1/20"


@dataclass(frozen=True)
class Violation:
    """Convex weights whose mixture of utility values falls below the utility at the mixed belief"""
    weights: Tuple[float, ...]
    beliefs: Tuple[Belief, ...]
    mean: Belief
    gap: float


@dataclass(frozen=True)
class DominationQuery:
    utility: UtilityFunction
    collection: Tuple[Belief, ...]
    step: float = field(default_factory=lambda: settings.domination_step)
    tolerance: float = field(default_factory=lambda: settings.domination_tol)

    def __post_init__(self):
        if self.step <= 0:
            raise InputError(f"Sampling step must be positive, got {self.step}")
        if self.tolerance < 0:
            raise InputError(f"Tolerance must be nonnegative, got {self.tolerance}")
        if not self.collection:
            raise InputError("A domination query needs at least one belief")

    def violation(self) -> Optional[Violation]:
        if len(self.collection) <= self.utility.states:
            return collection_violation(self.utility, self.collection, self.step, self.tolerance)
        return set_violation(self.utility, self.collection, tolerance=self.tolerance)


@dataclass(frozen=True)
class _Mesh:
    xs: np.ndarray
    values: np.ndarray
    jump_xs: np.ndarray
    jump_values: np.ndarray


@lru_cache(maxsize=64)
def _mesh(u: UtilityFunction, step: float, extra: Tuple[float, ...] = ()) -> _Mesh:
    """Sample points for chord checks: a uniform mesh, breakpoints, extra points and a finer mesh on cosine pieces"""
    parts = [np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1), u.breakpoints, np.array(extra, dtype=float)]
    if u.representation == PIECEWISE:
        for piece in u.pieces:
            if piece.cosine is not None:
                lo, hi = float(piece.start), float(piece.end)
                count = int(np.ceil((hi - lo) / (step / 10))) + 1
                parts.append(np.linspace(lo, hi, count))
    xs = np.unique(np.concatenate(parts))
    jump_xs, jump_values = u.right_limits()
    return _Mesh(xs, u.evaluate_many(xs), jump_xs, jump_values)


def pair_gap(
    u: UtilityFunction,
    q1: float,
    q2: float,
    step: Optional[float] = None,
    extra: Tuple[float, ...] = (),
) -> Tuple[float, float]:
    """
    Smallest value of chord(x) - u(x) over [q1, q2] and where it occurs
    (two states; the chord runs through (q1, u(q1)) and (q2, u(q2)))
    """
    step = step or settings.domination_step
    q1, q2 = float(min(q1, q2)), float(max(q1, q2))
    if q2 - q1 <= 0:
        return 0.0, q1
    mesh = _mesh(u, step, extra)
    y1, y2 = u.evaluate_many(np.array([q1, q2]))
    slope = (y2 - y1) / (q2 - q1)

    def chord(x):
        return y1 + slope * (x - q1)

    lo = np.searchsorted(mesh.xs, q1, side="right")
    hi = np.searchsorted(mesh.xs, q2, side="left")
    xs = mesh.xs[lo:hi]
    gaps = chord(xs) - mesh.values[lo:hi]
    best_gap, best_x = 0.0, q1
    if len(gaps):
        k = int(np.argmin(gaps))
        best_gap, best_x = float(gaps[k]), float(xs[k])

    if len(mesh.jump_xs):
        inside = (mesh.jump_xs >= q1) & (mesh.jump_xs < q2)
        if np.any(inside):
            jump_gaps = chord(mesh.jump_xs[inside]) - mesh.jump_values[inside]
            k = int(np.argmin(jump_gaps))
            if jump_gaps[k] < best_gap:
                best_gap, best_x = float(jump_gaps[k]), float(mesh.jump_xs[inside][k])

    if u.representation == PIECEWISE:
        for index in range(u.piece_at(q1), u.piece_at(q2) + 1):
            piece = u.pieces[index]
            for x in piece.stationary_points(slope):
                if q1 < x < q2:
                    gap = float(chord(x) - piece.evaluate(x))
                    if gap < best_gap:
                        best_gap, best_x = gap, x
    return best_gap, best_x


def _simplex_weights(size: int, step: float) -> np.ndarray:
    divisions = max(1, int(round(1.0 / step)))
    rows = [c for c in product(range(divisions + 1), repeat=size - 1) if sum(c) <= divisions]
    counts = np.array(rows, dtype=float).reshape(len(rows), size - 1)
    first = divisions - counts.sum(axis=1, keepdims=True)
    return np.hstack([first, counts]) / divisions


def collection_violation(
    u: UtilityFunction,
    beliefs: Sequence[Belief],
    step: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> Optional[Violation]:
    """Most violating weights for a collection of at most |Ω| beliefs, or None if it dominates"""
    step = step or settings.domination_step
    tolerance = settings.domination_tol if tolerance is None else tolerance
    beliefs = tuple(beliefs)
    if not beliefs:
        raise InputError("A collection needs at least one belief")
    if len(beliefs) > u.states:
        raise DimensionMismatchError(
            f"A collection holds at most {u.states} beliefs, got {len(beliefs)}",
            size=len(beliefs), states=u.states,
        )
    if any(b.states != u.states for b in beliefs):
        raise DimensionMismatchError("Collection beliefs and utility have different state counts")
    if len(set(beliefs)) == 1:
        return None

    if u.states == 2:
        q1, q2 = sorted(float(b.q) for b in beliefs)
        gap, x = pair_gap(u, q1, q2, step)
        if gap >= -tolerance:
            return None
        lam = (x - q1) / (q2 - q1)
        return Violation(
            weights=(1 - lam, lam),
            beliefs=(Belief.binary(q1), Belief.binary(q2)),
            mean=Belief.binary(x),
            gap=gap,
        )

    alphas = _simplex_weights(len(beliefs), step)
    coords = np.array([b.as_array() for b in beliefs])
    vals = np.array([float(u.evaluate(b)) for b in beliefs])
    means = alphas @ coords
    mixed = alphas @ vals
    at_means = u.evaluate_coords(np.clip(means, 0.0, 1.0))
    gaps = mixed - at_means
    k = int(np.argmin(gaps))
    if gaps[k] >= -tolerance:
        return None
    return Violation(
        weights=tuple(float(a) for a in alphas[k]),
        beliefs=beliefs,
        mean=Belief(tuple(float(v) for v in np.clip(means[k], 0.0, 1.0))),
        gap=float(gaps[k]),
    )


def check_collection(
    u: UtilityFunction,
    beliefs: Sequence[Belief],
    step: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> bool:
    """True iff every convex mixture of the utility values lies above the utility at the mixed belief"""
    return collection_violation(u, beliefs, step, tolerance) is None


def set_violation(
    u: UtilityFunction,
    points: Sequence[Belief],
    mean_grid: Optional[BeliefGrid] = None,
    tolerance: Optional[float] = None,
) -> Optional[Violation]:
    """
    Violation of set-level domination: a mean where the lower convex envelope
    of the points' utility values drops below the utility
    """
    tolerance = settings.domination_tol if tolerance is None else tolerance
    points = tuple(sorted(set(points)))
    if not points:
        raise InputError("A support set needs at least one belief")
    if len(points) == 1:
        return None
    states = points[0].states

    if states == 2:
        hull = _lower_hull([(float(b.q), float(u.evaluate(b))) for b in points])
        hx = np.array([x for x, _ in hull])
        hy = np.array([y for _, y in hull])
        xs = mean_grid.values if mean_grid is not None else _mesh(u, settings.domination_step).xs
        xs = xs[(xs >= hx[0]) & (xs <= hx[-1])]
        if len(xs):
            gaps = np.interp(xs, hx, hy) - u.evaluate_many(xs)
            k = int(np.argmin(gaps))
            if gaps[k] < -tolerance:
                j = min(max(int(np.searchsorted(hx, xs[k])), 1), len(hx) - 1)
                lam = (xs[k] - hx[j - 1]) / (hx[j] - hx[j - 1])
                return Violation(
                    weights=(1 - lam, lam),
                    beliefs=(Belief.binary(hx[j - 1]), Belief.binary(hx[j])),
                    mean=Belief.binary(float(xs[k])),
                    gap=float(gaps[k]),
                )
        # Envelope facets are chords between consecutive hull vertices
        for (x0, _), (x1, _) in zip(hull, hull[1:]):
            found = collection_violation(u, [Belief.binary(x0), Belief.binary(x1)], tolerance=tolerance)
            if found is not None:
                return found
        return None

    grid = mean_grid or BeliefGrid.uniform(DEFAULT_MEAN_MESH, states)
    samples = [ValueAtBelief(b, float(u.evaluate(b))) for b in points]
    for m in grid.points:
        try:
            envelope, alphas = _envelope_lp(samples, m, rational=False)
        except InputError:
            continue
        gap = float(envelope) - float(u.evaluate(m))
        if gap < -tolerance:
            return Violation(
                weights=tuple(float(a) for a in alphas),
                beliefs=points,
                mean=m,
                gap=gap,
            )
    return None


def check_set(
    u: UtilityFunction,
    points: Sequence[Belief],
    mean_grid: Optional[BeliefGrid] = None,
    tolerance: Optional[float] = None,
    cross_check: bool = False,
) -> bool:
    """
    True iff every distribution supported on the points has
    E[u(q)] >= u(E[q]) at every tested mean
    """
    verdict = set_violation(u, points, mean_grid, tolerance) is None
    if cross_check and points and points[0].states == 2:
        ordered = sorted(set(points))
        pairwise = all(
            check_collection(u, [a, b], tolerance=tolerance)
            for i, a in enumerate(ordered) for b in ordered[i + 1:]
        )
        if pairwise != verdict:
            raise InconsistencyError(
                "Set-level and pairwise domination disagree",
                set_verdict=verdict, pairwise_verdict=pairwise,
                points=[str(b) for b in ordered],
            )
    return verdict


def dominating_partners(u: UtilityFunction, q1: Belief, grid: BeliefGrid) -> List[Belief]:
    """Grid points q2 such that the pair (q1, q2) is affine dominating, sorted"""
    if u.states != 2 or q1.states != 2:
        raise UnsupportedStatesError("Dominating partners are defined for two states", states=u.states)
    partners = [b for b in grid.points if check_collection(u, [q1, b])]
    if q1 not in partners:
        partners = sorted(partners + [q1])
    return partners


@lru_cache(maxsize=32)
def _pairwise_matrix(u: UtilityFunction, grid: BeliefGrid, step: float, tolerance: float) -> np.ndarray:
    xs = grid.values
    extra = tuple(float(x) for x in xs)
    G = len(xs)
    matrix = np.eye(G, dtype=bool)
    for i in range(G):
        for j in range(i + 1, G):
            gap, _ = pair_gap(u, xs[i], xs[j], step, extra)
            matrix[i, j] = matrix[j, i] = gap >= -tolerance
    matrix.setflags(write=False)
    logger.debug(f"Pairwise domination for {u.name or 'utility'}: {int(matrix.sum() - G) // 2} dominating pairs")
    return matrix


def pairwise_domination_matrix(
    u: UtilityFunction,
    grid: BeliefGrid,
    step: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> np.ndarray:
    """Read-only boolean matrix: entry (i, j) is true iff grid points i and j dominate as a pair"""
    if u.states != 2 or grid.states != 2:
        raise UnsupportedStatesError("Pairwise domination matrices need two states", states=grid.states)
    return _pairwise_matrix(
        u, grid,
        step or settings.domination_step,
        settings.domination_tol if tolerance is None else tolerance,
    )


@dataclass(frozen=True)
class SupportFamily:
    """Grid-index supports, each flagged maximal among dominating supports"""
    grid: BeliefGrid
    supports: Tuple[Tuple[int, ...], ...]
    maximal: Tuple[bool, ...]

    def beliefs(self, index: int) -> List[Belief]:
        return [self.grid.points[g] for g in self.supports[index]]

    def covers(self, indices: Sequence[int]) -> bool:
        """True iff the given support lies inside some listed support"""
        wanted = set(indices)
        return any(wanted <= set(s) for s in self.supports)


def maximal_dominating_supports(
    u: UtilityFunction, grid: BeliefGrid, cap: Optional[int] = None
) -> SupportFamily:
    """Maximal cliques of the pairwise domination graph, each a maximal dominating support"""
    if u.states != 2 or grid.states != 2:
        raise UnsupportedStatesError(
            "Maximal dominating supports are only enumerated for two states", states=grid.states
        )
    cap = cap or settings.clique_cap
    matrix = pairwise_domination_matrix(u, grid)
    graph = nx.Graph()
    graph.add_nodes_from(range(grid.size))
    rows, cols = np.nonzero(np.triu(matrix, k=1))
    graph.add_edges_from(zip(rows.tolist(), cols.tolist()))

    cliques = []
    for clique in nx.find_cliques(graph):
        cliques.append(tuple(sorted(clique)))
        if len(cliques) > cap:
            raise CliqueCapError(
                f"More than {cap} maximal dominating supports; use a coarser grid",
                cap=cap, grid_size=grid.size,
            )
    supports = tuple(sorted(set(cliques)))
    for support in supports:
        if not check_set(u, [grid.points[g] for g in support]):
            raise InconsistencyError(
                "Clique of pairwise-dominating points fails the set-level check",
                support=[str(grid.points[g]) for g in support],
            )
    logger.info(f"{len(supports)} maximal dominating supports for {u.name or 'utility'}")
    return SupportFamily(grid, supports, tuple(True for _ in supports))
