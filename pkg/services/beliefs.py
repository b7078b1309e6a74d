"""
Beliefs, finitely supported belief distributions, the convex order between
them and the finite distribution lattice the chain solver works on
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from errors import (
    BeliefError,
    DimensionMismatchError,
    InputError,
    LatticeCapError,
    PriorNotRepresentableError,
)
from services.lp_kernel import check_feasible
from utils.numeric import Number, as_array, format_number, is_exact, one, parse_scalar, zero

logger = logging.getLogger(__name__)

# Upper bound on entries of one chunk in the vectorized order computation
ORDER_CHUNK_ENTRIES = 4_000_000


@dataclass(frozen=True, order=True)
class Belief:
    """
    A point of the probability simplex over states 0..|Ω|-1

    Stored as the probabilities of states 1..|Ω|-1, so a binary-state belief
    is the scalar q = P(state 1). Ordering is lexicographic on the stored point.
    """
    point: Tuple[Number, ...]

    def __post_init__(self):
        if len(self.point) < 1:
            raise BeliefError("A belief needs at least two states")
        tol = settings.belief_sum_tol
        for c, value in enumerate(self.point):
            if value < -tol or value > 1 + tol:
                raise BeliefError(
                    f"Belief coordinate for state {c + 1} is {value}, outside [0, 1]",
                    state=c + 1, value=float(value),
                )
        if sum(self.point) > 1 + tol:
            raise BeliefError(
                "Belief coordinates sum to more than 1",
                total=float(sum(self.point)),
            )

    @classmethod
    def binary(cls, q, rational: bool = False) -> "Belief":
        return cls((parse_scalar(q, rational),))

    @classmethod
    def from_coords(cls, coords: Sequence, rational: bool = False) -> "Belief":
        """Build from the full probability vector over all states"""
        values = [parse_scalar(v, rational) for v in coords]
        if len(values) < 2:
            raise BeliefError("A belief needs at least two states", states=len(values))
        if any(v < -settings.belief_sum_tol for v in values):
            raise BeliefError("Belief probabilities must be nonnegative", coords=[float(v) for v in values])
        total = sum(values)
        if abs(total - 1) > settings.belief_sum_tol:
            raise BeliefError("Belief probabilities must sum to 1", total=float(total))
        return cls(tuple(values[1:]))

    @classmethod
    def vertex(cls, state: int, states: int, rational: bool = False) -> "Belief":
        """The belief that puts all mass on one state"""
        return cls(tuple(one(rational) if c + 1 == state else zero(rational) for c in range(states - 1)))

    @property
    def states(self) -> int:
        return len(self.point) + 1

    @property
    def q(self) -> Number:
        if self.states != 2:
            raise DimensionMismatchError(
                "Scalar view q is only defined for two states", states=self.states
            )
        return self.point[0]

    @property
    def coords(self) -> Tuple[Number, ...]:
        return (1 - sum(self.point),) + tuple(self.point)

    @property
    def exact(self) -> bool:
        return is_exact(self.point)

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.point], dtype=float)

    def __str__(self) -> str:
        if self.states == 2:
            return format_number(self.point[0])
        return "(" + ", ".join(format_number(v) for v in self.coords) + ")"


@dataclass(frozen=True)
class FiniteBeliefDistribution:
    """
    Finitely supported distribution over beliefs in canonical form:
    support strictly increasing, no zero weights, weights summing to 1
    Use create() to canonicalize arbitrary input.
    """
    support: Tuple[Belief, ...]
    weights: Tuple[Number, ...]

    def __post_init__(self):
        if len(self.support) != len(self.weights):
            raise DimensionMismatchError(
                "Support and weights have different lengths",
                support=len(self.support), weights=len(self.weights),
            )
        if not self.support:
            raise BeliefError("A belief distribution needs a nonempty support")
        states = {b.states for b in self.support}
        if len(states) > 1:
            raise DimensionMismatchError("Support beliefs have different state counts", states=sorted(states))
        for b, w in zip(self.support, self.weights):
            if w <= 0:
                raise BeliefError(f"Weight at {b} must be positive in canonical form", weight=float(w))
        if any(a >= b for a, b in zip(self.support, self.support[1:])):
            raise BeliefError("Support must be strictly increasing; use FiniteBeliefDistribution.create")
        total = sum(self.weights)
        if self.exact:
            if total != 1:
                raise BeliefError("Weights must sum to 1", total=str(total))
        elif abs(total - 1) > settings.belief_sum_tol:
            raise BeliefError("Weights must sum to 1", total=float(total))

    @classmethod
    def create(
        cls,
        support: Sequence[Belief],
        weights: Sequence[Number],
        normalize: bool = False,
        drop_below: float = 0.0,
    ) -> "FiniteBeliefDistribution":
        """Merge duplicate points, drop zero weights and sort the support"""
        if len(support) != len(weights):
            raise DimensionMismatchError(
                "Support and weights have different lengths",
                support=len(support), weights=len(weights),
            )
        merged: Dict[Belief, Number] = {}
        for b, w in zip(support, weights):
            if isinstance(w, int) and not isinstance(w, bool):
                w = Fraction(w)
            if w < 0 and abs(w) > drop_below:
                raise BeliefError(f"Negative weight {w} at {b}", weight=float(w))
            merged[b] = merged.get(b, 0) + w
        items = sorted((b, w) for b, w in merged.items() if w > drop_below)
        if not items:
            raise BeliefError("All weights are zero")
        points = tuple(b for b, _ in items)
        values = [w for _, w in items]
        if normalize:
            total = sum(values)
            values = [w / total for w in values]
        return cls(points, tuple(values))

    @classmethod
    def point_mass(cls, belief: Belief) -> "FiniteBeliefDistribution":
        return cls((belief,), (one(belief.exact),))

    @property
    def states(self) -> int:
        return self.support[0].states

    @property
    def exact(self) -> bool:
        return is_exact(self.weights) and all(b.exact for b in self.support)

    @property
    def key(self) -> Tuple[Tuple[Belief, Number], ...]:
        return tuple(zip(self.support, self.weights))

    def __len__(self) -> int:
        return len(self.support)

    def __str__(self) -> str:
        return " + ".join(f"{format_number(w)}*δ({b})" for b, w in zip(self.support, self.weights))


def mean(dist: FiniteBeliefDistribution) -> Belief:
    """Weighted average of the support points"""
    point = []
    for c in range(dist.states - 1):
        value = sum(w * b.point[c] for b, w in zip(dist.support, dist.weights))
        if isinstance(value, float):
            value = min(max(value, 0.0), 1.0)
        point.append(value)
    return Belief(tuple(point))


@dataclass(frozen=True)
class BeliefGrid:
    """Finite set of beliefs in canonical (lexicographic) order"""
    points: Tuple[Belief, ...]
    resolution: str = "explicit"

    def __post_init__(self):
        if not self.points:
            raise InputError("A belief grid needs at least one point")
        states = {b.states for b in self.points}
        if len(states) > 1:
            raise DimensionMismatchError("Grid points have different state counts", states=sorted(states))
        for a, b in zip(self.points, self.points[1:]):
            if a >= b:
                raise InputError(f"Grid points must be distinct and increasing, got {a} before {b}")

    @classmethod
    def uniform(cls, step, states: int = 2, rational: bool = False) -> "BeliefGrid":
        """Mesh with spacing `step` on every coordinate; 1/step must be an integer"""
        exact_step = parse_scalar(step, rational=True)
        if exact_step <= 0 or exact_step > 1:
            raise InputError(f"Grid step must lie in (0, 1], got {step}")
        divisions = 1 / exact_step
        if divisions.denominator != 1:
            raise InputError(f"Grid step {step} does not divide 1", step=str(step))
        return cls.simplex_mesh(int(divisions), states, rational, resolution=f"step {format_number(exact_step)}")

    @classmethod
    def simplex_mesh(
        cls, divisions: int, states: int = 2, rational: bool = False, resolution: Optional[str] = None
    ) -> "BeliefGrid":
        """All beliefs whose probabilities are multiples of 1/divisions"""
        if divisions < 1:
            raise InputError(f"Mesh divisions must be positive, got {divisions}")
        if states < 2:
            raise InputError(f"A belief grid needs at least two states, got {states}")
        points = []
        for counts in product(range(divisions + 1), repeat=states - 1):
            if sum(counts) > divisions:
                continue
            points.append(Belief(tuple(
                Fraction(k, divisions) if rational else k / divisions for k in counts
            )))
        return cls(tuple(points), resolution or f"mesh 1/{divisions}")

    @classmethod
    def explicit(cls, values: Sequence, states: int = 2, rational: bool = False) -> "BeliefGrid":
        """
        Binary grids take scalars q; larger grids take full probability vectors
        (or vectors over states 1..|Ω|-1)
        """
        beliefs = set()
        for value in values:
            if isinstance(value, (list, tuple)):
                if len(value) == states:
                    beliefs.add(Belief.from_coords(value, rational))
                elif len(value) == states - 1:
                    beliefs.add(Belief(tuple(parse_scalar(v, rational) for v in value)))
                else:
                    raise DimensionMismatchError(
                        f"Grid point {value} does not match {states} states", states=states
                    )
            elif states == 2:
                beliefs.add(Belief.binary(value, rational))
            else:
                raise DimensionMismatchError(
                    f"Scalar grid point {value} given for {states} states", states=states
                )
        return cls(tuple(sorted(beliefs)), "explicit")

    def with_points(self, extra: Iterable[Belief]) -> "BeliefGrid":
        return BeliefGrid(tuple(sorted(set(self.points) | set(extra))), self.resolution)

    @property
    def states(self) -> int:
        return self.points[0].states

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def rational(self) -> bool:
        return all(b.exact for b in self.points)

    @cached_property
    def _index(self) -> Dict[Belief, int]:
        return {b: i for i, b in enumerate(self.points)}

    @cached_property
    def coordinate_matrix(self) -> np.ndarray:
        """Float matrix with one row per grid point (states 1..|Ω|-1)"""
        return np.array([[float(v) for v in b.point] for b in self.points], dtype=float)

    @property
    def values(self) -> np.ndarray:
        """Binary grids: the increasing array of q values"""
        if self.states != 2:
            raise DimensionMismatchError("Scalar grid values need two states", states=self.states)
        return self.coordinate_matrix[:, 0]

    def index_of(self, belief: Belief, tol: Optional[float] = None) -> Optional[int]:
        found = self._index.get(belief)
        if found is not None or tol is None:
            return found
        gaps = np.max(np.abs(self.coordinate_matrix - belief.as_array()), axis=1)
        best = int(np.argmin(gaps))
        return best if gaps[best] <= tol else None

    def contains_vertices(self) -> bool:
        return all(
            Belief.vertex(k, self.states) in self._index for k in range(self.states)
        )

    def hull_contains(self, belief: Belief, tol: Optional[float] = None) -> bool:
        tol = settings.feasibility_tol if tol is None else tol
        if self.states == 2:
            q = float(belief.q)
            return self.values[0] - tol <= q <= self.values[-1] + tol
        coords = self.coordinate_matrix
        rows = [[1.0] * self.size] + [list(coords[:, c]) for c in range(self.states - 1)]
        rhs = [1.0] + [float(v) for v in belief.point]
        return check_feasible(rows, rhs, tol=tol)


@dataclass(frozen=True)
class Prior:
    """The common prior p"""
    belief: Belief

    @classmethod
    def of(cls, value, states: int = 2, rational: bool = False) -> "Prior":
        """Scalar q for two states, or the full probability vector"""
        if isinstance(value, (list, tuple)):
            if len(value) != states:
                raise DimensionMismatchError(
                    f"Prior has {len(value)} coordinates, expected {states}", states=states
                )
            return cls(Belief.from_coords(value, rational))
        if states != 2:
            raise DimensionMismatchError("A scalar prior needs two states", states=states)
        return cls(Belief.binary(value, rational))

    @property
    def states(self) -> int:
        return self.belief.states

    def __str__(self) -> str:
        return str(self.belief)


def full_information_distribution(prior: Prior) -> FiniteBeliefDistribution:
    """Mass p_k on the vertex belief of state k"""
    states = prior.states
    rational = prior.belief.exact
    coords = prior.belief.coords
    vertices = [Belief.vertex(k, states, rational) for k in range(states)]
    return FiniteBeliefDistribution.create(vertices, list(coords))


def _coupling_rows(nu: FiniteBeliefDistribution, mu: FiniteBeliefDistribution, rational: bool):
    """Equality system of the martingale coupling π(i, j) between nu (rows) and mu (columns)"""
    conv = Fraction if rational else float
    I, J = len(nu), len(mu)
    rows: List[List[Number]] = []
    rhs: List[Number] = []
    nil = zero(rational)
    for i in range(I):
        row = [nil] * (I * J)
        for j in range(J):
            row[i * J + j] = one(rational)
        rows.append(row)
        rhs.append(conv(nu.weights[i]))
    for j in range(J):
        row = [nil] * (I * J)
        for i in range(I):
            row[i * J + j] = one(rational)
        rows.append(row)
        rhs.append(conv(mu.weights[j]))
    for i in range(I):
        for c in range(nu.states - 1):
            row = [nil] * (I * J)
            for j in range(J):
                row[i * J + j] = conv(mu.support[j].point[c])
            rows.append(row)
            rhs.append(conv(nu.weights[i]) * conv(nu.support[i].point[c]))
    return rows, rhs


def _means_match(nu: FiniteBeliefDistribution, mu: FiniteBeliefDistribution, tol: Number) -> bool:
    a, b = mean(nu), mean(mu)
    return all(abs(x - y) <= tol for x, y in zip(a.point, b.point))


def is_contraction(
    nu: FiniteBeliefDistribution,
    mu: FiniteBeliefDistribution,
    tol: Optional[float] = None,
) -> bool:
    """
    True iff nu ⪯ mu, i.e. mu is a mean-preserving spread of nu
    Decided by feasibility of a martingale coupling
    """
    if nu.states != mu.states:
        raise DimensionMismatchError(
            "Distributions live on different simplices", states=[nu.states, mu.states]
        )
    rational = nu.exact and mu.exact
    tol = 0 if rational else (settings.feasibility_tol if tol is None else tol)
    if not _means_match(nu, mu, tol):
        return False
    rows, rhs = _coupling_rows(nu, mu, rational)
    return check_feasible(rows, rhs, rational=rational, tol=tol or None)


def is_contraction_1d(
    nu: FiniteBeliefDistribution,
    mu: FiniteBeliefDistribution,
    tol: Optional[float] = None,
) -> bool:
    """
    Binary-state convex order: equal means and E_nu (q - t)+ <= E_mu (q - t)+
    at every support point t of either distribution
    """
    if nu.states != 2 or mu.states != 2:
        raise DimensionMismatchError(
            "One-dimensional convex order needs two states", states=[nu.states, mu.states]
        )
    rational = nu.exact and mu.exact
    tol = 0 if rational else (settings.feasibility_tol if tol is None else tol)
    if not _means_match(nu, mu, tol):
        return False

    def call(dist: FiniteBeliefDistribution, t: Number) -> Number:
        return sum(w * (b.q - t) for b, w in zip(dist.support, dist.weights) if b.q > t)

    kinks = sorted({b.q for b in nu.support} | {b.q for b in mu.support})
    return all(call(nu, t) <= call(mu, t) + tol for t in kinks)


@dataclass(frozen=True, eq=False)
class DistributionLattice:
    """
    Every distribution with weights in {0, 1/Q, ..., 1} on grid points and
    mean equal to the prior, plus the full-information distribution when the
    grid holds the simplex vertices. order[a, b] means elements[a] ⪯ elements[b].
    """
    grid: BeliefGrid
    denominator: int
    prior: Prior
    elements: Tuple[FiniteBeliefDistribution, ...]
    weight_matrix: np.ndarray
    order: np.ndarray
    full_information_index: Optional[int]
    rational: bool

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def edge_count(self) -> int:
        """Number of strict order relations"""
        return int(self.order.sum()) - self.size

    @cached_property
    def _key_index(self) -> Dict[tuple, int]:
        return {e.key: i for i, e in enumerate(self.elements)}

    def find(self, dist: FiniteBeliefDistribution, tol: Optional[float] = None) -> Optional[int]:
        found = self._key_index.get(dist.key)
        if found is not None or tol is None:
            return found
        row = np.zeros(self.grid.size)
        for b, w in zip(dist.support, dist.weights):
            g = self.grid.index_of(b, tol)
            if g is None:
                return None
            row[g] += float(w)
        gaps = np.max(np.abs(self.weight_matrix.astype(float) - row), axis=1)
        best = int(np.argmin(gaps))
        return best if gaps[best] <= tol else None

    def point_mass_index(self, belief: Belief) -> Optional[int]:
        return self.find(FiniteBeliefDistribution.point_mass(belief), tol=None if self.rational else settings.feasibility_tol)

    def support_indices(self, element: int) -> Tuple[int, ...]:
        return tuple(int(g) for g in np.nonzero(self.weight_matrix[element] != 0)[0])

    def expected_values(self, grid_values: Sequence[Number]) -> np.ndarray:
        """E_mu[u] for every element, given u at every grid point"""
        if len(grid_values) != self.grid.size:
            raise DimensionMismatchError(
                "Expected one value per grid point", values=len(grid_values), grid=self.grid.size
            )
        return self.weight_matrix @ as_array(grid_values, self.rational)

    def down_set(self, element: int) -> np.ndarray:
        """Indices of elements below (or equal to) the given one"""
        return np.nonzero(self.order[:, element])[0]


def _enumerate_counts(
    coords: np.ndarray, denominator: int, target: np.ndarray, tol: Number, cap: int
) -> List[Tuple[int, ...]]:
    """Count vectors k with sum k = Q and sum k_g x_g = Q p, depth-first with range pruning"""
    G = coords.shape[0]
    suffix_min = [None] * G
    suffix_max = [None] * G
    lo, hi = coords[G - 1].copy(), coords[G - 1].copy()
    for g in range(G - 1, -1, -1):
        lo = np.minimum(lo, coords[g]) if coords.dtype != object else np.array(
            [min(a, b) for a, b in zip(lo, coords[g])], dtype=object)
        hi = np.maximum(hi, coords[g]) if coords.dtype != object else np.array(
            [max(a, b) for a, b in zip(hi, coords[g])], dtype=object)
        suffix_min[g], suffix_max[g] = lo, hi

    results: List[Tuple[int, ...]] = []
    counts = [0] * G

    def visit(g: int, remaining: int, residual: np.ndarray) -> None:
        if g == G - 1:
            if all(abs(remaining * x - r) <= tol for x, r in zip(coords[g], residual)):
                counts[g] = remaining
                results.append(tuple(counts))
                counts[g] = 0
                if len(results) > cap:
                    raise LatticeCapError(
                        f"Lattice exceeds {cap} elements; use a coarser grid or a smaller denominator",
                        cap=cap, grid_size=G, denominator=denominator,
                    )
            return
        for k in range(remaining, -1, -1):
            rest = remaining - k
            left = residual - k * coords[g]
            if any(l < rest * a - tol or l > rest * b + tol
                   for l, a, b in zip(left, suffix_min[g + 1], suffix_max[g + 1])):
                continue
            counts[g] = k
            visit(g + 1, rest, left)
        counts[g] = 0

    visit(0, denominator, target)
    return results


def _unrepresentable_coordinate(
    coords: np.ndarray, denominator: int, target: np.ndarray, rational: bool, limit: int = 50_000
) -> Optional[int]:
    """First state whose prior coordinate no count vector reaches on its own, if any"""
    for c in range(coords.shape[1]):
        options = sorted(set(coords[:, c]))
        norm = (lambda v: v) if rational else (lambda v: round(float(v), 9))
        reach = {norm(0)}
        for _ in range(denominator):
            reach = {norm(s + v) for s in reach for v in options}
            if len(reach) > limit:
                return None
        if norm(target[c]) not in reach:
            return c + 1
    return None


def _order_matrix_1d(weights: np.ndarray, xs: np.ndarray, tol: Number) -> np.ndarray:
    """order[a, b] iff the call function of a lies below that of b at every grid point"""
    diff = xs[:, None] - xs[None, :]
    kinks = np.where(diff > 0, diff, 0 * diff)
    calls = weights @ kinks
    E, G = calls.shape
    order = np.zeros((E, E), dtype=bool)
    chunk = max(1, ORDER_CHUNK_ENTRIES // max(1, E * G))
    for start in range(0, E, chunk):
        block = calls[start:start + chunk]
        order[start:start + chunk] = np.all(
            block[:, None, :] <= calls[None, :, :] + tol, axis=2
        ).astype(bool)
    return order


def _full_information_row(
    grid: BeliefGrid,
    prior: Prior,
    counts: List[Tuple[int, ...]],
    rows: List[List[Number]],
    denominator: int,
    rational: bool,
) -> int:
    """
    Row index of the full-information element among the count rows, or
    len(rows) when it has to be appended
    """
    vertices = [grid.index_of(Belief.vertex(k, grid.states)) for k in range(grid.states)]
    scaled = [Fraction(c) * denominator if rational else float(c) * denominator for c in prior.belief.coords]
    integral = [round(float(s)) for s in scaled]
    tol = 0 if rational else settings.feasibility_tol * denominator
    if all(abs(s - k) <= tol for s, k in zip(scaled, integral)):
        # Q p is integral: full information is the count vector Q p on the vertices
        target = [0] * grid.size
        for g, k in zip(vertices, integral):
            target[g] = k
        target = tuple(target)
        return next((i for i, c in enumerate(counts) if c == target), len(rows))
    full = full_information_distribution(prior)
    row = [zero(rational)] * grid.size
    for b, w in zip(full.support, full.weights):
        row[grid.index_of(b)] = w
    row_tol = 0 if rational else settings.feasibility_tol
    return next(
        (i for i, r in enumerate(rows) if all(abs(a - b) <= row_tol for a, b in zip(row, r))),
        len(rows),
    )


def enumerate_lattice(
    grid: BeliefGrid,
    denominator: int,
    prior: Prior,
    cap: Optional[int] = None,
    include_full_information: bool = True,
) -> DistributionLattice:
    """Enumerate the distribution lattice and its convex order"""
    if denominator < 1:
        raise InputError(f"Denominator must be a positive integer, got {denominator}")
    if prior.states != grid.states:
        raise DimensionMismatchError(
            "Prior and grid have different state counts", prior=prior.states, grid=grid.states
        )
    cap = cap or settings.lattice_cap
    rational = grid.rational and prior.belief.exact
    tol: Number = Fraction(0) if rational else settings.feasibility_tol * denominator

    if rational:
        coords = np.array([list(b.point) for b in grid.points], dtype=object)
        target = np.array([Fraction(v) * denominator for v in prior.belief.point], dtype=object)
    else:
        coords = grid.coordinate_matrix
        target = prior.belief.as_array() * denominator

    counts = _enumerate_counts(coords, denominator, target, tol, cap)
    if not counts:
        coordinate = _unrepresentable_coordinate(coords, denominator, target, rational)
        raise PriorNotRepresentableError(
            f"Prior {prior} is not representable with weights k/{denominator} on the grid"
            + (f" (state {coordinate})" if coordinate is not None else ""),
            coordinate=coordinate, denominator=denominator,
            hint="choose a denominator Q with Q*p integral on the grid, or add the prior to the grid",
        )

    unit = (lambda k: Fraction(k, denominator)) if rational else (lambda k: k / denominator)
    rows = [[unit(k) for k in row] for row in counts]
    full_row = None
    if include_full_information and grid.contains_vertices():
        full_row = _full_information_row(grid, prior, counts, rows, denominator, rational)
        if full_row == len(rows):
            full = full_information_distribution(prior)
            row = [zero(rational)] * grid.size
            for b, w in zip(full.support, full.weights):
                row[grid.index_of(b)] = w if rational else float(w)
            rows.append(row)

    elements = []
    for row in rows:
        support = [grid.points[g] for g, w in enumerate(row) if w != 0]
        weights = [w for w in row if w != 0]
        elements.append(FiniteBeliefDistribution(tuple(support), tuple(weights)))
    ranked = sorted(range(len(elements)), key=lambda i: elements[i].key)
    elements = [elements[i] for i in ranked]
    weight_matrix = np.array([rows[i] for i in ranked], dtype=object if rational else float)
    if len(elements) > cap:
        raise LatticeCapError(
            f"Lattice exceeds {cap} elements; use a coarser grid or a smaller denominator",
            cap=cap, grid_size=grid.size, denominator=denominator,
        )

    full_index = None if full_row is None else ranked.index(full_row)

    order_tol: Number = Fraction(0) if rational else settings.feasibility_tol
    if grid.states == 2:
        xs = np.array([b.q for b in grid.points], dtype=object) if rational else grid.values
        order = _order_matrix_1d(weight_matrix, xs, order_tol)
    else:
        E = len(elements)
        order = np.eye(E, dtype=bool)
        for a in range(E):
            for b in range(E):
                if a != b:
                    order[a, b] = is_contraction(elements[a], elements[b])

    lattice = DistributionLattice(
        grid=grid,
        denominator=denominator,
        prior=prior,
        elements=tuple(elements),
        weight_matrix=weight_matrix,
        order=order,
        full_information_index=full_index,
        rational=rational,
    )
    logger.info(
        f"Lattice: {lattice.size} elements, {lattice.edge_count} strict relations "
        f"(grid {grid.size} points, Q={denominator})"
    )
    return lattice
