"""
Indirect utilities over beliefs: closed-form piecewise functions and
grid-sampled functions, expected utilities and convex envelopes
"""
import logging
import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import LinearNDInterpolator

from config import settings
from errors import (
    BeliefError,
    ContinuityError,
    DimensionMismatchError,
    HullError,
    InputError,
)
from services.beliefs import Belief, BeliefGrid, FiniteBeliefDistribution
from services.lp_kernel import LpProblem, LpStatus, solve_lp
from utils.numeric import Number

logger = logging.getLogger(__name__)

MAX_DEGREE = 6
PIECEWISE = "piecewise"
SAMPLED = "sampled"


@dataclass(frozen=True)
class CosineTerm:
    """amplitude * cos(frequency * x + phase)"""
    amplitude: float
    frequency: float
    phase: float = 0.0

    def evaluate(self, x):
        return self.amplitude * np.cos(self.frequency * x + self.phase)


@dataclass(frozen=True)
class Piece:
    """
    One closed-form piece on [start, end]:
    sum_k coefficients[k] * (x - center)^k, plus an optional cosine term
    """
    start: Number
    end: Number
    coefficients: Tuple[Number, ...]
    center: Number = 0
    cosine: Optional[CosineTerm] = None

    def __post_init__(self):
        if not self.coefficients:
            raise InputError("A utility piece needs at least one coefficient")
        if len(self.coefficients) > MAX_DEGREE + 1:
            raise InputError(
                f"Polynomial degree {len(self.coefficients) - 1} exceeds {MAX_DEGREE}",
                interval=[float(self.start), float(self.end)],
            )
        if not self.start < self.end:
            raise InputError(
                f"Piece interval [{self.start}, {self.end}] is empty",
                interval=[float(self.start), float(self.end)],
            )

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def exact(self) -> bool:
        return self.cosine is None and all(
            isinstance(v, (Fraction, int)) for v in (*self.coefficients, self.center)
        )

    def polynomial(self, x):
        shifted = x - self.center
        acc = self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            acc = acc * shifted + c
        return acc

    def evaluate(self, x):
        value = self.polynomial(x)
        if self.cosine is not None:
            value = value + self.cosine.evaluate(x)
        return value

    def stationary_points(self, slope: float) -> List[float]:
        """Real x in the piece where the polynomial part has derivative `slope`"""
        if self.cosine is not None or self.degree < 2:
            return []
        coeffs = [float(c) for c in self.coefficients]
        center = float(self.center)
        if self.degree == 2:
            if coeffs[2] == 0:
                return []
            candidates = [center + (slope - coeffs[1]) / (2 * coeffs[2])]
        else:
            # derivative minus slope, highest power first for np.roots
            deriv = [k * coeffs[k] for k in range(len(coeffs) - 1, 0, -1)]
            deriv[-1] -= slope
            roots = np.roots(deriv)
            candidates = [center + r.real for r in roots if abs(r.imag) < 1e-12]
        lo, hi = float(self.start), float(self.end)
        return [x for x in candidates if lo < x < hi]


@dataclass(frozen=True, eq=False)
class UtilityFunction:
    """
    Indirect utility v over beliefs

    piecewise: closed-form pieces covering [0, 1] (two states only); at a
    shared endpoint the left piece is used.
    sampled: one value per grid point, linear interpolation between grid
    points (barycentric on simplex cells for three or more states).
    """
    representation: str
    pieces: Tuple[Piece, ...] = ()
    grid: Optional[BeliefGrid] = None
    values: Tuple[Number, ...] = ()
    continuous: bool = True
    name: str = ""

    @classmethod
    def piecewise(
        cls, pieces: Sequence[Piece], continuous: Optional[bool] = None, name: str = ""
    ) -> "UtilityFunction":
        if not pieces:
            raise InputError("A piecewise utility needs at least one piece", utility=name)
        ordered = tuple(sorted(pieces, key=lambda p: p.start))
        tol = settings.belief_sum_tol
        if abs(ordered[0].start) > tol or abs(ordered[-1].end - 1) > tol:
            raise InputError(
                f"Pieces of {name or 'utility'} must cover [0, 1]",
                utility=name, start=float(ordered[0].start), end=float(ordered[-1].end),
            )
        for left, right in zip(ordered, ordered[1:]):
            if abs(left.end - right.start) > tol:
                raise InputError(
                    f"Pieces of {name or 'utility'} leave a gap or overlap at {left.end}",
                    utility=name, left_end=float(left.end), right_start=float(right.start),
                )

        jumps = [
            float(left.end)
            for left, right in zip(ordered, ordered[1:])
            if abs(float(left.evaluate(left.end)) - float(right.evaluate(right.start))) > 1e-9
        ]
        if continuous is None:
            continuous = not jumps
        elif continuous and jumps:
            raise ContinuityError(
                f"Utility {name or ''} is declared continuous but jumps at {jumps}",
                utility=name, jumps=jumps,
            )
        return cls(PIECEWISE, pieces=ordered, continuous=continuous, name=name)

    @classmethod
    def sampled(cls, grid: BeliefGrid, values: Sequence[Number], name: str = "") -> "UtilityFunction":
        if len(values) != grid.size:
            raise DimensionMismatchError(
                f"Sampled utility {name} has {len(values)} values for {grid.size} grid points",
                utility=name, values=len(values), grid=grid.size,
            )
        if not all(math.isfinite(float(v)) for v in values):
            raise InputError(f"Sampled utility {name} has non-finite values", utility=name)
        if grid.states > 2 and grid.size < grid.states:
            raise InputError(
                f"Sampled utility {name} needs at least {grid.states} affinely independent points",
                utility=name,
            )
        return cls(SAMPLED, grid=grid, values=tuple(values), continuous=True, name=name)

    @classmethod
    def constant(cls, value: Number, states: int = 2, name: str = "") -> "UtilityFunction":
        if states == 2:
            return cls.piecewise([Piece(0, 1, (value,))], continuous=True, name=name)
        return cls.sampled(BeliefGrid.simplex_mesh(1, states), [value] * states, name=name)

    @property
    def states(self) -> int:
        return 2 if self.representation == PIECEWISE else self.grid.states

    @property
    def exact(self) -> bool:
        if self.representation == PIECEWISE:
            return all(p.exact for p in self.pieces)
        return self.grid.rational and all(isinstance(v, (Fraction, int)) for v in self.values)

    @cached_property
    def _ends(self) -> List[float]:
        return [float(p.end) for p in self.pieces]

    @cached_property
    def _interpolator(self) -> LinearNDInterpolator:
        return LinearNDInterpolator(
            self.grid.coordinate_matrix, np.array([float(v) for v in self.values])
        )

    @cached_property
    def breakpoints(self) -> np.ndarray:
        """Piece endpoints (piecewise) or grid values (sampled, two states)"""
        if self.representation == PIECEWISE:
            edges = {float(p.start) for p in self.pieces} | {float(p.end) for p in self.pieces}
            return np.array(sorted(edges))
        if self.states == 2:
            return self.grid.values.copy()
        return np.array([])

    def piece_at(self, x: float) -> int:
        index = bisect_left(self._ends, float(x))
        return min(index, len(self.pieces) - 1)

    def evaluate(self, q: Belief) -> Number:
        """Exact when the utility and the belief are exact, float otherwise"""
        if q.states != self.states:
            raise DimensionMismatchError(
                f"Belief has {q.states} states, utility {self.name} has {self.states}",
                utility=self.name,
            )
        if self.representation == PIECEWISE:
            x = q.q
            piece = self.pieces[self.piece_at(x)]
            if piece.exact and isinstance(x, (Fraction, int)):
                return Fraction(piece.evaluate(Fraction(x)))
            return float(piece.evaluate(float(x)))
        if self.states == 2:
            return self._interpolate_1d(q.q)
        value = float(self._interpolator(q.as_array().reshape(1, -1))[0])
        if math.isnan(value):
            raise BeliefError(
                f"Belief {q} lies outside the sampled grid of {self.name}", utility=self.name
            )
        return value

    def _interpolate_1d(self, x: Number) -> Number:
        xs = [b.q for b in self.grid.points]
        if x < xs[0] - settings.belief_sum_tol or x > xs[-1] + settings.belief_sum_tol:
            raise BeliefError(
                f"Belief {x} lies outside the sampled range [{xs[0]}, {xs[-1]}] of {self.name}",
                utility=self.name,
            )
        exact = self.exact and isinstance(x, (Fraction, int))
        i = bisect_left(xs, x)
        if i < len(xs) and xs[i] == x:
            return Fraction(self.values[i]) if exact else float(self.values[i])
        i = min(max(i, 1), len(xs) - 1)
        x0, x1 = xs[i - 1], xs[i]
        y0, y1 = self.values[i - 1], self.values[i]
        if exact:
            return Fraction(y0) + (Fraction(y1) - Fraction(y0)) * (Fraction(x) - x0) / (x1 - x0)
        x, x0, x1 = float(x), float(x0), float(x1)
        return float(y0) + (float(y1) - float(y0)) * (x - x0) / (x1 - x0)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized float evaluation at scalar beliefs (two states)"""
        if self.states != 2:
            raise DimensionMismatchError("Vectorized scalar evaluation needs two states", utility=self.name)
        xs = np.asarray(xs, dtype=float)
        if self.representation == SAMPLED:
            return np.interp(xs, self.grid.values, np.array([float(v) for v in self.values]))
        index = np.minimum(np.searchsorted(np.array(self._ends), xs, side="left"), len(self.pieces) - 1)
        out = np.empty_like(xs)
        for k, piece in enumerate(self.pieces):
            mask = index == k
            if np.any(mask):
                out[mask] = piece.evaluate(xs[mask])
        return out

    def evaluate_coords(self, coords: np.ndarray) -> np.ndarray:
        """Float evaluation at many beliefs, one row per belief (states 1..|Ω|-1)"""
        coords = np.asarray(coords, dtype=float).reshape(-1, self.states - 1)
        if self.states == 2:
            return self.evaluate_many(coords[:, 0])
        values = self._interpolator(coords)
        if np.any(np.isnan(values)):
            raise BeliefError(f"Some beliefs lie outside the sampled grid of {self.name}", utility=self.name)
        return values

    def right_limits(self) -> Tuple[np.ndarray, np.ndarray]:
        """Breakpoints where the value jumps, with the right-hand piece's value there"""
        if self.representation != PIECEWISE or self.continuous:
            return np.array([]), np.array([])
        xs, vals = [], []
        for left, right in zip(self.pieces, self.pieces[1:]):
            at = float(left.end)
            xs.append(at)
            vals.append(float(right.evaluate(at)))
        return np.array(xs), np.array(vals)

    def values_on(self, grid: BeliefGrid, rational: bool = False) -> np.ndarray:
        """Utility at every grid point; an object array of Fractions when exact"""
        if rational:
            values = [self.evaluate(b) for b in grid.points]
            if not all(isinstance(v, Fraction) for v in values):
                raise InputError(
                    f"Utility {self.name} cannot be evaluated exactly (cosine terms need float mode)",
                    utility=self.name,
                )
            return np.array(values, dtype=object)
        if grid.states == 2:
            return self.evaluate_many(grid.values)
        return np.array([float(self.evaluate(b)) for b in grid.points])


@dataclass(frozen=True)
class ValueAtBelief:
    belief: Belief
    value: Number

    def __post_init__(self):
        if not math.isfinite(float(self.value)):
            raise InputError(f"Non-finite value at belief {self.belief}")


def expected_utility(u: UtilityFunction, mu: FiniteBeliefDistribution) -> Number:
    """E_mu[u(q)]"""
    return sum(w * u.evaluate(b) for b, w in zip(mu.support, mu.weights))


def _lower_hull(points: Sequence[Tuple[Number, Number]]) -> List[Tuple[Number, Number]]:
    """Monotone-chain lower hull of planar points, left to right"""
    best = {}
    for x, y in points:
        if x not in best or y < best[x]:
            best[x] = y
    hull: List[Tuple[Number, Number]] = []
    for p in sorted(best.items()):
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _hull_facet(hull, x, tol) -> Tuple[int, int, Number]:
    """Vertices (i, j) of the hull facet containing x and the weight on j"""
    if x < hull[0][0] - tol or x > hull[-1][0] + tol:
        raise HullError(
            f"Query {x} lies outside the hull [{hull[0][0]}, {hull[-1][0]}]",
            query=float(x), hull=[float(hull[0][0]), float(hull[-1][0])],
        )
    for i, (hx, _) in enumerate(hull):
        if abs(hx - x) <= tol:
            return i, i, 0
    for i in range(len(hull) - 1):
        if hull[i][0] < x < hull[i + 1][0]:
            lam = (x - hull[i][0]) / (hull[i + 1][0] - hull[i][0])
            return i, i + 1, lam
    return len(hull) - 1, len(hull) - 1, 0


def _envelope_1d(points: Sequence[ValueAtBelief], query: Belief, tol):
    raw = [(p.belief.q, p.value) for p in points]
    hull = _lower_hull(raw)
    x = query.q
    i, j, lam = _hull_facet(hull, x, tol)
    value = hull[i][1] * (1 - lam) + hull[j][1] * lam
    mix = [(hull[i][0], 1 - lam)] + ([(hull[j][0], lam)] if j != i else [])
    return value, mix


def _envelope_lp(points: Sequence[ValueAtBelief], query: Belief, rational: bool):
    states = query.states
    n = len(points)
    rows = [[1] * n] + [[p.belief.point[c] for p in points] for c in range(states - 1)]
    rhs = [1] + list(query.point)
    objective = [-p.value for p in points]
    result = solve_lp(LpProblem(objective, rows, rhs, rational=rational))
    if result.status != LpStatus.OPTIMAL:
        raise HullError(f"Query {query} lies outside the convex hull of the points", query=str(query))
    return -result.value, result.solution


def lower_convex_envelope(
    points: Sequence[ValueAtBelief], query: Belief, method: str = "auto", tol: Optional[float] = None
) -> Number:
    """
    Minimum of sum a_k v_k over convex weights a with sum a_k q_k = query
    Two states use the planar lower hull, otherwise (or method="lp") an LP
    """
    if not points:
        raise InputError("Envelope needs at least one point")
    if any(p.belief.states != query.states for p in points):
        raise DimensionMismatchError("Envelope points and query have different state counts")
    rational = query.exact and all(p.belief.exact and isinstance(p.value, (Fraction, int)) for p in points)
    if method not in ("auto", "hull", "lp"):
        raise InputError(f"Unknown envelope method {method!r}")
    if query.states == 2 and method in ("auto", "hull"):
        tol = 0 if rational else (settings.feasibility_tol if tol is None else tol)
        value, _ = _envelope_1d(points, query, tol)
        return value
    if method == "hull":
        raise DimensionMismatchError("The planar hull method needs two states", states=query.states)
    value, _ = _envelope_lp(points, query, rational)
    return value


def _grid_points_with_prior(u: UtilityFunction, grid: BeliefGrid, p: Belief) -> List[ValueAtBelief]:
    if not grid.hull_contains(p):
        raise HullError(f"Prior {p} lies outside the hull of the grid", prior=str(p))
    rational = grid.rational and p.exact and u.exact
    extended = grid.with_points([p])
    values = u.values_on(extended, rational=rational)
    return [ValueAtBelief(b, -v) for b, v in zip(extended.points, values)]


def concavify_unconstrained(u: UtilityFunction, grid: BeliefGrid, p: Belief) -> Number:
    """Upper concave envelope of u over the grid points (and p itself), evaluated at p"""
    negated = _grid_points_with_prior(u, grid, p)
    return -lower_convex_envelope(negated, p)


def upper_envelope_support(u: UtilityFunction, grid: BeliefGrid, p: Belief) -> FiniteBeliefDistribution:
    """A distribution with mean p that attains the unconstrained concavification"""
    negated = _grid_points_with_prior(u, grid, p)
    rational = p.exact and all(isinstance(v.value, Fraction) for v in negated)
    if p.states == 2:
        tol = 0 if rational else settings.feasibility_tol
        _, mix = _envelope_1d(negated, p, tol)
        support = [Belief((x,)) for x, _ in mix]
        weights = [w for _, w in mix]
    else:
        _, alphas = _envelope_lp(negated, p, rational)
        support = [v.belief for v in negated]
        weights = list(alphas)
    return FiniteBeliefDistribution.create(
        support, weights, normalize=not rational, drop_below=0 if rational else 1e-12
    )
