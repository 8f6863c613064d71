"""Lotteries, bipoints and the summation operator.

A utility vector acts on the tangent hyperplane H of the simplex of
lotteries as a linear form: M is at least as good as L exactly when the
bipoint M - L lies in the positive half-hyperplane of u. The sum of a set of
points is the convex cone they generate, and by duality it is the set of
points that respect every unanimous preference of the set.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, List, Tuple

import numpy as np
from scipy.optimize import nnls
from scipy.special import gamma, ndtri
from scipy.stats import qmc

from django_utility_space.constants import (
    CONE_TOL,
    MIN_GRID_RESOLUTION,
    ORACLE_TOL,
    PREFERENCE_TOL,
    Ordering,
)
from django_utility_space.exceptions import (
    DimensionMismatchError,
    InvalidLotteryError,
    UtilitySpaceError,
)
from django_utility_space.geometry import (
    UtilityLike,
    UtilityPoint,
    as_vector,
    canonicalize,
    hyperplane_basis,
)

logger = logging.getLogger(__name__)

# Lottery and bipoint invariants are checked to this precision.
LOTTERY_TOL = 1e-12

# Feasibility slack for <u_i, delta> >= 0 in the unanimity oracle.
FEASIBILITY_TOL = 1e-12

# Above this many generators the oracle's face enumeration gets expensive.
ORACLE_LARGE_SET = 12

# Irrational rotations of the Fibonacci lattice on the 3-sphere. The second is
# the real root of x^4 = x + 4.
SPIRAL_ROTATIONS = (math.sqrt(2.0), 1.533751168755204)


@dataclass(frozen=True)
class Lottery:
    """A probability distribution over the m candidates."""

    probs: Tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate that the probabilities are nonnegative and sum to one."""
        probs = tuple(float(p) for p in self.probs)
        if not probs:
            raise InvalidLotteryError("A lottery needs at least one candidate.")
        if any(not math.isfinite(p) or p < 0 for p in probs):
            raise InvalidLotteryError(f"Lottery {probs} has negative or non-finite entries.")
        if abs(math.fsum(probs) - 1.0) > LOTTERY_TOL:
            raise InvalidLotteryError(f"Lottery {probs} does not sum to 1.")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def certain(cls, candidate: int, m: int) -> "Lottery":
        """Return the lottery that picks the 0-based candidate surely."""
        probs = [0.0] * m
        probs[candidate] = 1.0
        return cls(tuple(probs))

    @property
    def m(self) -> int:
        """Return the number of candidates."""
        return len(self.probs)

    @property
    def vector(self) -> np.ndarray:
        """Return the probabilities as a numpy array."""
        return np.array(self.probs, dtype=float)


@dataclass(frozen=True)
class Bipoint:
    """The difference M - L of two lotteries, an element of H."""

    delta: Tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate that the bipoint lies in H."""
        delta = tuple(float(d) for d in self.delta)
        if abs(math.fsum(delta)) > LOTTERY_TOL:
            raise InvalidLotteryError(f"Bipoint {delta} is not in the tangent hyperplane.")
        object.__setattr__(self, "delta", delta)

    @property
    def m(self) -> int:
        """Return the number of candidates."""
        return len(self.delta)

    @property
    def vector(self) -> np.ndarray:
        """Return the bipoint as a numpy array."""
        return np.array(self.delta, dtype=float)


def bipoint(lottery_l: Lottery, lottery_m: Lottery) -> Bipoint:
    """Return the bipoint from L to M."""
    if lottery_l.m != lottery_m.m:
        raise DimensionMismatchError(
            f"Lotteries over {lottery_l.m} and {lottery_m.m} candidates cannot be compared."
        )
    return Bipoint(tuple(m - l for l, m in zip(lottery_l.probs, lottery_m.probs)))


def expected_utility(u: UtilityLike, lottery: Lottery) -> float:
    """Return the expected utility of a lottery for the raw utility vector u."""
    vector = as_vector(u, lottery.m)
    return math.fsum(vector * lottery.vector)


def _direction(u: UtilityLike, m: int) -> np.ndarray:
    """Return the canonical vector of u, or zeros for the indifference point."""
    if isinstance(u, UtilityPoint):
        if u.m != m:
            raise DimensionMismatchError(f"Expected {m} candidates, got {u.m}.")
        return u.vector
    return canonicalize(as_vector(u, m)).vector


def half_hyperplane_side(u: UtilityLike, delta: Bipoint, tol: float = PREFERENCE_TOL) -> Ordering:
    """Return the side of the hyperplane orthogonal to u on which delta lies.

    MORE_PREFERRED means delta is in the open positive half-hyperplane of u.
    """
    inner = math.fsum(_direction(u, delta.m) * delta.vector)
    if inner > tol:
        return Ordering.MORE_PREFERRED
    if inner < -tol:
        return Ordering.LESS_PREFERRED
    return Ordering.INDIFFERENT


def in_positive_half_hyperplane(u: UtilityLike, delta: Bipoint, strict: bool = False) -> bool:
    """Check whether delta belongs to the positive half-hyperplane of u.

    :param strict: Use the open half-hyperplane instead of the closed one.
    """
    side = half_hyperplane_side(u, delta)
    if strict:
        return side is Ordering.MORE_PREFERRED
    return side is not Ordering.LESS_PREFERRED


def prefers(
    u: UtilityLike, lottery_l: Lottery, lottery_m: Lottery, tol: float = PREFERENCE_TOL
) -> Ordering:
    """Compare lottery M to lottery L for the agent u.

    Raw utility vectors are canonicalised first, so the indifference band does
    not depend on their scale. The indifference point is indifferent between
    all lotteries.

    :raises DimensionMismatchError: If the inputs disagree on m.
    :return: MORE_PREFERRED if M is better than L, LESS_PREFERRED if it is worse.
    """
    return half_hyperplane_side(u, bipoint(lottery_l, lottery_m), tol)


def _generators(points: Iterable[UtilityPoint], m: int) -> np.ndarray:
    """Stack the canonical vectors of the non-indifferent points as rows."""
    rows: List[np.ndarray] = []
    for point in points:
        if point.m != m:
            raise DimensionMismatchError(
                f"Cannot combine points with {point.m} and {m} candidates."
            )
        if not point.is_indifference:
            rows.append(point.vector)
    if not rows:
        return np.zeros((0, m))
    return np.vstack(rows)


def _cone_projection(generators: np.ndarray, target: np.ndarray) -> Tuple[np.ndarray, float]:
    """Return the projection of target on the cone of the rows and the residual."""
    if generators.shape[0] == 0:
        return np.zeros_like(target), float(np.linalg.norm(target))
    weights, residual = nnls(generators.T, target)
    return generators.T @ weights, float(residual)


def sum_contains(points: Iterable[UtilityPoint], v: UtilityPoint, tol: float = CONE_TOL) -> bool:
    """Check whether v belongs to the sum of the points.

    The sum is the set of classes of nonnegative combinations of
    representatives, empty combination included. v is a member when the
    nonnegative least-squares residual of v against the canonical vectors is
    at most tol.

    :raises DimensionMismatchError: If the points disagree on m.
    """
    generators = _generators(points, v.m)
    if v.is_indifference:
        return True
    _, residual = _cone_projection(generators, v.vector)
    return residual <= tol


def cone_angle(points: Iterable[UtilityPoint], v: UtilityPoint) -> float:
    """Return the angle between v and the cone generated by the points.

    The angle is 0 inside the cone and is capped at pi/2, which is reached
    when the projection of v on the cone vanishes.
    """
    generators = _generators(points, v.m)
    if v.is_indifference:
        return 0.0
    projection, residual = _cone_projection(generators, v.vector)
    return math.atan2(residual, float(np.linalg.norm(projection)))


def grid_angular_resolution(m: int, grid_resolution: int) -> float:
    """Return the angular scale of the oracle grid on the unit sphere of H.

    For m = 3 this is the spacing 2 pi / n of the circle grid. For larger m it
    is twice the side of a cell of equal area on the (m - 2)-sphere.
    """
    if m <= 2:
        return math.pi
    if m == 3:
        return 2.0 * math.pi / grid_resolution
    dim = m - 2
    area = 2.0 * math.pi ** ((dim + 1) / 2.0) / gamma((dim + 1) / 2.0)
    return 2.0 * (area / grid_resolution) ** (1.0 / dim)


@lru_cache(maxsize=32)
def grid_directions(m: int, grid_resolution: int) -> np.ndarray:
    """Return deterministic quasi-uniform unit directions of H as rows.

    m = 3 uses equally spaced angles. m = 4 and m = 5 use Fibonacci lattices
    on the 2-sphere and the 3-sphere. Larger m use an unscrambled Halton
    sequence pushed through the normal quantile function. The array is
    read-only.
    """
    basis = hyperplane_basis(m)
    count = grid_resolution
    if m == 2:
        coordinates = np.array([[1.0], [-1.0]])
    elif m == 3:
        angles = 2.0 * math.pi * np.arange(count) / count
        coordinates = np.column_stack([np.cos(angles), np.sin(angles)])
    elif m == 4:
        index = np.arange(count)
        z = 1.0 - (2.0 * index + 1.0) / count
        radius = np.sqrt(1.0 - z * z)
        phi = index * math.pi * (3.0 - math.sqrt(5.0))
        coordinates = np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])
    elif m == 5:
        # Hopf coordinates with r^2 uniform on (0, 1) give the uniform measure.
        offset = np.arange(count) + 0.5
        inner = np.sqrt(offset / count)
        outer = np.sqrt(1.0 - offset / count)
        alpha = 2.0 * math.pi * offset / SPIRAL_ROTATIONS[0]
        beta = 2.0 * math.pi * offset / SPIRAL_ROTATIONS[1]
        coordinates = np.column_stack(
            [
                inner * np.sin(alpha),
                inner * np.cos(alpha),
                outer * np.sin(beta),
                outer * np.cos(beta),
            ]
        )
    else:
        # The first Halton point is the origin, which has no normal quantile.
        halton = qmc.Halton(d=m - 1, scramble=False).random(count + 1)[1:]
        coordinates = ndtri(halton)
        coordinates /= np.linalg.norm(coordinates, axis=1, keepdims=True)

    directions = coordinates @ basis.T
    directions.setflags(write=False)
    return directions


def _face_directions(generators: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Return the grid together with its projections on the faces of the dual cone.

    Projecting on the orthogonal complement of every subset of generators
    reaches directions where some <u_i, delta> vanish exactly, which a plain
    grid never hits.
    """
    candidates = [grid]
    count = generators.shape[0]
    m = grid.shape[1]
    if count > ORACLE_LARGE_SET:
        logger.warning("Unanimity oracle enumerating faces of %d generators", count)

    for size in range(1, min(count, m - 1) + 1):
        for subset in combinations(range(count), size):
            rows = generators[list(subset)]
            projector = np.linalg.pinv(rows) @ rows
            candidates.append(grid - grid @ projector)

    directions = np.vstack(candidates)
    norms = np.linalg.norm(directions, axis=1)
    keep = norms > 1e-9
    return directions[keep] / norms[keep, np.newaxis]


def unanimity_oracle(
    points: Iterable[UtilityPoint],
    v: UtilityPoint,
    grid_resolution: int,
    tol: float = ORACLE_TOL,
) -> bool:
    """Decide by brute force whether v respects every unanimous preference of the points.

    Every bipoint is a positive multiple of a direction of H, so it is enough
    to test directions. The oracle returns False when some tested direction
    delta satisfies <u, delta> >= 0 for every point u while <v, delta> < -tol.
    The directions are a deterministic grid plus its projections on the faces
    of the region where all points agree.

    :param grid_resolution: Number of grid directions, at least 16.
    :raises UtilitySpaceError: If the grid resolution is too small.
    """
    if grid_resolution < MIN_GRID_RESOLUTION:
        raise UtilitySpaceError(
            f"The grid resolution must be at least {MIN_GRID_RESOLUTION}, got {grid_resolution}."
        )
    generators = _generators(points, v.m)
    if v.is_indifference or v.m < 2:
        return True

    directions = _face_directions(generators, grid_directions(v.m, grid_resolution))
    if generators.shape[0]:
        unanimous = np.all(directions @ generators.T >= -FEASIBILITY_TOL, axis=1)
    else:
        unanimous = np.ones(directions.shape[0], dtype=bool)
    broken = unanimous & (directions @ v.vector < -tol)
    return not bool(broken.any())
