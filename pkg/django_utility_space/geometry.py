"""Geometry of the utility space.

A raw utility vector u of R^m is only defined up to a positive factor and an
additive constant. Each class is represented canonically by projecting u on
the zero-sum hyperplane H and normalising it, which identifies the utility
space minus the indifference point with the unit sphere of H. The class of
the constant vectors is the indifference point, which has no place on the
sphere.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from django_utility_space.constants import INDIFFERENCE_TOL
from django_utility_space.exceptions import (
    DimensionError,
    DimensionMismatchError,
    IndifferencePointError,
    InvalidPermutationError,
    NonFiniteUtilityError,
    UtilitySpaceError,
)

# Tolerance used to check the invariants of canonical representatives.
CANONICAL_TOL = 1e-12

# Length of the closed hexagonal polyline of cube edges used for m = 3.
HEXAGON_LENGTH = 12.0


@dataclass(frozen=True)
class RawUtility:
    """A utility vector, one representative of its equivalence class."""

    values: Tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate that the vector is non-empty and finite."""
        values = tuple(float(value) for value in self.values)
        if not values:
            raise DimensionError("A utility vector needs at least one candidate.")
        if not all(math.isfinite(value) for value in values):
            raise NonFiniteUtilityError(f"Utility vector {values} has non-finite entries.")
        object.__setattr__(self, "values", values)

    @property
    def m(self) -> int:
        """Return the number of candidates."""
        return len(self.values)

    @property
    def vector(self) -> np.ndarray:
        """Return the values as a numpy array."""
        return np.array(self.values, dtype=float)


@dataclass(frozen=True)
class UtilityPoint:
    """A point of the utility space, stored as its canonical representative.

    values is None for the indifference point. Otherwise it is a unit vector
    whose coordinates sum to zero.
    """

    m: int
    values: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        """Validate the canonical invariants."""
        if self.m < 1:
            raise DimensionError(f"The number of candidates must be positive, got {self.m}.")
        if self.values is None:
            return

        values = tuple(float(value) for value in self.values)
        if len(values) != self.m:
            raise DimensionMismatchError(
                f"Expected {self.m} coordinates, got {len(values)}."
            )
        if not all(math.isfinite(value) for value in values):
            raise NonFiniteUtilityError(f"Utility point {values} has non-finite entries.")
        if abs(math.fsum(values)) > CANONICAL_TOL:
            raise UtilitySpaceError(f"Coordinates of {values} do not sum to zero.")
        if abs(math.sqrt(math.fsum(value * value for value in values)) - 1.0) > CANONICAL_TOL:
            raise UtilitySpaceError(f"Utility point {values} is not a unit vector.")
        object.__setattr__(self, "values", values)

    @classmethod
    def indifference(cls, m: int) -> "UtilityPoint":
        """Return the indifference point for m candidates."""
        return cls(m=m)

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "UtilityPoint":
        """Wrap a vector that is already canonical."""
        values = tuple(float(value) for value in vector)
        return cls(m=len(values), values=values)

    @property
    def is_indifference(self) -> bool:
        """Return True for the indifference point."""
        return self.values is None

    @property
    def vector(self) -> np.ndarray:
        """Return the canonical vector, or the zero vector for the indifference point."""
        if self.values is None:
            return np.zeros(self.m)
        return np.array(self.values, dtype=float)

    def isclose(self, other: "UtilityPoint", atol: float = CANONICAL_TOL) -> bool:
        """Compare two points coordinate-wise within atol."""
        if self.m != other.m or self.is_indifference != other.is_indifference:
            return False
        if self.is_indifference:
            return True
        return bool(np.allclose(self.vector, other.vector, rtol=0.0, atol=atol))

    def __neg__(self) -> "UtilityPoint":
        """Return the inverted point."""
        return invert(self)

    def __str__(self) -> str:
        """Return a short representation."""
        if self.values is None:
            return f"Indifference(m={self.m})"
        return "(" + ", ".join(f"{value:.6g}" for value in self.values) + ")"


UtilityLike = Union[RawUtility, UtilityPoint, Sequence[float], np.ndarray]


def as_vector(u: UtilityLike, m: Optional[int] = None) -> np.ndarray:
    """Convert any utility-like input to a finite float vector.

    :param u: A RawUtility, a UtilityPoint or a sequence of reals.
    :param m: The expected number of candidates, if known.
    :raises NonFiniteUtilityError: If an entry is NaN or infinite.
    :raises DimensionMismatchError: If the length differs from m.
    :return: A new one-dimensional float array.
    """
    if isinstance(u, (RawUtility, UtilityPoint)):
        vector = u.vector
    else:
        vector = np.array(u, dtype=float).reshape(-1)
        if vector.size == 0:
            raise DimensionError("A utility vector needs at least one candidate.")
        if not np.all(np.isfinite(vector)):
            raise NonFiniteUtilityError(
                f"Utility vector {vector.tolist()} has non-finite entries."
            )
    if m is not None and vector.size != m:
        raise DimensionMismatchError(f"Expected {m} candidates, got {vector.size}.")
    return vector


def _binary_scale(vector: np.ndarray) -> Tuple[np.ndarray, int]:
    """Divide vector by the power of two just above its largest entry.

    The scaling is exact and the scaled entries lie in (-1, 1).
    """
    exponent = math.frexp(float(np.max(np.abs(vector))))[1]
    return np.ldexp(vector, -exponent), exponent


def _project_scaled(vector: np.ndarray) -> Tuple[np.ndarray, int]:
    """Return P_H of the binary-scaled vector and the scale exponent."""
    scaled, exponent = _binary_scale(vector)
    projected = scaled - math.fsum(scaled) / scaled.size
    # A second pass removes the rounding left by the first subtraction.
    return projected - math.fsum(projected) / scaled.size, exponent


def project_to_hyperplane(u: UtilityLike) -> np.ndarray:
    """Project a utility vector on the zero-sum hyperplane H.

    This applies P_H = Id - J/m, that is, it subtracts the mean utility.
    Entries of the result beyond the float range come out infinite.
    """
    projected, exponent = _project_scaled(as_vector(u))
    with np.errstate(over="ignore"):
        return np.ldexp(projected, exponent)


def canonicalize(u: UtilityLike, tol: float = INDIFFERENCE_TOL) -> UtilityPoint:
    """Return the canonical point of the class of u.

    :param u: A raw utility vector, with entries anywhere in the float range.
    :param tol: Projections no longer than tol are the indifference point.
    :return: The indifference point, or P_H u / |P_H u|.
    """
    if tol <= 0:
        raise ValueError(f"The indifference tolerance must be positive, got {tol}.")

    projected, exponent = _project_scaled(as_vector(u))
    norm = float(np.linalg.norm(projected))
    with np.errstate(over="ignore"):
        scaled_tol = float(np.ldexp(tol, -exponent))
    if norm <= scaled_tol:
        return UtilityPoint.indifference(projected.size)

    unit = projected / norm
    unit -= math.fsum(unit) / unit.size
    unit /= np.linalg.norm(unit)
    return UtilityPoint.from_vector(unit)


def _require_sphere_points(*points: UtilityPoint) -> int:
    """Check that the points are comparable sphere points and return m."""
    m = points[0].m
    for point in points:
        if point.m != m:
            raise DimensionMismatchError(
                f"Cannot compare points with {m} and {point.m} candidates."
            )
        if point.is_indifference:
            raise IndifferencePointError("The indifference point has no place on the sphere.")
    return m


def angular_distances(vectors: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Return the great-circle distances from the rows of vectors to center.

    Uses 2 atan2(|x - y|, |x + y|), which equals arccos<x, y> for unit vectors
    and stays accurate for nearly equal and nearly antipodal points.
    """
    vectors = np.atleast_2d(vectors)
    difference = np.linalg.norm(vectors - center, axis=1)
    total = np.linalg.norm(vectors + center, axis=1)
    return 2.0 * np.arctan2(difference, total)


def distance(x: UtilityPoint, y: UtilityPoint) -> float:
    """Return the round-metric distance between two points, in radians.

    :raises IndifferencePointError: If either point is the indifference point.
    :return: A value in [0, pi].
    """
    _require_sphere_points(x, y)
    return float(angular_distances(x.vector[np.newaxis, :], y.vector)[0])


def invert(x: UtilityPoint) -> UtilityPoint:
    """Reverse the preferences of x while keeping their intensities."""
    if x.is_indifference:
        return x
    return UtilityPoint(m=x.m, values=tuple(-value for value in x.values))


def validate_permutation(sigma: Sequence[int], m: int) -> Tuple[int, ...]:
    """Check that sigma is a permutation of 0..m-1.

    :raises InvalidPermutationError: If it is not.
    :return: The permutation as a tuple of ints.
    """
    sigma = tuple(int(index) for index in sigma)
    if sorted(sigma) != list(range(m)):
        raise InvalidPermutationError(f"{sigma} is not a permutation of 0..{m - 1}.")
    return sigma


def permute(x: UtilityPoint, sigma: Sequence[int]) -> UtilityPoint:
    """Relabel the candidates of x: candidate i becomes candidate sigma[i].

    Candidates are 0-based here, so sigma is a permutation of 0..m-1.
    """
    sigma = validate_permutation(sigma, x.m)
    if x.is_indifference:
        return x
    permuted = [0.0] * x.m
    for source, target in enumerate(sigma):
        permuted[target] = x.values[source]
    return UtilityPoint(m=x.m, values=tuple(permuted))


@lru_cache(maxsize=None)
def _hyperplane_basis(m: int) -> np.ndarray:
    columns = np.eye(m)[:, : m - 1] - 1.0 / m
    if m == 1:
        basis = np.zeros((1, 0))
    else:
        q, r = np.linalg.qr(columns)
        # Gram-Schmidt keeps the diagonal of R positive.
        basis = q * np.sign(np.diag(r))
    basis.setflags(write=False)
    return basis


def hyperplane_basis(m: int) -> np.ndarray:
    """Return an orthonormal basis of H as the columns of an (m, m - 1) array.

    The basis is Gram-Schmidt applied to P_H e_1, ..., P_H e_(m-1), so it
    only depends on m. The array is read-only.
    """
    if m < 1:
        raise DimensionError(f"The number of candidates must be positive, got {m}.")
    return _hyperplane_basis(m)


def geodesic_point(x: UtilityPoint, y: UtilityPoint, t: float) -> UtilityPoint:
    """Return the point at fraction t of the shortest arc from x to y.

    :raises IndifferencePointError: If either point is the indifference point.
    :raises UtilitySpaceError: If x and y are antipodal, or t is outside [0, 1].
    """
    _require_sphere_points(x, y)
    if not 0.0 <= t <= 1.0:
        raise UtilitySpaceError(f"The geodesic parameter must be in [0, 1], got {t}.")

    theta = distance(x, y)
    if theta == 0.0:
        return x
    if math.pi - theta < CANONICAL_TOL:
        raise UtilitySpaceError("The geodesic between antipodal points is not unique.")

    point = (math.sin((1.0 - t) * theta) * x.vector + math.sin(t * theta) * y.vector) / math.sin(
        theta
    )
    return canonicalize(point)


def to_cube_representative(x: UtilityPoint) -> np.ndarray:
    """Return the representative of x with minimum -1 and maximum 1."""
    _require_sphere_points(x)
    vector = x.vector
    low, high = vector.min(), vector.max()
    return 2.0 * (vector - low) / (high - low) - 1.0


# For each (argmax, argmin) pair of a cube representative, the hexagon
# position of the edge start and the direction in which the free middle
# coordinate moves along it. The vertices (1,-1,-1), (1,1,-1), (-1,1,-1),
# (-1,1,1), (-1,-1,1), (1,-1,1) sit at positions 0, 2, 4, 6, 8, 10.
_HEXAGON_EDGES = {
    (0, 2): (1.0, 1.0),
    (1, 2): (3.0, -1.0),
    (1, 0): (5.0, 1.0),
    (2, 0): (7.0, -1.0),
    (2, 1): (9.0, 1.0),
    (0, 1): (11.0, -1.0),
}


def _hexagon_position(representative: np.ndarray) -> float:
    top = int(np.argmax(representative))
    bottom = int(np.argmin(representative))
    middle = 3 - top - bottom
    offset, direction = _HEXAGON_EDGES[(top, bottom)]
    return (offset + direction * float(representative[middle])) % HEXAGON_LENGTH


def cube_distance_m3(x: UtilityPoint, y: UtilityPoint) -> float:
    """Return the distance along the six cube edges representing U_3.

    Each point is mapped to its representative with min -1 and max 1, which
    lies on the closed hexagon of cube edges avoiding (1,1,1) and (-1,-1,-1).
    The distance is the shorter way round this hexagon of length 12.

    :raises DimensionError: If m is not 3.
    :raises IndifferencePointError: If either point is the indifference point.
    """
    m = _require_sphere_points(x, y)
    if m != 3:
        raise DimensionError(f"The cube metric is only defined for 3 candidates, got {m}.")

    gap = abs(_hexagon_position(to_cube_representative(x)) - _hexagon_position(
        to_cube_representative(y)
    ))
    return min(gap, HEXAGON_LENGTH - gap)
