"""Populations of agents, stored as one array of canonical vectors."""

from typing import Iterable, Iterator, Optional, Sequence, Union, overload

import numpy as np

from django_utility_space.exceptions import DimensionError, DimensionMismatchError
from django_utility_space.geometry import UtilityPoint


class Population(Sequence[UtilityPoint]):
    """An immutable population of n utility points over m candidates.

    Row i of vectors is the canonical vector of agent i, or zeros when the
    agent sits at the indifference point, which the indifferent mask records.
    """

    def __init__(self, vectors: np.ndarray, indifferent: Optional[np.ndarray] = None) -> None:
        """Store read-only copies of the vectors and of the indifference mask."""
        vectors = np.array(vectors, dtype=float)
        if vectors.ndim != 2 or vectors.shape[1] < 1:
            raise DimensionError(f"A population needs an (n, m) array, got shape {vectors.shape}.")
        if indifferent is None:
            indifferent = np.zeros(vectors.shape[0], dtype=bool)
        indifferent = np.array(indifferent, dtype=bool).reshape(-1)
        if indifferent.size != vectors.shape[0]:
            raise DimensionMismatchError(
                f"The mask has {indifferent.size} entries for {vectors.shape[0]} agents."
            )

        vectors[indifferent] = 0.0
        vectors.setflags(write=False)
        indifferent.setflags(write=False)
        self.vectors = vectors
        self.indifferent = indifferent

    @classmethod
    def empty(cls, m: int) -> "Population":
        """Return the population with no agent."""
        return cls(np.zeros((0, m)))

    @classmethod
    def from_points(cls, points: Iterable[UtilityPoint], m: Optional[int] = None) -> "Population":
        """Build a population from utility points.

        :param m: The number of candidates, required when points is empty.
        :raises DimensionMismatchError: If the points disagree on m.
        """
        points = list(points)
        if m is None:
            if not points:
                raise DimensionError("The number of candidates of an empty population is unknown.")
            m = points[0].m

        vectors = np.zeros((len(points), m))
        indifferent = np.zeros(len(points), dtype=bool)
        for index, point in enumerate(points):
            if point.m != m:
                raise DimensionMismatchError(
                    f"Agent {index} has {point.m} candidates, expected {m}."
                )
            if point.is_indifference:
                indifferent[index] = True
            else:
                vectors[index] = point.values
        return cls(vectors, indifferent)

    @classmethod
    def concatenate(cls, parts: Sequence["Population"], m: int) -> "Population":
        """Join populations over m candidates, keeping their order."""
        if not parts:
            return cls.empty(m)
        for part in parts:
            if part.m != m:
                raise DimensionMismatchError(
                    f"Cannot join populations over {part.m} and {m} candidates."
                )
        return cls(
            np.concatenate([part.vectors for part in parts]),
            np.concatenate([part.indifferent for part in parts]),
        )

    @property
    def m(self) -> int:
        """Return the number of candidates."""
        return self.vectors.shape[1]

    @property
    def n_indifferent(self) -> int:
        """Return the number of agents at the indifference point."""
        return int(self.indifferent.sum())

    @property
    def sphere_vectors(self) -> np.ndarray:
        """Return the canonical vectors of the agents that are not indifferent."""
        return self.vectors[~self.indifferent]

    def __len__(self) -> int:
        """Return the number of agents."""
        return self.vectors.shape[0]

    @overload
    def __getitem__(self, index: int) -> UtilityPoint: ...

    @overload
    def __getitem__(self, index: slice) -> "Population": ...

    def __getitem__(self, index: Union[int, slice]) -> Union[UtilityPoint, "Population"]:
        """Return one agent as a UtilityPoint, or a slice as a Population."""
        if isinstance(index, slice):
            return Population(self.vectors[index], self.indifferent[index])
        if self.indifferent[index]:
            return UtilityPoint.indifference(self.m)
        return UtilityPoint.from_vector(self.vectors[index])

    def __iter__(self) -> Iterator[UtilityPoint]:
        """Iterate over the agents."""
        for index in range(len(self)):
            yield self[index]

    def __eq__(self, other: object) -> bool:
        """Compare the vectors and the masks exactly."""
        if not isinstance(other, Population):
            return NotImplemented
        return bool(
            np.array_equal(self.vectors, other.vectors)
            and np.array_equal(self.indifferent, other.indifferent)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        """Return the size of the population."""
        return f"Population(n={len(self)}, m={self.m}, n_indifferent={self.n_indifferent})"


PopulationLike = Union[Population, Sequence[UtilityPoint]]


def as_population(points: PopulationLike, m: Optional[int] = None) -> Population:
    """Return points as a Population, without copying if it already is one."""
    if isinstance(points, Population):
        if m is not None and points.m != m:
            raise DimensionMismatchError(f"Expected {m} candidates, got {points.m}.")
        return points
    return Population.from_points(points, m)
