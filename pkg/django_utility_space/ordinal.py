"""Ordinal information carried by utility points.

A preference order is an ordered partition of the candidates 1..m into
tiers, best tier first. Strict orders are the facets of the permutohedron
drawn on the sphere; orders with ties are its lower-dimensional cells.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

from django_utility_space.constants import MALLOWS_MAX_M, TIE_TOL, CellKind
from django_utility_space.exceptions import (
    DimensionError,
    DimensionMismatchError,
    NonStrictOrderError,
    SizeLimitError,
    UtilitySpaceError,
)
from django_utility_space.geometry import UtilityPoint, validate_permutation

TIER_SEPARATOR = ">"
TIE_SEPARATOR = "="


@dataclass(frozen=True)
class PreferenceOrder:
    """A ranking of the candidates 1..m with ties, most preferred tier first."""

    tiers: Tuple[FrozenSet[int], ...]

    def __post_init__(self) -> None:
        """Validate the partition property."""
        tiers = tuple(frozenset(int(c) for c in tier) for tier in self.tiers)
        if not tiers:
            raise UtilitySpaceError("A preference order needs at least one tier.")
        if any(not tier for tier in tiers):
            raise UtilitySpaceError("Tiers of a preference order cannot be empty.")

        candidates = [c for tier in tiers for c in tier]
        if sorted(candidates) != list(range(1, len(candidates) + 1)):
            raise UtilitySpaceError(
                f"Tiers {[sorted(t) for t in tiers]} do not partition the candidates 1..m."
            )
        object.__setattr__(self, "tiers", tiers)

    @classmethod
    def from_tiers(cls, tiers: Iterable[Iterable[int]]) -> "PreferenceOrder":
        """Build an order from an iterable of candidate groups."""
        return cls(tuple(frozenset(tier) for tier in tiers))

    @classmethod
    def from_permutation(cls, permutation: Sequence[int]) -> "PreferenceOrder":
        """Build the strict order listing the 1-based candidates best first."""
        return cls(tuple(frozenset([c]) for c in permutation))

    @classmethod
    def indifferent(cls, m: int) -> "PreferenceOrder":
        """Return the order with all m candidates tied."""
        return cls((frozenset(range(1, m + 1)),))

    @classmethod
    def parse(cls, text: str) -> "PreferenceOrder":
        """Parse an order such as '1>4>2=3'.

        :raises UtilitySpaceError: If the text is not a valid order.
        """
        try:
            tiers = [
                frozenset(int(c) for c in tier.split(TIE_SEPARATOR))
                for tier in text.strip().split(TIER_SEPARATOR)
            ]
        except ValueError as exc:
            raise UtilitySpaceError(f"'{text}' is not a valid preference order.") from exc
        return cls(tuple(tiers))

    @property
    def m(self) -> int:
        """Return the number of candidates."""
        return sum(len(tier) for tier in self.tiers)

    @property
    def is_strict(self) -> bool:
        """Return True if every tier is a single candidate."""
        return all(len(tier) == 1 for tier in self.tiers)

    def as_permutation(self) -> Tuple[int, ...]:
        """Return the candidates best first.

        :raises NonStrictOrderError: If the order has ties.
        """
        if not self.is_strict:
            raise NonStrictOrderError(f"Order {self} has ties.")
        return tuple(next(iter(tier)) for tier in self.tiers)

    def tier_of(self) -> Dict[int, int]:
        """Return a map from candidate to the index of its tier."""
        return {c: index for index, tier in enumerate(self.tiers) for c in tier}

    def reversed(self) -> "PreferenceOrder":
        """Return the order with its tiers in reverse sequence."""
        return PreferenceOrder(tuple(reversed(self.tiers)))

    def relabel(self, sigma: Sequence[int]) -> "PreferenceOrder":
        """Rename candidate c to sigma[c - 1] + 1, with sigma a 0-based permutation."""
        sigma = validate_permutation(sigma, self.m)
        tiers = (frozenset(sigma[c - 1] + 1 for c in tier) for tier in self.tiers)
        return PreferenceOrder(tuple(tiers))

    def __str__(self) -> str:
        """Serialise as tiers joined by '>' and ties joined by '='."""
        return TIER_SEPARATOR.join(
            TIE_SEPARATOR.join(str(c) for c in sorted(tier)) for tier in self.tiers
        )


def order_from_ranking(ranking: Sequence[int], ties: Sequence[bool]) -> PreferenceOrder:
    """Build an order from 0-based candidates sorted best first.

    ties[k] tells whether ranking[k + 1] is in the same tier as ranking[k].
    """
    tiers: List[List[int]] = [[int(ranking[0]) + 1]]
    for candidate, tied in zip(ranking[1:], ties):
        if tied:
            tiers[-1].append(int(candidate) + 1)
        else:
            tiers.append([int(candidate) + 1])
    return PreferenceOrder.from_tiers(tiers)


def to_order(x: UtilityPoint, tie_tol: float = TIE_TOL) -> PreferenceOrder:
    """Return the ordinal preferences of a point.

    Candidates are sorted by decreasing utility and neighbours at most
    tie_tol apart are merged into one tier, so ties are transitive.
    """
    if tie_tol < 0:
        raise UtilitySpaceError(f"The tie tolerance must be nonnegative, got {tie_tol}.")
    if x.is_indifference:
        return PreferenceOrder.indifferent(x.m)

    values = x.values
    ranking = sorted(range(x.m), key=lambda i: (-values[i], i))
    ties = [values[a] - values[b] <= tie_tol for a, b in zip(ranking, ranking[1:])]
    return order_from_ranking(ranking, ties)


def rows_to_orders(vectors: np.ndarray, tie_tol: float = TIE_TOL) -> List[PreferenceOrder]:
    """Apply to_order to every row of an (n, m) array of canonical vectors.

    Zero rows, which stand for the indifference point, give the single-tier
    order. Equal orders are the same object.
    """
    if tie_tol < 0:
        raise UtilitySpaceError(f"The tie tolerance must be nonnegative, got {tie_tol}.")
    vectors = np.asarray(vectors, dtype=float)
    if vectors.shape[0] == 0:
        return []

    m = vectors.shape[1]
    rankings = np.argsort(-vectors, axis=1, kind="stable")
    ordered = np.take_along_axis(vectors, rankings, axis=1)
    ties = (ordered[:, :-1] - ordered[:, 1:]) <= tie_tol
    keys = np.concatenate([rankings, ties.astype(rankings.dtype)], axis=1)

    unique, inverse = np.unique(keys, axis=0, return_inverse=True)
    orders = [order_from_ranking(row[:m], row[m:].astype(bool)) for row in unique]
    return [orders[index] for index in inverse.reshape(-1)]


def cell_kind(order: PreferenceOrder) -> CellKind:
    """Classify an order as a cell of the permutohedron.

    Strict orders are facets. For 4 candidates, orders with three distinct
    utility levels are edges and orders with two are vertices. Everything
    else is OTHER.
    """
    count = len(order.tiers)
    if count == order.m:
        return CellKind.FACET
    if order.m == 4 and count == 3:
        return CellKind.EDGE
    if order.m == 4 and count == 2:
        return CellKind.VERTEX
    return CellKind.OTHER


def kendall_tau(a: PreferenceOrder, b: PreferenceOrder) -> int:
    """Return the number of candidate pairs ranked differently by two strict orders.

    :raises NonStrictOrderError: If either order has ties.
    :raises DimensionMismatchError: If the orders rank different candidates.
    """
    if not (a.is_strict and b.is_strict):
        raise NonStrictOrderError(f"Kendall's tau needs strict orders, got {a} and {b}.")
    if a.m != b.m:
        raise DimensionMismatchError(f"Cannot compare orders over {a.m} and {b.m} candidates.")

    position = b.tier_of()
    ranking = a.as_permutation()
    return sum(
        1
        for first, second in itertools.combinations(ranking, 2)
        if position[first] > position[second]
    )


def _check_enumerable(m: int) -> None:
    if m < 1:
        raise DimensionError(f"The number of candidates must be positive, got {m}.")
    if m > MALLOWS_MAX_M:
        raise SizeLimitError(
            f"Enumerating {m}! orders is not supported, the limit is m = {MALLOWS_MAX_M}."
        )


@lru_cache(maxsize=None)
def _strict_orders(m: int) -> Tuple[PreferenceOrder, ...]:
    return tuple(
        PreferenceOrder.from_permutation(permutation)
        for permutation in itertools.permutations(range(1, m + 1))
    )


@lru_cache(maxsize=None)
def _order_positions(m: int) -> Dict[PreferenceOrder, int]:
    return {order: index for index, order in enumerate(_strict_orders(m))}


def enumerate_strict_orders(m: int) -> List[PreferenceOrder]:
    """Return the m! strict orders, in lexicographic order of their permutations.

    :raises SizeLimitError: If m > 8.
    """
    _check_enumerable(m)
    return list(_strict_orders(m))


def order_index(order: PreferenceOrder) -> int:
    """Return the position of a strict order in enumerate_strict_orders(m)."""
    _check_enumerable(order.m)
    if not order.is_strict:
        raise NonStrictOrderError(f"Order {order} has ties.")
    return _order_positions(order.m)[order]
