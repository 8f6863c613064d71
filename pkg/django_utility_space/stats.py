"""Statistics of sampled populations.

Agents at the indifference point have no place on the sphere. They are left
out of every spherical statistic and reported as a separate count.
"""

import logging
import math
from collections import Counter
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaincc
from scipy.stats import ks_2samp

from django_utility_space.constants import DEGENERATE_MEAN_TOL, MALLOWS_MAX_M, TIE_TOL
from django_utility_space.exceptions import (
    DegenerateMeanError,
    DimensionMismatchError,
    EmptyPopulationError,
    IndifferenceCenterError,
    InfiniteRatioError,
    InvalidRadiusError,
    NonStrictKeysError,
    SizeLimitError,
)
from django_utility_space.geometry import UtilityPoint, angular_distances, canonicalize
from django_utility_space.ordinal import PreferenceOrder, rows_to_orders
from django_utility_space.population import Population, PopulationLike, as_population

logger = logging.getLogger(__name__)

Histogram = Dict[PreferenceOrder, int]


def _is_order_list(items: Sequence[Any]) -> bool:
    if isinstance(items, Population) or not items:
        return False
    return isinstance(items[0], PreferenceOrder)


def facet_histogram(
    population: Union[PopulationLike, Sequence[PreferenceOrder]], tie_tol: float = TIE_TOL
) -> Histogram:
    """Count the preference orders of a population.

    Orders with ties are counted under their own key. The indifference
    point counts under the order with all candidates tied.

    :param population: Utility points, or orders as drawn by the Mallows culture.
    :raises SizeLimitError: If m > 8.
    """
    if _is_order_list(population):
        orders = list(population)
    else:
        if not isinstance(population, Population) and len(population) == 0:
            return {}
        points = as_population(population)
        if points.m > MALLOWS_MAX_M:
            raise SizeLimitError(
                f"Facet histograms are limited to {MALLOWS_MAX_M} candidates, got {points.m}."
            )
        orders = rows_to_orders(points.vectors, tie_tol)

    if orders and orders[0].m > MALLOWS_MAX_M:
        raise SizeLimitError(
            f"Facet histograms are limited to {MALLOWS_MAX_M} candidates, got {orders[0].m}."
        )
    return dict(Counter(orders))


def chi_square_uniformity(counts: Mapping[PreferenceOrder, int], m: int) -> Tuple[float, float]:
    """Test observed strict order counts against equal probabilities.

    Orders missing from counts were observed zero times. The p-value is the
    upper tail of the chi-square law with m! - 1 degrees of freedom.

    :raises NonStrictKeysError: If an order has ties.
    :raises EmptyPopulationError: If the total count is zero.
    :return: The Pearson statistic and its p-value.
    """
    for order in counts:
        if not order.is_strict:
            raise NonStrictKeysError(f"Order {order} is not a facet.")
        if order.m != m:
            raise DimensionMismatchError(f"Order {order} does not rank {m} candidates.")

    total = sum(counts.values())
    if total <= 0:
        raise EmptyPopulationError("A chi-square test needs at least one observation.")

    cells = math.factorial(m)
    if cells == 1:
        return 0.0, 1.0
    expected = total / cells
    missing = cells - len(counts)
    statistic = math.fsum((count - expected) ** 2 / expected for count in counts.values())
    statistic += missing * expected
    dof = cells - 1
    return statistic, float(gammaincc(dof / 2.0, statistic / 2.0))


def mean_resultant(population: PopulationLike) -> Tuple[UtilityPoint, float]:
    """Return the direction and the length of the mean resultant vector.

    The mean of the canonical vectors is accumulated with compensated
    summation, so the result does not depend on the order of the agents.

    :raises EmptyPopulationError: If no agent is on the sphere.
    :raises DegenerateMeanError: If the mean vector vanishes.
    """
    vectors = _sphere_vectors(population)
    mean = _compensated_mean(vectors)
    length = float(np.linalg.norm(mean))
    if length <= DEGENERATE_MEAN_TOL:
        raise DegenerateMeanError(
            f"The mean resultant length {length} is too small to have a direction."
        )
    return canonicalize(mean), min(length, 1.0)


def _compensated_mean(vectors: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(column) for column in vectors.T]) / vectors.shape[0]


def _sphere_vectors(population: PopulationLike) -> np.ndarray:
    if not isinstance(population, Population) and len(population) == 0:
        raise EmptyPopulationError("The population is empty.")
    vectors = as_population(population).sphere_vectors
    if vectors.shape[0] == 0:
        raise EmptyPopulationError("The population has no agent outside the indifference point.")
    return vectors


def _check_ball(center: UtilityPoint, radius: float) -> None:
    if center.is_indifference:
        raise IndifferenceCenterError("A ball cannot be centred at the indifference point.")
    if not 0.0 < radius <= math.pi:
        raise InvalidRadiusError(f"The radius must be in (0, pi], got {radius}.")


def ball_probability(population: PopulationLike, center: UtilityPoint, radius: float) -> float:
    """Return the fraction of agents on the sphere within radius of center.

    :raises IndifferenceCenterError: If center is the indifference point.
    :raises InvalidRadiusError: If radius is not in (0, pi].
    :raises EmptyPopulationError: If no agent is on the sphere.
    """
    _check_ball(center, radius)
    vectors = _sphere_vectors(population)
    if vectors.shape[1] != center.m:
        raise DimensionMismatchError(f"Expected {vectors.shape[1]} candidates, got {center.m}.")
    inside = angular_distances(vectors, center.vector) <= radius
    return float(np.count_nonzero(inside)) / vectors.shape[0]


def empirical_density_ratio(
    population: PopulationLike,
    center: UtilityPoint,
    radius: float,
    reference: PopulationLike,
) -> float:
    """Estimate the density of population relative to reference on a ball.

    The reference population is meant to be drawn from the uniform culture,
    so the ratio estimates the density with respect to that measure.

    :raises InfiniteRatioError: If no reference agent is in the ball.
    """
    probability = ball_probability(population, center, radius)
    reference_probability = ball_probability(reference, center, radius)
    if reference_probability == 0.0:
        raise InfiniteRatioError(f"No reference agent lies within {radius} of {center}.")
    return probability / reference_probability


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> Tuple[float, float]:
    """Return the two-sample Kolmogorov-Smirnov statistic and p-value."""
    result = ks_2samp(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return float(result.statistic), float(result.pvalue)


def _facet_section(histogram: Histogram, m: Optional[int]) -> Dict[str, Any]:
    """Return the facets, chi2 and p_value entries of a report."""
    section: Dict[str, Any] = {
        "facets": {
            str(order): count
            for order, count in sorted(histogram.items(), key=lambda item: str(item[0]))
        }
    }
    if not histogram or m is None:
        return section
    if not all(order.is_strict for order in histogram):
        logger.warning(
            "Population has agents on lower-dimensional cells, skipping the chi-square test"
        )
        return section
    statistic, p_value = chi_square_uniformity(histogram, m)
    section["chi2"] = statistic
    section["p_value"] = p_value
    return section


def order_report(orders: Sequence[PreferenceOrder]) -> Dict[str, Any]:
    """Return the report of a population of preference orders.

    Orders with every candidate tied stand for indifferent agents.
    """
    orders = list(orders)
    indifferent = [order for order in orders if len(order.tiers) == 1 and order.m > 1]
    classified = [order for order in orders if not (len(order.tiers) == 1 and order.m > 1)]
    report: Dict[str, Any] = {"n": len(orders), "n_indifferent": len(indifferent)}
    m = orders[0].m if orders else None
    report.update(_facet_section(facet_histogram(classified), m))
    return report


def population_report(
    population: PopulationLike,
    tie_tol: float = TIE_TOL,
    ball_center: Optional[UtilityPoint] = None,
    ball_radius: Optional[float] = None,
) -> Dict[str, Any]:
    """Return the JSON-compatible statistics report of a population.

    The report holds n, n_indifferent, the facet counts, the chi-square test
    of equal facet probabilities, the mean resultant length and direction,
    and the ball probability when a ball is given. Sections that are not
    defined for the population, such as the chi-square test of an empty
    one, are left out.
    """
    population = as_population(population)
    report: Dict[str, Any] = {"n": len(population), "n_indifferent": population.n_indifferent}

    sphere = Population(population.sphere_vectors)
    if population.m > MALLOWS_MAX_M:
        logger.info("Skipping facet counts for %d candidates", population.m)
    else:
        report.update(_facet_section(facet_histogram(sphere, tie_tol), population.m))

    if len(sphere):
        mean = _compensated_mean(sphere.vectors)
        length = float(np.linalg.norm(mean))
        report["mean_resultant_length"] = min(length, 1.0)
        if length > DEGENERATE_MEAN_TOL:
            report["mean_resultant_direction"] = list(canonicalize(mean).values)

    if ball_center is not None or ball_radius is not None:
        if ball_center is None or ball_radius is None:
            raise InvalidRadiusError("A ball needs both a center and a radius.")
        report["ball_probability"] = ball_probability(population, ball_center, ball_radius)
    return report
