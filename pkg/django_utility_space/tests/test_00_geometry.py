"""Tests for the geometry of the utility space."""

import math

import numpy as np
from django.test import SimpleTestCase

from django_utility_space.exceptions import (
    DimensionError,
    DimensionMismatchError,
    IndifferencePointError,
    InvalidPermutationError,
    NonFiniteUtilityError,
    UtilitySpaceError,
)
from django_utility_space.geometry import (
    RawUtility,
    UtilityPoint,
    canonicalize,
    cube_distance_m3,
    distance,
    geodesic_point,
    hyperplane_basis,
    invert,
    permute,
    project_to_hyperplane,
    to_cube_representative,
)

# Reference values computed independently in extended precision.
EXAMPLE_DISTANCE = 0.774017593842653
WITNESS_AB = math.pi / 6
WITNESS_AC = 0.242563874095486


def random_point(rng: np.random.Generator, m: int) -> UtilityPoint:
    """Return a random non-indifferent point."""
    return canonicalize(rng.standard_normal(m))


class CanonicalizeTestCase(SimpleTestCase):
    """Test the canonical representatives."""

    def test_canonical_invariants(self):
        """Canonical vectors sum to zero and have norm one."""
        rng = np.random.default_rng(1)
        for m in range(2, 9):
            point = random_point(rng, m)
            self.assertLessEqual(abs(math.fsum(point.values)), 1e-12)
            self.assertLessEqual(abs(np.linalg.norm(point.vector) - 1.0), 1e-12)

    def test_known_value(self):
        """The projection of (2, 0, -1) is (5/3, -1/3, -4/3), then normalised."""
        point = canonicalize([2.0, 0.0, -1.0])
        expected = [0.771516749810459, -0.154303349962092, -0.617213399848368]
        for value, reference in zip(point.values, expected):
            self.assertAlmostEqual(value, reference, delta=1e-14)

    def test_quotient_invariance(self):
        """Positive scaling and constant shifts do not change the class."""
        rng = np.random.default_rng(2)
        for _ in range(10000):
            m = int(rng.integers(2, 7))
            u = rng.standard_normal(m)
            a = rng.uniform(0.1, 10.0)
            b = rng.uniform(-10.0, 10.0)
            self.assertTrue(canonicalize(a * u + b).isclose(canonicalize(u), atol=1e-12))

    def test_extreme_magnitudes(self):
        """Finite vectors anywhere in the float range keep their class."""
        reference = canonicalize([3.0, 1.0, 0.0, -2.0])
        for scale in (1e155, 1e200, 1e300, 1.7e308 / 3.0):
            u = [scale * 3.0, scale * 1.0, 0.0, -scale * 2.0]
            self.assertTrue(canonicalize(u).isclose(reference, atol=1e-12), scale)
        self.assertTrue(canonicalize([1e308, 1e308, 0.0]).isclose(canonicalize([1.0, 1.0, 0.0])))
        self.assertTrue(canonicalize([1.7e308, 1.7e308, 1.7e308]).is_indifference)
        self.assertTrue(canonicalize([1e-300, 0.0, 0.0]).is_indifference)

    def test_indifference(self):
        """Constant vectors are the indifference point."""
        self.assertTrue(canonicalize([5.0, 5.0, 5.0]).is_indifference)
        self.assertTrue(canonicalize([0.0, 0.0]).is_indifference)
        self.assertTrue(canonicalize([3.0]).is_indifference)
        self.assertEqual(canonicalize([1.0, 1.0, 1.0, 1.0]), UtilityPoint.indifference(4))

    def test_invalid_input(self):
        """Non-finite entries, empty vectors and bad tolerances are rejected."""
        with self.assertRaises(NonFiniteUtilityError):
            canonicalize([1.0, float("nan"), 0.0])
        with self.assertRaises(NonFiniteUtilityError):
            RawUtility((1.0, float("inf")))
        with self.assertRaises(DimensionError):
            canonicalize([])
        with self.assertRaises(ValueError):
            canonicalize([1.0, 2.0], tol=0.0)
        with self.assertRaises(UtilitySpaceError):
            UtilityPoint(m=2, values=(1.0, 0.0))

    def test_projection(self):
        """Projection subtracts the mean."""
        projected = project_to_hyperplane(RawUtility((1.0, 2.0, 6.0)))
        self.assertEqual(projected.tolist(), [-2.0, -1.0, 3.0])


class UtilityPointTestCase(SimpleTestCase):
    """Test the point and raw vector types."""

    def test_validation(self):
        """Points are checked against the canonical invariants."""
        with self.assertRaises(DimensionError):
            UtilityPoint(m=0)
        with self.assertRaises(DimensionMismatchError):
            UtilityPoint(m=3, values=(1.0, -1.0))
        with self.assertRaises(NonFiniteUtilityError):
            UtilityPoint(m=2, values=(float("nan"), 0.0))
        with self.assertRaises(UtilitySpaceError):
            UtilityPoint(m=2, values=(0.5, -0.5))
        with self.assertRaises(DimensionError):
            RawUtility(())

    def test_raw_utility(self):
        """Raw vectors keep their values and canonicalize like sequences."""
        raw = RawUtility((2, 0, -1))
        self.assertEqual(raw.m, 3)
        self.assertEqual(raw.values, (2.0, 0.0, -1.0))
        self.assertEqual(canonicalize(raw), canonicalize([2.0, 0.0, -1.0]))

    def test_comparison(self):
        """Points over different candidates or of different kinds are never close."""
        x = canonicalize([1.0, 0.0, -1.0])
        indifference = UtilityPoint.indifference(3)
        self.assertFalse(x.isclose(canonicalize([1.0, 0.0, 0.0, -1.0])))
        self.assertFalse(x.isclose(indifference))
        self.assertTrue(indifference.isclose(UtilityPoint.indifference(3)))
        np.testing.assert_array_equal(indifference.vector, np.zeros(3))

    def test_str(self):
        """Points print their coordinates, the indifference point its size."""
        self.assertEqual(str(canonicalize([1.0, -1.0])), "(0.707107, -0.707107)")
        self.assertEqual(str(UtilityPoint.indifference(4)), "Indifference(m=4)")


class DistanceTestCase(SimpleTestCase):
    """Test the round metric."""

    def test_example_distance(self):
        """Distance between the canonical forms of two three-candidate vectors."""
        u = canonicalize([0.0, 0.71, -0.71])
        v = canonicalize([0.57, 0.22, -0.79])
        self.assertAlmostEqual(distance(u, v), EXAMPLE_DISTANCE, delta=1e-10)

    def test_extremes(self):
        """A point is at 0 from itself and at pi from its inverse."""
        rng = np.random.default_rng(3)
        for m in (2, 3, 5):
            x = random_point(rng, m)
            self.assertEqual(distance(x, x), 0.0)
            self.assertAlmostEqual(distance(x, invert(x)), math.pi, delta=1e-12)

    def test_metric_axioms(self):
        """Symmetry is exact and the triangle inequality holds."""
        rng = np.random.default_rng(4)
        for _ in range(10000):
            m = int(rng.integers(3, 7))
            x, y, z = (random_point(rng, m) for _ in range(3))
            self.assertEqual(distance(x, y), distance(y, x))
            self.assertGreaterEqual(distance(x, y) + distance(y, z) - distance(x, z), -1e-10)

    def test_permutations_are_isometries(self):
        """Relabelling candidates preserves distances."""
        rng = np.random.default_rng(5)
        for _ in range(1000):
            m = int(rng.integers(3, 8))
            x, y = random_point(rng, m), random_point(rng, m)
            sigma = rng.permutation(m)
            self.assertAlmostEqual(
                distance(permute(x, sigma), permute(y, sigma)), distance(x, y), delta=1e-12
            )

    def test_inversion_is_an_isometry(self):
        """Inversion is an involution preserving distances."""
        rng = np.random.default_rng(6)
        x, y = random_point(rng, 4), random_point(rng, 4)
        self.assertEqual(invert(invert(x)), x)
        self.assertEqual(-x, invert(x))
        self.assertAlmostEqual(distance(-x, -y), distance(x, y), delta=1e-12)
        self.assertEqual(invert(UtilityPoint.indifference(4)), UtilityPoint.indifference(4))

    def test_indifference_has_no_distance(self):
        """The indifference point is not on the sphere."""
        x = canonicalize([1.0, 0.0, 0.0])
        with self.assertRaises(IndifferencePointError):
            distance(x, UtilityPoint.indifference(3))

    def test_dimension_mismatch(self):
        """Points over different candidates cannot be compared."""
        with self.assertRaises(DimensionMismatchError):
            distance(canonicalize([1.0, 0.0, 0.0]), canonicalize([1.0, 0.0, 0.0, 0.0]))


class PermuteTestCase(SimpleTestCase):
    """Test relabelling of candidates."""

    def test_permute(self):
        """Candidate i becomes candidate sigma[i]."""
        x = canonicalize([3.0, 2.0, 1.0])
        permuted = permute(x, [2, 0, 1])
        self.assertEqual(permuted.values, (x.values[1], x.values[2], x.values[0]))
        self.assertEqual(permute(x, [0, 1, 2]), x)

    def test_invalid_permutation(self):
        """Sequences that are not permutations are rejected."""
        x = canonicalize([3.0, 2.0, 1.0])
        with self.assertRaises(InvalidPermutationError):
            permute(x, [0, 0, 1])
        with self.assertRaises(InvalidPermutationError):
            permute(x, [0, 1])
        indifference = UtilityPoint.indifference(3)
        self.assertEqual(permute(indifference, [2, 0, 1]), indifference)


class BasisTestCase(SimpleTestCase):
    """Test the orthonormal basis of H."""

    def test_orthonormal(self):
        """The columns are orthonormal and sum to zero."""
        for m in range(2, 8):
            basis = hyperplane_basis(m)
            self.assertEqual(basis.shape, (m, m - 1))
            np.testing.assert_allclose(basis.T @ basis, np.eye(m - 1), atol=1e-12)
            np.testing.assert_allclose(basis.sum(axis=0), np.zeros(m - 1), atol=1e-12)

    def test_read_only(self):
        """The cached basis cannot be modified."""
        with self.assertRaises(ValueError):
            hyperplane_basis(3)[0, 0] = 1.0

    def test_small_m(self):
        """One candidate has an empty basis and zero candidates are rejected."""
        self.assertEqual(hyperplane_basis(1).shape, (1, 0))
        with self.assertRaises(DimensionError):
            hyperplane_basis(0)


class GeodesicTestCase(SimpleTestCase):
    """Test points along geodesics."""

    def test_endpoints_and_midpoint(self):
        """The geodesic starts at x, ends at y and is traversed at constant speed."""
        rng = np.random.default_rng(7)
        x, y = random_point(rng, 4), random_point(rng, 4)
        self.assertTrue(geodesic_point(x, y, 0.0).isclose(x, atol=1e-12))
        self.assertTrue(geodesic_point(x, y, 1.0).isclose(y, atol=1e-12))
        middle = geodesic_point(x, y, 0.5)
        self.assertAlmostEqual(distance(x, middle), distance(x, y) / 2, delta=1e-12)
        self.assertAlmostEqual(distance(middle, y), distance(x, y) / 2, delta=1e-12)

    def test_invalid(self):
        """Antipodal endpoints and parameters outside [0, 1] are rejected."""
        x = canonicalize([1.0, 0.0, -1.0])
        with self.assertRaises(UtilitySpaceError):
            geodesic_point(x, -x, 0.5)
        with self.assertRaises(UtilitySpaceError):
            geodesic_point(x, x, 1.5)
        self.assertEqual(geodesic_point(x, x, 0.3), x)


class CubeMetricTestCase(SimpleTestCase):
    """Test the metric along the edges of the cube for three candidates."""

    def setUp(self):
        """Set up the witness points."""
        self.a = canonicalize([1.0, -1.0, -1.0])
        self.b = canonicalize([1.0, 0.0, -1.0])
        self.c = canonicalize([1.0, -0.5, -1.0])

    def test_cube_representative(self):
        """The representative has minimum -1 and maximum 1."""
        representative = to_cube_representative(self.c)
        np.testing.assert_allclose(representative, [1.0, -0.5, -1.0], atol=1e-12)

    def test_witness_points(self):
        """The cube metric is not proportional to the round metric."""
        self.assertAlmostEqual(cube_distance_m3(self.a, self.b), 1.0, delta=1e-12)
        self.assertAlmostEqual(cube_distance_m3(self.a, self.c), 0.5, delta=1e-12)
        self.assertAlmostEqual(distance(self.a, self.b), WITNESS_AB, delta=1e-12)
        self.assertAlmostEqual(distance(self.a, self.c), WITNESS_AC, delta=1e-12)

        cube_ratio = cube_distance_m3(self.a, self.b) / cube_distance_m3(self.a, self.c)
        round_ratio = distance(self.a, self.b) / distance(self.a, self.c)
        self.assertAlmostEqual(cube_ratio, 2.0, delta=1e-12)
        self.assertGreater(round_ratio, 2.1)

    def test_antipodes(self):
        """Inverse points are half the hexagon apart."""
        self.assertAlmostEqual(cube_distance_m3(self.a, -self.a), 6.0, delta=1e-12)

    def test_permutation_isometry(self):
        """Relabelling candidates preserves cube distances."""
        rng = np.random.default_rng(8)
        for _ in range(1000):
            x, y = random_point(rng, 3), random_point(rng, 3)
            sigma = rng.permutation(3)
            self.assertAlmostEqual(
                cube_distance_m3(permute(x, sigma), permute(y, sigma)),
                cube_distance_m3(x, y),
                delta=1e-12,
            )

    def test_only_three_candidates(self):
        """The cube metric is only defined for m = 3."""
        x = canonicalize([1.0, 0.0, 0.0, 0.0])
        with self.assertRaises(DimensionError):
            cube_distance_m3(x, x)
