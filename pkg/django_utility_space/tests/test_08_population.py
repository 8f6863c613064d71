"""Tests for populations of agents."""

import numpy as np
from django.test import SimpleTestCase

from django_utility_space.exceptions import DimensionError, DimensionMismatchError
from django_utility_space.geometry import UtilityPoint, canonicalize
from django_utility_space.population import Population, as_population


class PopulationTestCase(SimpleTestCase):
    """Test the population container."""

    def setUp(self):
        """Create a population with one indifferent agent."""
        self.points = [
            canonicalize([1.0, 0.0, -1.0]),
            UtilityPoint.indifference(3),
            canonicalize([0.0, 2.0, 1.0]),
        ]
        self.population = Population.from_points(self.points)

    def test_sequence(self):
        """A population behaves as a read-only sequence of points."""
        self.assertEqual(len(self.population), 3)
        self.assertEqual(self.population.m, 3)
        self.assertEqual(self.population.n_indifferent, 1)
        self.assertEqual(list(self.population), self.points)
        self.assertTrue(self.population[1].is_indifference)
        self.assertEqual(self.population.sphere_vectors.shape, (2, 3))
        with self.assertRaises(ValueError):
            self.population.vectors[0, 0] = 5.0

    def test_slices(self):
        """Slices are populations that keep the mask."""
        tail = self.population[1:]
        self.assertIsInstance(tail, Population)
        self.assertEqual(list(tail), self.points[1:])
        self.assertEqual(tail.n_indifferent, 1)

    def test_masked_rows_are_zero(self):
        """Rows of indifferent agents are stored as zeros."""
        population = Population(np.ones((2, 3)), [False, True])
        np.testing.assert_array_equal(population.vectors[1], np.zeros(3))

    def test_equality(self):
        """Populations compare by content and are unhashable."""
        self.assertEqual(self.population, Population.from_points(self.points))
        self.assertNotEqual(self.population, self.population[:2])
        self.assertNotEqual(self.population, self.points)
        with self.assertRaises(TypeError):
            hash(self.population)
        self.assertEqual(repr(self.population), "Population(n=3, m=3, n_indifferent=1)")

    def test_concatenate(self):
        """Joining keeps the order of the parts."""
        joined = Population.concatenate([self.population[:1], self.population[1:]], 3)
        self.assertEqual(joined, self.population)
        self.assertEqual(Population.concatenate([], 4), Population.empty(4))
        with self.assertRaises(DimensionMismatchError):
            Population.concatenate([self.population], 4)

    def test_invalid(self):
        """Shapes, masks and dimensions are checked."""
        with self.assertRaises(DimensionError):
            Population(np.zeros(3))
        with self.assertRaises(DimensionMismatchError):
            Population(np.zeros((2, 3)), [True])
        with self.assertRaises(DimensionError):
            Population.from_points([])
        with self.assertRaises(DimensionMismatchError):
            Population.from_points([canonicalize([1.0, 0.0]), canonicalize([1.0, 0.0, 0.0])])
        self.assertEqual(len(Population.from_points([], m=3)), 0)

    def test_as_population(self):
        """Populations pass through unchanged and lists are converted."""
        self.assertIs(as_population(self.population), self.population)
        self.assertEqual(as_population(self.points, 3), self.population)
        with self.assertRaises(DimensionMismatchError):
            as_population(self.population, 4)
