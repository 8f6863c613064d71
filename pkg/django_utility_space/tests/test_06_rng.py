"""Tests for the seeded random streams."""

import numpy as np
from django.test import SimpleTestCase

from django_utility_space.exceptions import InvalidSpecError
from django_utility_space.rng import MAX_SEED, RandomStream, validate_seed


class RandomStreamTestCase(SimpleTestCase):
    """Test the seeded random streams."""

    def test_determinism(self):
        """The same seed and position give the same draws."""
        first = RandomStream(42).substream(3).generator.random(5)
        second = RandomStream(42).substream(3).generator.random(5)
        np.testing.assert_array_equal(first, second)

    def test_independent_children(self):
        """Different children and seeds give different draws."""
        stream = RandomStream(42)
        draws = [
            stream.substream(0).generator.random(),
            stream.substream(1).generator.random(),
            stream.spawn().generator.random(),
            stream.spawn().generator.random(),
            RandomStream(43).substream(0).generator.random(),
        ]
        self.assertEqual(len(set(draws)), len(draws))

    def test_substream_ignores_consumption(self):
        """A substream does not depend on the draws of its parent."""
        used = RandomStream(7)
        used.generator.random(100)
        np.testing.assert_array_equal(
            used.substream(2).generator.random(3), RandomStream(7).substream(2).generator.random(3)
        )

    def test_seed_validation(self):
        """Seeds are unsigned 64-bit integers."""
        self.assertEqual(validate_seed(MAX_SEED), MAX_SEED)
        for seed in (-1, MAX_SEED + 1, 1.5, "3", True):
            with self.assertRaises(InvalidSpecError):
                validate_seed(seed)
        with self.assertRaises(ValueError):
            RandomStream(1).substream(-1)

    def test_repr(self):
        """The representation names the seed and the position."""
        self.assertEqual(
            repr(RandomStream(5).substream(2)), "RandomStream(seed=5, spawn_key=(1, 2))"
        )
