"""Deterministic, splittable random streams.

Every stream is a PCG64 generator seeded from a numpy SeedSequence built
from the user seed and a spawn key. Child streams extend the spawn key, so
a child depends only on the seed and on its position in the tree, never on
how much randomness the parent has consumed or on thread scheduling.
"""

from typing import Tuple

import numpy as np

from django_utility_space.exceptions import InvalidSpecError

MAX_SEED = 2**64 - 1

# Spawn keys of children made by spawn() and substream() never collide.
_SPAWN_BRANCH = 0
_SUBSTREAM_BRANCH = 1


def validate_seed(seed: int) -> int:
    """Check that seed is an unsigned 64-bit integer.

    :raises InvalidSpecError: If it is not.
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidSpecError(f"The seed must be an integer, got {seed!r}.")
    if not 0 <= int(seed) <= MAX_SEED:
        raise InvalidSpecError(f"The seed must be in [0, 2^64 - 1], got {seed}.")
    return int(seed)


class RandomStream:
    """A seeded random stream owned by one thread at a time."""

    def __init__(self, seed: int, spawn_key: Tuple[int, ...] = ()) -> None:
        """Create the stream for seed at the given position of the stream tree."""
        self.seed = validate_seed(seed)
        self.spawn_key = tuple(int(key) for key in spawn_key)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
        self.generator = np.random.Generator(np.random.PCG64(sequence))
        self._spawned = 0

    def substream(self, index: int) -> "RandomStream":
        """Return the child stream with the given index.

        Calling this twice with the same index gives two streams producing
        the same values, which is what lets workers derive their streams from
        a block or agent index.
        """
        if index < 0:
            raise ValueError(f"Substream indices are nonnegative, got {index}.")
        return RandomStream(self.seed, self.spawn_key + (_SUBSTREAM_BRANCH, index))

    def spawn(self) -> "RandomStream":
        """Return a fresh child stream, one per call."""
        child = RandomStream(self.seed, self.spawn_key + (_SPAWN_BRANCH, self._spawned))
        self._spawned += 1
        return child

    def __repr__(self) -> str:
        """Return the seed and the spawn key."""
        return f"RandomStream(seed={self.seed}, spawn_key={self.spawn_key})"
