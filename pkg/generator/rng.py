"""
Seeded RNG
Reproducible, splittable random streams for graph growth
"""
from typing import Sequence, Tuple

import numpy as np

from core.errors import DomainError

_SEED_LIMIT = 2 ** 64


class SeededRNG:
    """PCG64 stream keyed by (seed, spawn_key) so replications never share state"""

    def __init__(self, seed: int, spawn_key: Tuple[int, ...] = ()):
        if isinstance(seed, bool) or int(seed) != seed or not (0 <= seed < _SEED_LIMIT):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}", flag="--seed")
        self._seed = int(seed)
        self._sequence = np.random.SeedSequence(entropy=self._seed, spawn_key=tuple(spawn_key))
        self._generator = np.random.Generator(np.random.PCG64(self._sequence))

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def spawn_key(self) -> Tuple[int, ...]:
        return tuple(self._sequence.spawn_key)

    def random(self) -> float:
        return float(self._generator.random())

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n)"""
        return int(self._generator.integers(0, n))

    def choice_index(self, cumulative: Sequence[float]) -> int:
        """Index drawn from a cumulative probability table"""
        idx = int(np.searchsorted(cumulative, self._generator.random(), side="right"))
        return min(idx, len(cumulative) - 1)

    def next_seed(self) -> int:
        """Fresh 63-bit seed drawn from this stream"""
        return int(self._generator.integers(0, 2 ** 63))

    def fork(self) -> "SeededRNG":
        """Child stream for a sub-task"""
        child = self._sequence.spawn(1)[0]
        return SeededRNG(self._seed, tuple(child.spawn_key))


def replication_rng(base_seed: int, index: int) -> SeededRNG:
    """Stream of replication `index`; depends only on (base_seed, index)"""
    return SeededRNG(base_seed, (int(index),))
