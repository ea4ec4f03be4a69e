"""
Weighted Sampler
Growable sum tree: point updates and proportional draws in O(log n)
"""
import math

from core.errors import DomainError, GenerationError

# Redraws allowed when rounding lands a draw on a zero-weight leaf
_MAX_REDRAWS = 64


class WeightedSampler:
    def __init__(self, capacity: int = 1024):
        self._capacity = 1 << max(0, int(capacity) - 1).bit_length()
        self._value = [0.0] * (2 * self._capacity)
        self._size = 0
        self._positive = 0

    def __len__(self) -> int:
        return self._size

    def __getitem__(self, idx: int) -> float:
        if not 0 <= idx < self._size:
            raise IndexError(f"sampler index {idx} out of range")
        return self._value[self._capacity + idx]

    def __setitem__(self, idx: int, weight: float):
        if not 0 <= idx < self._size:
            raise IndexError(f"sampler index {idx} out of range")
        if not (weight >= 0 and math.isfinite(weight)):
            raise DomainError(f"sampling weight must be finite and >= 0, got {weight}")
        node = self._capacity + idx
        self._positive += (weight > 0) - (self._value[node] > 0)
        self._value[node] = float(weight)
        node >>= 1
        while node >= 1:
            self._value[node] = self._value[2 * node] + self._value[2 * node + 1]
            node >>= 1

    def append(self, weight: float) -> int:
        if self._size == self._capacity:
            self._grow()
        idx = self._size
        self._size += 1
        self[idx] = weight
        return idx

    def _grow(self):
        old_capacity, leaves = self._capacity, self._value[self._capacity:]
        self._capacity = 2 * old_capacity
        self._value = [0.0] * (2 * self._capacity)
        self._value[self._capacity:self._capacity + old_capacity] = leaves
        for node in range(self._capacity - 1, 0, -1):
            self._value[node] = self._value[2 * node] + self._value[2 * node + 1]

    def total(self) -> float:
        return self._value[1]

    @property
    def positive_count(self) -> int:
        """Number of leaves with positive weight"""
        return self._positive

    def find_prefixsum_idx(self, prefixsum: float) -> int:
        """Leaf i with w_0 + ... + w_(i-1) <= prefixsum < w_0 + ... + w_i"""
        node = 1
        while node < self._capacity:
            left = 2 * node
            if self._value[left] > prefixsum:
                node = left
            else:
                prefixsum -= self._value[left]
                node = left + 1
        return node - self._capacity


def weighted_pick(sampler: WeightedSampler, rng) -> int:
    """Index i drawn with probability w_i / sum(w)"""
    total = sampler.total()
    if not total > 0:
        raise GenerationError("total sampling weight is zero: no vertex can receive an arc")
    for _ in range(_MAX_REDRAWS):
        idx = sampler.find_prefixsum_idx(rng.random() * total)
        if idx < len(sampler) and sampler[idx] > 0:
            return idx
    raise GenerationError("sampler kept landing on zero-weight leaves")
