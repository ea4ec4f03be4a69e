"""
Model Core
Weight functions, increment sizes, seed policies and growth models,
plus the parameter mapping between hybrid (P) and linear (L) graphs
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError

PROBABILITY_TOLERANCE = 1e-12


# ---------------------------------------------------------------------------
# Weight functions
# ---------------------------------------------------------------------------

class WeightFunction(ABC):
    """Vertex weight f(k) of the attachment rule.

    Weight functions that differ by a positive factor define the same model,
    so only the shape matters.
    """

    @abstractmethod
    def evaluate(self, k: int) -> float:
        pass

    @abstractmethod
    def table(self, k_max: int) -> np.ndarray:
        """f(k) for k = 0..k_max; degrees outside the domain hold 0"""
        pass

    @property
    def k_min(self) -> int:
        """Smallest degree the function is defined at"""
        return 1

    @property
    def tail_displacement(self) -> Optional[float]:
        """s of the linear tail f(k) = k + s, None when there is no linear tail"""
        return None

    @property
    def tail_start(self) -> int:
        """First degree of the linear tail"""
        return self.k_min

    def __call__(self, k: int) -> float:
        return self.evaluate(k)


@dataclass(frozen=True)
class LinearWeight(WeightFunction):
    """f(k) = k + s"""
    s: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.s):
            raise DomainError(f"displacement s must be finite, got {self.s}", flag="--s")

    def evaluate(self, k: int) -> float:
        value = k + self.s
        if value <= 0:
            raise DomainError(f"f(k) = k + s is not positive at k={k}, s={self.s}")
        return float(value)

    def table(self, k_max: int) -> np.ndarray:
        ks = np.arange(k_max + 1, dtype=float)
        values = ks + self.s
        values[0] = 0.0
        return np.where(values > 0, values, 0.0)

    @property
    def tail_displacement(self) -> Optional[float]:
        return float(self.s)


@dataclass(frozen=True)
class ConstantWeight(WeightFunction):
    """f(k) = 1, the s -> infinity limit of the linear family"""

    def evaluate(self, k: int) -> float:
        return 1.0

    def table(self, k_max: int) -> np.ndarray:
        values = np.ones(k_max + 1)
        values[0] = 0.0
        return values


@dataclass(frozen=True)
class TabulatedWeight(WeightFunction):
    """Explicit head values f(k_min)..f(k_head-1), then f(k) = k + tail_s"""
    head: Tuple[float, ...]
    tail_s: float
    k_head: int

    def __post_init__(self):
        head = tuple(float(v) for v in self.head)
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "k_head", int(self.k_head))
        if self.k_head - len(head) < 1:
            raise DomainError(
                f"head of {len(head)} values cannot end at k_head={self.k_head}", flag="--k-head"
            )
        for offset, value in enumerate(head):
            if not math.isfinite(value) or value < 0:
                raise DomainError(
                    f"weight f({self.k_min + offset}) = {value} must be finite and >= 0",
                    flag="--weights-file",
                )
        if not math.isfinite(self.tail_s) or self.k_head + self.tail_s <= 0:
            raise DomainError(
                f"tail weight k + {self.tail_s} is not positive at k_head={self.k_head}", flag="--s"
            )

    @property
    def k_min(self) -> int:
        return self.k_head - len(self.head)

    @property
    def tail_displacement(self) -> Optional[float]:
        return float(self.tail_s)

    @property
    def tail_start(self) -> int:
        return self.k_head

    def evaluate(self, k: int) -> float:
        if k < self.k_min:
            raise DomainError(f"tabulated weight is undefined below k={self.k_min}, got k={k}")
        if k < self.k_head:
            return self.head[k - self.k_min]
        return float(k + self.tail_s)

    def table(self, k_max: int) -> np.ndarray:
        values = np.zeros(k_max + 1)
        for offset, value in enumerate(self.head):
            k = self.k_min + offset
            if k <= k_max:
                values[k] = value
        if k_max >= self.k_head:
            values[self.k_head:] = np.arange(self.k_head, k_max + 1) + self.tail_s
        return values


def eval_weight(f: WeightFunction, k: int) -> float:
    """Weight of a vertex of degree k"""
    if k < 1:
        raise DomainError(f"degree must be >= 1, got {k}")
    return f.evaluate(k)


def normalized_probabilities(weights: Iterable[float]) -> np.ndarray:
    """Attachment probabilities w_i / sum(w) of a weight table"""
    w = np.asarray(list(weights), dtype=float)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise DomainError("sampling weights must be finite and nonnegative")
    total = w.sum()
    if total <= 0:
        raise DomainError("sampling weights sum to zero")
    return w / total


# ---------------------------------------------------------------------------
# Increments
# ---------------------------------------------------------------------------

class IncrementSpec(ABC):
    """Number of arcs carried by each new vertex"""

    @property
    @abstractmethod
    def mean(self) -> float:
        pass

    @property
    @abstractmethod
    def g(self) -> int:
        """Smallest possible increment size"""
        pass

    @property
    @abstractmethod
    def h(self) -> int:
        """Largest possible increment size"""
        pass

    @abstractmethod
    def probability(self, x: int) -> float:
        pass

    def table(self, k_max: int) -> np.ndarray:
        """r_x for x = 0..k_max"""
        r = np.zeros(k_max + 1)
        for x in range(self.g, min(self.h, k_max) + 1):
            r[x] = self.probability(x)
        return r


@dataclass(frozen=True)
class FixedIncrement(IncrementSpec):
    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise DomainError(f"fixed increment needs a positive integer m, got {self.m}", flag="--m")
        object.__setattr__(self, "m", int(self.m))

    @property
    def mean(self) -> float:
        return float(self.m)

    @property
    def g(self) -> int:
        return self.m

    @property
    def h(self) -> int:
        return self.m

    def probability(self, x: int) -> float:
        return 1.0 if x == self.m else 0.0


@dataclass(frozen=True)
class StochasticIncrement(IncrementSpec):
    """Increment size x drawn with probability r_x"""
    sizes: Tuple[int, ...]
    probabilities: Tuple[float, ...]
    _lookup: Dict[int, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sizes = tuple(int(x) for x in self.sizes)
        probs = tuple(float(p) for p in self.probabilities)
        if len(sizes) != len(probs) or not sizes:
            raise DomainError("increment distribution needs matching, non-empty sizes and probabilities",
                              flag="--increment-dist")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise DomainError("increment sizes must be strictly increasing", flag="--increment-dist")
        if sizes[0] < 1:
            raise DomainError("increment sizes must be >= 1", flag="--increment-dist")
        if any(p < 0 or not math.isfinite(p) for p in probs):
            raise DomainError("increment probabilities must be >= 0", flag="--increment-dist")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise DomainError(f"increment probabilities sum to {total!r}, not 1", flag="--increment-dist")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "_lookup", dict(zip(sizes, probs)))

    @classmethod
    def from_mapping(cls, r: Dict[int, float]) -> "StochasticIncrement":
        items = sorted(r.items())
        return cls(tuple(x for x, _ in items), tuple(p for _, p in items))

    @property
    def mean(self) -> float:
        return math.fsum(x * p for x, p in zip(self.sizes, self.probabilities))

    @property
    def g(self) -> int:
        return min(x for x, p in zip(self.sizes, self.probabilities) if p > 0)

    @property
    def h(self) -> int:
        return max(x for x, p in zip(self.sizes, self.probabilities) if p > 0)

    def probability(self, x: int) -> float:
        return self._lookup.get(x, 0.0)

    def items(self) -> Sequence[Tuple[int, float]]:
        return list(zip(self.sizes, self.probabilities))


# ---------------------------------------------------------------------------
# Seeds and rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AutoSeed:
    """Complete graph on 2*ceil(m)+1 vertices"""


@dataclass(frozen=True)
class CompleteSeed:
    n0: int

    def __post_init__(self):
        if self.n0 < 2:
            raise DomainError(f"complete seed needs at least 2 vertices, got {self.n0}")


@dataclass(frozen=True)
class ExplicitSeed:
    arcs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        arcs = tuple((int(u), int(v)) for u, v in self.arcs)
        if not arcs:
            raise DomainError("explicit seed has no arcs")
        if any(u < 0 or v < 0 for u, v in arcs):
            raise DomainError("seed vertex indices must be >= 0")
        object.__setattr__(self, "arcs", arcs)


SeedPolicy = Union[AutoSeed, CompleteSeed, ExplicitSeed]


@dataclass(frozen=True)
class LinearRule:
    weight: Union[LinearWeight, ConstantWeight]


@dataclass(frozen=True)
class HybridRule:
    a: float

    def __post_init__(self):
        if not (0.0 <= self.a <= 1.0):
            raise DomainError(f"mixing probability a must lie in [0, 1], got {self.a}", flag="--a")


@dataclass(frozen=True)
class GeneralRule:
    weight: WeightFunction


AttachmentRule = Union[LinearRule, HybridRule, GeneralRule]


class RuleLabel(str, Enum):
    LINEAR = "L"
    HYBRID = "P"
    CONSTANT = "const"
    GENERAL = "general"


@dataclass(frozen=True)
class ModelSpec:
    """A complete growth model: attachment rule, increment and seed"""
    rule: AttachmentRule
    increment: IncrementSpec
    seed: SeedPolicy = field(default_factory=AutoSeed)

    def __post_init__(self):
        if isinstance(self.rule, LinearRule) and not isinstance(self.rule.weight, (LinearWeight, ConstantWeight)):
            raise DomainError("the linear rule takes a linear or constant weight function", flag="--model")
        if isinstance(self.rule, HybridRule) and not isinstance(self.increment, FixedIncrement):
            raise DomainError("hybrid (P) graphs are defined for a fixed m only", flag="--increment-dist")
        weight = self.weight
        s = weight.tail_displacement
        if isinstance(weight, LinearWeight) and s <= -self.g:
            raise DomainError(
                f"displacement s={s} must exceed -{self.g} (smallest increment)", flag="--s"
            )
        if isinstance(weight, TabulatedWeight) and s <= -self.m:
            raise DomainError(
                f"tail displacement s={s} must exceed -m={-self.m}; the degree exponent would not exceed 2",
                flag="--s",
            )
        if isinstance(weight, TabulatedWeight) and weight.k_min > self.g:
            raise DomainError(
                f"tabulated weights start at k={weight.k_min} but vertices enter with degree {self.g}",
                flag="--weights-file",
            )

    @property
    def m(self) -> float:
        return self.increment.mean

    @property
    def g(self) -> int:
        return self.increment.g

    @property
    def label(self) -> RuleLabel:
        if isinstance(self.rule, HybridRule):
            return RuleLabel.HYBRID
        if isinstance(self.rule, LinearRule):
            return RuleLabel.CONSTANT if isinstance(self.rule.weight, ConstantWeight) else RuleLabel.LINEAR
        return RuleLabel.GENERAL

    @property
    def weight(self) -> WeightFunction:
        """Weight function of the equivalent single-rule model"""
        if isinstance(self.rule, HybridRule):
            mapped = p_to_l(self.m, self.rule.a)
            return mapped if isinstance(mapped, ConstantWeight) else LinearWeight(mapped)
        return self.rule.weight

    def analytic_mean_weight(self) -> Optional[float]:
        """<f> when it is known in closed form (linear or constant weight)"""
        weight = self.weight
        if isinstance(weight, ConstantWeight):
            return 1.0
        if isinstance(weight, LinearWeight):
            return 2.0 * self.m + weight.s
        return None

    def equivalent_linear(self) -> "ModelSpec":
        """The L-graph twin of a hybrid model (identity for other rules)"""
        if not isinstance(self.rule, HybridRule):
            return self
        return ModelSpec(LinearRule(self.weight), self.increment, self.seed)


# ---------------------------------------------------------------------------
# P <-> L mapping
# ---------------------------------------------------------------------------

class Equivalence(Enum):
    NO_P_GRAPH = "no P-graph"


NO_P_GRAPH = Equivalence.NO_P_GRAPH


def _check_m(m: float) -> None:
    if not (m > 0 and math.isfinite(m)):
        raise DomainError(f"m must be positive, got {m}", flag="--m")


def p_to_l(m: float, a: float) -> Union[float, ConstantWeight]:
    """Displacement s = 2am/(1-a) of the L-graph equivalent to P(m, a).

    a = 1 has no finite displacement; the constant weight function is
    returned instead.
    """
    _check_m(m)
    if not (0.0 <= a <= 1.0):
        raise DomainError(f"a must lie in [0, 1], got {a}", flag="--a")
    if a == 1.0:
        return ConstantWeight()
    return 2.0 * a * m / (1.0 - a)


def l_to_p(m: float, s: float) -> Union[float, Equivalence]:
    """Mixing probability a = s/(s+2m) of the P-graph equivalent to L(m, s)"""
    _check_m(m)
    if s <= -m:
        raise DomainError(f"s={s} must exceed -m={-m}", flag="--s")
    if s < 0:
        return NO_P_GRAPH
    return s / (s + 2.0 * m)


def attachment_probabilities_P(degrees: Sequence[int], m: float, a: float) -> np.ndarray:
    """Per-vertex probabilities a/N + (1-a)k/(2mN) of the hybrid rule, with R = mN assumed"""
    k = np.asarray(degrees, dtype=float)
    n = len(k)
    return (2.0 * a * m + k * (1.0 - a)) / (2.0 * m * n)


def attachment_probabilities_hybrid(degrees: Sequence[int], a: float) -> np.ndarray:
    """Per-vertex probabilities a/N + (1-a)k/sum(k) of the hybrid rule on an actual graph"""
    k = np.asarray(degrees, dtype=float)
    return a / len(k) + (1.0 - a) * k / k.sum()


def attachment_probabilities_L(degrees: Sequence[int], s: float) -> np.ndarray:
    """Per-vertex probabilities (k+s)/sum(k_j+s) of the linear rule"""
    return normalized_probabilities(np.asarray(degrees, dtype=float) + s)
