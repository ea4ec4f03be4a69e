"""
Exact Degree Distributions
Stationary vertex degree distributions Q_k from the balance-equation
recurrences, their closed forms, and the general / stochastic-increment cases
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Union

import numpy as np
from scipy.special import gammaln

from config.settings import settings
from core.errors import DomainError
from core.model import (
    ConstantWeight, FixedIncrement, HybridRule, IncrementSpec, LinearRule, LinearWeight,
    ModelSpec, StochasticIncrement, WeightFunction,
)
from .solver import solve_fixed_point

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    """Q_k for k = k_min..k_max, with the mass beyond k_max kept explicit"""
    k_min: int
    q: np.ndarray
    tail_mass: float
    mean_weight: float
    iterations: int = 0
    solver: str = "analytic"

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.q) - 1

    def __getitem__(self, k: int) -> float:
        if self.k_min <= k <= self.k_max:
            return float(self.q[k - self.k_min])
        return 0.0

    def __len__(self) -> int:
        return len(self.q)

    def degrees(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def as_dict(self) -> Dict[int, float]:
        return {int(k): float(v) for k, v in zip(self.degrees(), self.q)}

    def total(self) -> float:
        return math.fsum(self.q)

    def mean_degree(self) -> float:
        """Mean degree over the stored window"""
        return float(np.dot(self.degrees(), self.q))

    def window(self, k_lo: int, k_hi: int) -> np.ndarray:
        """Q_k for k_lo..k_hi, zero-filled outside the stored range"""
        out = np.zeros(max(0, k_hi - k_lo + 1))
        lo, hi = max(k_lo, self.k_min), min(k_hi, self.k_max)
        if lo <= hi:
            out[lo - k_lo:hi - k_lo + 1] = self.q[lo - self.k_min:hi - self.k_min + 1]
        return out


def _kmax(k_max: Optional[int]) -> int:
    return settings.kmax if k_max is None else int(k_max)


def _check_fixed_m(m) -> int:
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m}", flag="--m")
    return int(m)


def _check_kmax(k_max: int, k_lo: int) -> None:
    if k_max < k_lo:
        raise DomainError(f"kmax={k_max} is below the smallest degree {k_lo}", flag="--kmax")


def _from_ratios(q_first: float, ratios: np.ndarray) -> np.ndarray:
    return np.concatenate(([q_first], q_first * np.cumprod(ratios)))


def _finish(k_min: int, q: np.ndarray, mean_weight: float, iterations: int = 0,
            solver: str = "analytic") -> DegreeDistribution:
    tail = 1.0 - math.fsum(q)
    return DegreeDistribution(k_min, q, tail, float(mean_weight), iterations, solver)


# ---------------------------------------------------------------------------
# Linear, hybrid and constant weights
# ---------------------------------------------------------------------------

def vdd_L(m: int, s: float, k_max: Optional[int] = None) -> DegreeDistribution:
    """Q_k of the L-graph with weight f(k) = k + s"""
    m = _check_fixed_m(m)
    k_max = _kmax(k_max)
    if s <= -m:
        raise DomainError(f"s={s} must exceed -m={-m}", flag="--s")
    _check_kmax(k_max, m)
    ks = np.arange(m + 1, k_max + 1, dtype=float)
    q_m = (2 * m + s) / (2 * m + s + m * (m + s))
    ratios = m * (ks - 1 + s) / (2 * m + s + m * (ks + s))
    return _finish(m, _from_ratios(q_m, ratios), 2 * m + s)


def vdd_P(m: int, a: float, k_max: Optional[int] = None) -> DegreeDistribution:
    """
    Q_k of the hybrid (Pennock) graph.

    mean_weight reports <f> of the equivalent L-graph: 2m + s with
    s = 2am/(1-a), or 1 when a = 1.
    """
    m = _check_fixed_m(m)
    k_max = _kmax(k_max)
    if not (0.0 <= a <= 1.0):
        raise DomainError(f"a must lie in [0, 1], got {a}", flag="--a")
    _check_kmax(k_max, m)
    ks = np.arange(m + 1, k_max + 1, dtype=float)
    q_m = 2.0 / (2.0 + a * m + m)
    ratios = (2 * a * m + (1 - a) * (ks - 1)) / (2 + 2 * a * m + (1 - a) * ks)
    mean_weight = 1.0 if a == 1.0 else 2 * m + 2 * a * m / (1 - a)
    return _finish(m, _from_ratios(q_m, ratios), mean_weight)


def vdd_const(m: int, k_max: Optional[int] = None) -> DegreeDistribution:
    """Q_k for the constant weight f(k) = 1: a geometric progression"""
    m = _check_fixed_m(m)
    k_max = _kmax(k_max)
    _check_kmax(k_max, m)
    ratios = np.full(k_max - m, m / (1.0 + m))
    return _finish(m, _from_ratios(1.0 / (1.0 + m), ratios), 1.0)


def vdd_const_closed(m: int, k: int) -> float:
    m = _check_fixed_m(m)
    if k < m:
        return 0.0
    return (1.0 / (1.0 + m)) * (m / (1.0 + m)) ** (k - m)


def vdd_L_closed(m: int, s: float, k: Union[int, np.ndarray]) -> Union[float, np.ndarray]:
    """Closed form of Q_k for L(m, s), evaluated through log-Gamma"""
    m = _check_fixed_m(m)
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < m):
        raise DomainError(f"closed form needs k >= m={m}")
    args = [m + s, m + s + 2 + s / m]
    if min(args) <= 0 or np.any(k_arr + s <= 0):
        raise DomainError(f"Gamma argument is not positive for m={m}, s={s}", flag="--s")
    log_q = (
        math.log(2 * m + s) + gammaln(m + s + 2 + s / m) - math.log(m) - gammaln(m + s)
        + gammaln(k_arr + s) - gammaln(k_arr + s + 3 + s / m)
    )
    q = np.exp(log_q)
    return float(q) if np.ndim(q) == 0 else q


def vdd_mixture(f1: WeightFunction, f2: WeightFunction, a: float, m: int, mean_f1: float,
                mean_f2: float, k_max: Optional[int] = None) -> DegreeDistribution:
    """Q_k when each arc uses f1 with probability a and f2 otherwise"""
    m = _check_fixed_m(m)
    k_max = _kmax(k_max)
    _check_kmax(k_max, m)
    if not (0.0 <= a <= 1.0):
        raise DomainError(f"a must lie in [0, 1], got {a}", flag="--a")
    w = a * m * f1.table(k_max) / mean_f1 + (1 - a) * m * f2.table(k_max) / mean_f2
    ks = np.arange(m + 1, k_max + 1)
    ratios = w[ks - 1] / (1.0 + w[ks])
    return _finish(m, _from_ratios(1.0 / (1.0 + w[m]), ratios), math.nan)


# ---------------------------------------------------------------------------
# General weights and stochastic increments
# ---------------------------------------------------------------------------

def balance_recurrence(f: np.ndarray, r: np.ndarray, mean_weight: float, m: float, g: int, h: int,
                       k_max: int) -> np.ndarray:
    """Q_g..Q_kmax of Q_k = [r_k<f> + m f(k-1) Q_(k-1)] / (<f> + m f(k))"""
    q = np.zeros(k_max + 1)
    prev = 0.0
    top = min(h, k_max)
    for k in range(g, top + 1):
        prev = (r[k] * mean_weight + m * f[k - 1] * prev) / (mean_weight + m * f[k])
        q[k] = prev
    if k_max > top:
        ks = np.arange(top + 1, k_max + 1)
        q[top + 1:] = prev * np.cumprod(m * f[ks - 1] / (mean_weight + m * f[ks]))
    return q[g:]


def tail_weight_sum(weight: WeightFunction, q_last: float, k_max: int, m: float,
                    mean_weight: float) -> float:
    """
    Exact sum of f(k)Q_k over k > k_max, telescoped from the recurrence.

    Requires k_max past the largest increment and, for tabulated weights,
    past the head. Infinite when <f> <= m for a linear tail.
    """
    if isinstance(weight, ConstantWeight):
        return m * q_last / mean_weight
    s = weight.tail_displacement
    if s is None or k_max < weight.tail_start:
        raise DomainError(f"kmax={k_max} must reach the linear tail of the weight function", flag="--kmax")
    if mean_weight <= m:
        return math.inf
    return m * (k_max + s) * (k_max + s + 1) * q_last / (mean_weight - m)


def _initial_mean_weight(f: np.ndarray, m: float, g: int, k_max: int) -> float:
    ks = np.arange(g, k_max + 1)
    q0 = (1.0 / (1.0 + m)) * (m / (1.0 + m)) ** (ks - g)
    q0 /= q0.sum()
    return float(np.dot(f[g:], q0))


def stationary_distribution(weight: WeightFunction, increment: IncrementSpec,
                            k_max: Optional[int] = None,
                            mean_weight: Optional[float] = None) -> DegreeDistribution:
    """
    Q_k for any weight function and increment.

    <f> is analytic for linear and constant weights, taken from mean_weight
    when given, and otherwise solved self-consistently.
    """
    k_max = _kmax(k_max)
    m, g, h = increment.mean, increment.g, increment.h
    _check_kmax(k_max, max(g, h))
    if weight.k_min > g:
        raise DomainError(f"weight function starts at k={weight.k_min}, above the smallest degree {g}",
                          flag="--weights-file")
    if isinstance(weight, LinearWeight) and weight.s <= -g:
        raise DomainError(f"s={weight.s} must exceed -{g}", flag="--s")
    f = weight.table(k_max)
    r = increment.table(k_max)

    if mean_weight is not None:
        if mean_weight <= 0:
            raise DomainError(f"mean weight must be positive, got {mean_weight}", flag="--mean-weight")
        return _finish(g, balance_recurrence(f, r, mean_weight, m, g, h, k_max), mean_weight, 0, "pinned")
    if isinstance(weight, ConstantWeight):
        return _finish(g, balance_recurrence(f, r, 1.0, m, g, h, k_max), 1.0)
    if isinstance(weight, LinearWeight):
        analytic = 2 * m + weight.s
        return _finish(g, balance_recurrence(f, r, analytic, m, g, h, k_max), analytic)

    head = f[g:]

    def mapping(mean: float) -> float:
        q = balance_recurrence(f, r, mean, m, g, h, k_max)
        return float(np.dot(head, q)) + tail_weight_sum(weight, q[-1], k_max, m, mean)

    lower = m if weight.tail_displacement is not None else 0.0
    result = solve_fixed_point(mapping, _initial_mean_weight(f, m, g, k_max), lower=lower)
    q = balance_recurrence(f, r, result.value, m, g, h, k_max)
    return _finish(g, q, result.value, result.iterations, result.method)


def vdd_general(f: WeightFunction, m: int, k_max: Optional[int] = None,
                mean_weight: Optional[float] = None) -> DegreeDistribution:
    """Q_k for an arbitrary weight function and a fixed number m of arcs"""
    return stationary_distribution(f, FixedIncrement(_check_fixed_m(m)), k_max, mean_weight)


def vdd_stochastic(f: WeightFunction, r: StochasticIncrement, k_max: Optional[int] = None,
                   mean_weight: Optional[float] = None) -> DegreeDistribution:
    """Q_k when each new vertex carries a random number x of arcs, P(x) = r_x"""
    if not isinstance(r, StochasticIncrement):
        raise DomainError("vdd_stochastic needs a stochastic increment", flag="--increment-dist")
    return stationary_distribution(f, r, k_max, mean_weight)


def exact_vdd(spec: ModelSpec, k_max: Optional[int] = None,
              mean_weight: Optional[float] = None) -> DegreeDistribution:
    """Dispatch a ModelSpec to the matching exact recurrence"""
    fixed = isinstance(spec.increment, FixedIncrement)
    if mean_weight is None and fixed:
        if isinstance(spec.rule, HybridRule):
            return vdd_P(spec.increment.m, spec.rule.a, k_max)
        if isinstance(spec.rule, LinearRule):
            if isinstance(spec.rule.weight, ConstantWeight):
                return vdd_const(spec.increment.m, k_max)
            return vdd_L(spec.increment.m, spec.rule.weight.s, k_max)
    return stationary_distribution(spec.weight, spec.increment, k_max, mean_weight)
