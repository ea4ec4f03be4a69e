"""
Mean-Field Asymptotics
Continuous degree dynamics, the power-law estimate of Q_k, alpha <-> s
conversion and the asymptotic classification of growth models
"""
import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from core.errors import DomainError
from core.model import (
    ConstantWeight, Equivalence, HybridRule, LinearWeight, ModelSpec, TabulatedWeight, l_to_p,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerLaw:
    alpha: float

    def __post_init__(self):
        if not self.alpha > 2:
            raise DomainError(f"a power-law degree exponent must exceed 2, got {self.alpha}")

    def __str__(self) -> str:
        return f"power-law (alpha={self.alpha:.17g})"


@dataclass(frozen=True)
class Exponential:
    def __str__(self) -> str:
        return "exponential"


AsymptoticClass = Union[PowerLaw, Exponential]


def _check_ms(m: float, s: float) -> None:
    if not m > 0:
        raise DomainError(f"m must be positive, got {m}", flag="--m")
    if s <= -m:
        raise DomainError(f"s={s} must exceed -m={-m}", flag="--s")


def meanfield_degree(m: float, s: float, i: float, t: float) -> float:
    """Expected degree at time t of the vertex that arrived at time i"""
    _check_ms(m, s)
    if not (1 <= i <= t):
        raise DomainError(f"need 1 <= i <= t, got i={i}, t={t}")
    return (m + s) * (t / i) ** (m / (2 * m + s)) - s


def meanfield_vdd(m: float, s: float, k):
    """Q^_k = ((2m+s)/m) (m+s)^((2m+s)/m) (k+s)^(-(3m+s)/m)"""
    _check_ms(m, s)
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr + s <= 0):
        raise DomainError(f"k + s must be positive (s={s})", flag="--s")
    q = ((2 * m + s) / m) * (m + s) ** ((2 * m + s) / m) * (k_arr + s) ** (-(3 * m + s) / m)
    return float(q) if np.ndim(q) == 0 else q


def arrival_fraction(m: float, s: float, k: float) -> float:
    """i/t of the vertex whose mean-field degree has reached k"""
    _check_ms(m, s)
    if k < m:
        raise DomainError(f"k={k} is below m={m}")
    return ((m + s) / (k + s)) ** ((2 * m + s) / m)


def meanfield_cdf(m: float, s: float, k: float) -> float:
    """Mean-field estimate of P(degree < k)"""
    return 1.0 - arrival_fraction(m, s, k)


def alpha_to_s(alpha: float, m: float) -> float:
    if not m > 0:
        raise DomainError(f"m must be positive, got {m}", flag="--m")
    if not alpha > 2:
        raise DomainError(
            f"alpha={alpha} is unattainable: an exponent <= 2 would make the mean degree infinite, "
            f"while every increment adds a finite number of arcs",
            flag="--alpha",
        )
    return (alpha - 3.0) * m


def s_to_alpha(s: float, m: float) -> float:
    _check_ms(m, s)
    return 3.0 + s / m


def classify(model: ModelSpec) -> AsymptoticClass:
    """Asymptotic class of Q_k; tabulated weights are classified by their linear tail"""
    weight = model.weight
    if isinstance(weight, ConstantWeight):
        return Exponential()
    if isinstance(model.rule, HybridRule) or isinstance(weight, LinearWeight):
        return PowerLaw(s_to_alpha(weight.s, model.m))
    if isinstance(weight, TabulatedWeight):
        return PowerLaw(s_to_alpha(weight.tail_s, model.m))
    s = weight.tail_displacement
    if s is None:
        raise DomainError(f"cannot classify weight function {type(weight).__name__} without a linear tail")
    return PowerLaw(s_to_alpha(s, model.m))


@dataclass(frozen=True)
class RegimeDescription:
    asymptotic_class: AsymptoticClass
    alpha: float
    equivalent_a: Union[float, Equivalence]
    heavy_tailed: bool

    def as_dict(self) -> dict:
        a = self.equivalent_a
        return {
            "class": str(self.asymptotic_class),
            "alpha": self.alpha,
            "equivalent_a": a.value if isinstance(a, Equivalence) else a,
            "heavy_tailed": self.heavy_tailed,
        }


def describe_regime(m: float, s: float) -> RegimeDescription:
    """Row of the asymptotic classification table for L(m, s)"""
    alpha = s_to_alpha(s, m)
    return RegimeDescription(PowerLaw(alpha), alpha, l_to_p(m, s), 2 < alpha <= 3)
