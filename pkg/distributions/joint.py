"""
Joint Endpoint Distributions
Arc endpoint degree distribution Q_{l,k} (source degree l, target degree k)
and its symmetrized edge form
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from config.settings import settings
from core.errors import DomainError
from core.model import ConstantWeight, LinearWeight, WeightFunction
from .exact import _check_fixed_m, vdd_general, vdd_L, vdd_P

logger = logging.getLogger(__name__)


class EndpointKind(str, Enum):
    ARC = "arc"
    EDGE = "edge"


@dataclass(frozen=True, eq=False)
class JointDegreeDistribution:
    """
    Dense array over l, k in [k_min, k_max]; q[i, j] holds the entry for
    l = k_min + i, k = k_min + j.
    """
    k_min: int
    q: np.ndarray
    kind: EndpointKind
    tail_mass: float
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise DomainError(f"joint distribution must be a square array, got shape {q.shape}")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "kind", EndpointKind(self.kind))

    @property
    def k_max(self) -> int:
        return self.k_min + self.q.shape[0] - 1

    def get(self, l: int, k: int) -> float:
        if self.k_min <= l <= self.k_max and self.k_min <= k <= self.k_max:
            return float(self.q[l - self.k_min, k - self.k_min])
        return 0.0

    def degrees(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def source_marginal(self) -> np.ndarray:
        """Sum over k for each l"""
        return self.q.sum(axis=1)

    def target_marginal(self) -> np.ndarray:
        """Sum over l for each k"""
        return self.q.sum(axis=0)

    def is_structural_zero(self, l: int, k: int) -> bool:
        if self.kind == EndpointKind.ARC:
            return l < self.k_min or k <= self.k_min
        return l <= self.k_min and k <= self.k_min

    def restricted(self, k_hi: int) -> "JointDegreeDistribution":
        """Window l, k <= k_hi; the cut mass moves into tail_mass"""
        n = max(0, min(k_hi, self.k_max) - self.k_min + 1)
        q = self.q[:n, :n]
        tail = self.tail_mass + (math.fsum(self.q.ravel()) - math.fsum(q.ravel()))
        return JointDegreeDistribution(self.k_min, q, self.kind, tail, dict(self.params))


def _kmax_joint(k_max: Optional[int]) -> int:
    return settings.kmax_joint if k_max is None else int(k_max)


def _fill_arc_array(marginal: np.ndarray, m: int, k_max: int, w: np.ndarray, d: np.ndarray,
                    row_const: float, inner_const: float) -> np.ndarray:
    """
    Shared recurrence of the arc endpoint arrays.

    Row l = m:   Q[m,k] = w(k-1)(Q_(k-1) + m Q[m,k-1]) / (row_const + m d(k))
    Rows l > m:  Q[l,k] = (w(l-1)Q[l-1,k] + w(k-1)Q[l,k-1]) / (inner_const + d(l) + d(k))
    Column k = m is zero. Interior entries are filled one anti-diagonal
    l + k = t at a time; every entry reads the same west and north
    operands as a row-by-row sweep.
    """
    n = k_max - m + 1
    q = np.zeros((n, n))
    for j in range(1, n):
        k = m + j
        q[0, j] = w[k - 1] * (marginal[j - 1] + m * q[0, j - 1]) / (row_const + m * d[k])

    for t in range(2, 2 * (n - 1) + 1):
        i = np.arange(max(1, t - (n - 1)), min(n - 1, t - 1) + 1)
        j = t - i
        l = i + m
        k = j + m
        q[i, j] = (w[l - 1] * q[i - 1, j] + w[k - 1] * q[i, j - 1]) / (inner_const + d[l] + d[k])
    return q


def _arc_distribution(q: np.ndarray, m: int, params: Dict[str, Any]) -> JointDegreeDistribution:
    tail = 1.0 - math.fsum(q.ravel())
    logger.debug(f"joint arc array {q.shape} for {params}, tail mass {tail:.3e}")
    return JointDegreeDistribution(m, q, EndpointKind.ARC, tail, params)


def joint_P(m: int, a: float, k_max: Optional[int] = None) -> JointDegreeDistribution:
    """Arc endpoint distribution of the hybrid (Pennock) graph"""
    m = _check_fixed_m(m)
    k_max = _kmax_joint(k_max)
    if not (0.0 <= a <= 1.0):
        raise DomainError(f"a must lie in [0, 1], got {a}", flag="--a")
    marginal = vdd_P(m, a, k_max).q
    ks = np.arange(k_max + 1, dtype=float)
    w = 2 * a * m + (1 - a) * ks
    d = (1 - a) * ks
    q = _fill_arc_array(marginal, m, k_max, w, d, 2 * m + (3 * a + 1) * m * m, 2 + 4 * a * m)
    return _arc_distribution(q, m, {"model": "P", "m": m, "a": a, "kmax": k_max})


def joint_L(m: int, s: float, k_max: Optional[int] = None) -> JointDegreeDistribution:
    """Arc endpoint distribution of the L-graph, f(k) = k + s"""
    m = _check_fixed_m(m)
    k_max = _kmax_joint(k_max)
    marginal = vdd_L(m, s, k_max).q
    w = np.arange(k_max + 1, dtype=float) + s
    q = _fill_arc_array(marginal, m, k_max, w, w, 2 * m + s + m * (m + s), (2 * m + s) / m)
    return _arc_distribution(q, m, {"model": "L", "m": m, "s": s, "kmax": k_max})


def joint_general(f: WeightFunction, m: int, mean_weight: Optional[float] = None,
                  k_max: Optional[int] = None) -> JointDegreeDistribution:
    """
    Arc endpoint distribution for an arbitrary weight function.

    Without mean_weight, <f> comes from vdd_general over the 1-D window
    (at least settings.kmax) so the tail of f is resolved as well there.
    """
    m = _check_fixed_m(m)
    k_max = _kmax_joint(k_max)
    solve_window = max(settings.kmax, k_max, f.tail_start)
    vdd = vdd_general(f, m, solve_window, mean_weight)
    mean = vdd.mean_weight
    table = f.table(k_max)
    q = _fill_arc_array(vdd.window(m, k_max), m, k_max, table, table,
                        mean + m * table[m], mean / m)
    if isinstance(f, ConstantWeight):
        label = "const"
    elif isinstance(f, LinearWeight):
        label = f"linear(s={f.s})"
    else:
        label = "tabulated"
    return _arc_distribution(q, m, {"model": "general", "weights": label, "m": m,
                                    "mean_weight": mean, "kmax": k_max})


def edge_from_arc(arc: JointDegreeDistribution) -> JointDegreeDistribution:
    """Theta = (Q + Q^T)/2"""
    if arc.kind != EndpointKind.ARC:
        raise DomainError(f"edge_from_arc needs an arc distribution, got {arc.kind.value}", flag="--kind")
    theta = 0.5 * (arc.q + arc.q.T)
    return JointDegreeDistribution(arc.k_min, theta, EndpointKind.EDGE, arc.tail_mass, dict(arc.params))
