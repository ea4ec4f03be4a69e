"""
Model Calibration
Fits a tabulated-weight growth model with a stochastic increment to an
empirical degree histogram
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from config.settings import settings
from core.errors import CalibrationError, ConvergenceError, DomainError
from core.model import (
    FixedIncrement, GeneralRule, IncrementSpec, ModelSpec, StochasticIncrement, TabulatedWeight,
)
from distributions.exact import DegreeDistribution, balance_recurrence, stationary_distribution, tail_weight_sum
from distributions.meanfield import alpha_to_s
from distributions.solver import solve_fixed_point
from .empirical import EmpiricalDistribution, tv_distance

logger = logging.getLogger(__name__)

# Relative tolerance on sum(x r_x) = m
_MEAN_TOLERANCE = 1e-9
_EDGE_RATIO_WARNING = 1e-3


@dataclass(frozen=True)
class TailFit:
    alpha: float
    intercept: float
    residual: float
    points: int


def fit_power_law(k: Sequence[float], q: Sequence[float]) -> TailFit:
    """Unweighted least squares of ln q on ln k over the positive points"""
    k = np.asarray(k, dtype=float)
    q = np.asarray(q, dtype=float)
    keep = (q > 0) & (k > 0)
    if np.count_nonzero(keep) < 3:
        raise CalibrationError(
            f"tail fit needs at least 3 points with positive counts, got {np.count_nonzero(keep)}",
            flag="--fit-range",
        )
    x, y = np.log(k[keep]), np.log(q[keep])
    fit = linregress(x, y)
    residual = float(np.sqrt(np.mean((y - (fit.intercept + fit.slope * x)) ** 2)))
    return TailFit(-float(fit.slope), float(fit.intercept), residual, int(keep.sum()))


def log_log_slope(dist: DegreeDistribution, k_lo: int, k_hi: int) -> float:
    """Least-squares slope of ln Q_k against ln k over [k_lo, k_hi]"""
    ks = np.arange(k_lo, k_hi + 1)
    return -fit_power_law(ks, dist.window(k_lo, k_hi)).alpha


def _tail_fit(emp: EmpiricalDistribution, k_lo: int, k_hi: int) -> TailFit:
    if k_hi < k_lo:
        raise CalibrationError(f"empty fit range [{k_lo}, {k_hi}]", flag="--fit-range")
    inside = (emp.k >= k_lo) & (emp.k <= k_hi) & (emp.n > 0)
    return fit_power_law(emp.k[inside], emp.q_hat[inside])


def fit_tail_exponent(emp: EmpiricalDistribution, k_lo: int, k_hi: int) -> float:
    """alpha = -slope of the log-log fit over k in [k_lo, k_hi] with n_k > 0"""
    return _tail_fit(emp, k_lo, k_hi).alpha


def default_fit_range(emp: EmpiricalDistribution, k_head: int,
                      count_floor: Optional[float] = None) -> Tuple[int, int]:
    """[k_head, largest k with n_k >= count_floor]"""
    count_floor = settings.tail_count_floor if count_floor is None else count_floor
    reliable = emp.k[emp.n >= count_floor]
    if len(reliable) == 0:
        raise CalibrationError(f"no degree has at least {count_floor} vertices", flag="--fit-range")
    return k_head, int(reliable.max())


def auto_increment(emp: EmpiricalDistribution, m: float) -> StochasticIncrement:
    """
    Increment distribution guessed from the data.

    r_x = Q^_x for x = 1..j; the remaining probability goes to j+1 and
    j+2 so that sum(r) = 1 and sum(x r_x) = m. j grows from 1 until both
    remainders are nonnegative.
    """
    if not m >= 1:
        raise CalibrationError(f"mean increment m={m} must be at least 1", flag="--m")
    head_p = 0.0
    head_mean = 0.0
    for j in range(1, max(emp.k_max, int(math.ceil(m))) + 2):
        q_j = emp.lookup(j)
        head_p += q_j
        head_mean += j * q_j
        rest_p = 1.0 - head_p
        rest_mean = m - head_mean
        r_next = (j + 2) * rest_p - rest_mean
        r_after = rest_mean - (j + 1) * rest_p
        if rest_p < 0:
            break
        if r_next >= 0 and r_after >= 0:
            mapping = {x: emp.lookup(x) for x in range(1, j + 1)}
            mapping[j + 1] = r_next
            mapping[j + 2] = r_after
            mapping = {x: p for x, p in mapping.items() if p > 0}
            logger.info(f"auto increment: j={j}, r={mapping}")
            return StochasticIncrement.from_mapping(mapping)
    raise CalibrationError(f"no increment distribution with mean {m} matches the low-degree data",
                           flag="--increment-dist")


@dataclass(frozen=True)
class CalibrationOptions:
    edges: Optional[float] = None
    m: Optional[float] = None
    k_head: Optional[int] = None
    fit_range: Optional[Tuple[int, int]] = None
    increment: Optional[IncrementSpec] = None
    k_max: Optional[int] = None
    tail_count_floor: Optional[float] = None


@dataclass(frozen=True)
class FitDiagnostics:
    fit_range: Tuple[int, int]
    residual: float
    tv_distance: float
    converged: bool
    clamped: List[int] = field(default_factory=list)
    iterations: int = 0
    solver: str = ""

    def as_dict(self) -> dict:
        return {
            "fit_range": list(self.fit_range),
            "residual": self.residual,
            "tv_distance": self.tv_distance,
            "converged": self.converged,
            "clamped": list(self.clamped),
            "iterations": self.iterations,
            "solver": self.solver,
        }


@dataclass(frozen=True)
class CalibratedModel:
    m: float
    alpha: float
    s: float
    head_f: Tuple[float, ...]
    k_head: int
    increment: IncrementSpec
    mean_weight: float
    diagnostics: FitDiagnostics

    @property
    def k_min(self) -> int:
        return self.k_head - len(self.head_f)

    def weight_function(self) -> TabulatedWeight:
        return TabulatedWeight(self.head_f, self.s, self.k_head)

    def to_model_spec(self) -> ModelSpec:
        return ModelSpec(GeneralRule(self.weight_function()), self.increment)

    def exact_vdd(self, k_max: Optional[int] = None) -> DegreeDistribution:
        k_max = settings.kmax if k_max is None else k_max
        return stationary_distribution(self.weight_function(), self.increment, max(k_max, self.k_head))


def _resolve_increment(emp: EmpiricalDistribution, opts: CalibrationOptions) -> Tuple[float, IncrementSpec]:
    if opts.increment is not None:
        m = opts.increment.mean
        reference = opts.m if opts.m is not None else (opts.edges / emp.N if opts.edges else None)
        if reference is not None and abs(reference - m) > _EDGE_RATIO_WARNING:
            logger.warning(f"increment mean {m:.6g} differs from the observed E/N or m={reference:.6g}; "
                           f"using the increment mean")
        return m, opts.increment
    if opts.m is not None:
        m = float(opts.m)
    elif opts.edges is not None:
        m = float(opts.edges) / emp.N
    else:
        raise CalibrationError("calibration needs the edge count, m or an increment distribution", flag="--edges")
    if float(m).is_integer() and m >= 1 and emp.lookup(int(m)) > 0 and emp.k_min >= m:
        return m, FixedIncrement(int(m))
    return m, auto_increment(emp, m)


def invert_head(emp: EmpiricalDistribution, increment: IncrementSpec, m: float, mean_weight: float,
                k_head: int) -> Tuple[List[float], List[int]]:
    """
    Head weights f(g..k_head-1) that reproduce Q^_k exactly for a given <f>.

    Negative solutions are clamped to 0 and their degrees reported.
    """
    g = increment.g
    head: List[float] = []
    clamped: List[int] = []
    previous_f, previous_q = 0.0, 0.0
    for k in range(g, k_head):
        q_k = emp.lookup(k)
        if not q_k > 0:
            raise CalibrationError(f"no vertices of degree {k} inside the head; increase data or lower --k-head",
                                   flag="--k-head")
        f_k = (increment.probability(k) * mean_weight + m * previous_f * previous_q - q_k * mean_weight) / (m * q_k)
        if f_k < 0:
            clamped.append(k)
            f_k = 0.0
        head.append(f_k)
        previous_f, previous_q = f_k, q_k
    return head, clamped


def calibrate(emp: EmpiricalDistribution, opts: Optional[CalibrationOptions] = None) -> CalibratedModel:
    """
    Fit m, the tail exponent, s = (alpha - 3) m and the head weights.

    <f> starts at 2m + s and is refined until the forward distribution of
    the inverted model has sum f(k) Q_k = <f>.
    """
    opts = opts or CalibrationOptions()
    k_head = settings.k_head if opts.k_head is None else int(opts.k_head)
    k_max = settings.kmax if opts.k_max is None else int(opts.k_max)

    m, increment = _resolve_increment(emp, opts)
    if abs(increment.mean - m) > _MEAN_TOLERANCE * max(1.0, m):
        raise CalibrationError(f"increment mean {increment.mean} does not match m={m}", flag="--increment-dist")
    g, h = increment.g, increment.h
    k_head = max(k_head, g)
    fit_range = opts.fit_range or default_fit_range(emp, k_head, opts.tail_count_floor)
    tail = _tail_fit(emp, *fit_range)
    alpha = tail.alpha
    try:
        s = alpha_to_s(alpha, m)
    except DomainError as e:
        raise CalibrationError(str(e), flag="--fit-range") from e
    if k_head + s <= 0:
        raise CalibrationError(f"tail weight k + s is not positive at k_head={k_head} (s={s:.6g})", flag="--k-head")
    k_max = max(k_max, k_head, h)
    logger.info(f"calibrating: m={m:.6g}, alpha={alpha:.6g}, s={s:.6g}, k_head={k_head}")

    def forward(mean_weight: float) -> Tuple[TabulatedWeight, np.ndarray, List[int]]:
        head, clamped = invert_head(emp, increment, m, mean_weight, k_head)
        weight = TabulatedWeight(tuple(head), s, k_head)
        f = weight.table(k_max)
        q = balance_recurrence(f, increment.table(k_max), mean_weight, m, g, h, k_max)
        return weight, q, clamped

    def mapping(mean_weight: float) -> float:
        weight, q, _ = forward(mean_weight)
        f = weight.table(k_max)
        return float(np.dot(f[g:], q)) + tail_weight_sum(weight, q[-1], k_max, m, mean_weight)

    try:
        result = solve_fixed_point(mapping, 2 * m + s, lower=m, tolerance=settings.outer_tolerance)
    except ConvergenceError as e:
        raise ConvergenceError(f"calibration did not converge: {e}", flag="--k-head") from e

    weight, q, clamped = forward(result.value)
    if clamped:
        logger.warning(f"head weights clamped to 0 at k={clamped}: the data cannot be matched exactly there")
    model_vdd = DegreeDistribution(g, q, 1.0 - math.fsum(q), result.value, result.iterations, result.method)

    diagnostics = FitDiagnostics(
        fit_range=(int(fit_range[0]), int(fit_range[1])),
        residual=tail.residual,
        tv_distance=tv_distance(model_vdd, emp),
        converged=True,
        clamped=clamped,
        iterations=result.iterations,
        solver=result.method,
    )
    return CalibratedModel(m, alpha, s, weight.head, k_head, increment, result.value, diagnostics)
