"""
Mean-weight solver
Damped fixed point for <f> with a bracketed root as fallback
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

from scipy.optimize import brentq

from config.settings import settings
from core.errors import ConvergenceError

logger = logging.getLogger(__name__)

# Consecutive growing steps after which the damped iteration is abandoned
_MAX_GROWING_STEPS = 3
_MAX_BRACKET_DOUBLINGS = 200


@dataclass(frozen=True)
class FixedPointResult:
    value: float
    iterations: int
    method: str


def _safe_eval(mapping: Callable[[float], float], x: float) -> float:
    try:
        return float(mapping(x))
    except (ZeroDivisionError, OverflowError, FloatingPointError):
        return math.nan


def solve_fixed_point(
    mapping: Callable[[float], float],
    x0: float,
    lower: float = 0.0,
    damping: Optional[float] = None,
    tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> FixedPointResult:
    """
    Solve x = mapping(x) for x > lower.

    Runs x <- (1-d)x + d*mapping(x). If the iteration leaves the domain,
    keeps growing its step, or runs out of iterations, the residual
    mapping(x) - x is bracketed and solved with brentq instead.
    """
    damping = settings.damping if damping is None else damping
    tolerance = settings.tolerance if tolerance is None else tolerance
    max_iterations = settings.max_iterations if max_iterations is None else max_iterations

    x = x0 if x0 > lower else lower + max(1.0, abs(lower))
    previous_step = math.inf
    growing = 0
    for iteration in range(1, max_iterations + 1):
        tx = _safe_eval(mapping, x)
        if not math.isfinite(tx):
            logger.debug(f"fixed point left the domain at x={x!r}")
            break
        x_new = (1.0 - damping) * x + damping * tx
        if not x_new > lower:
            logger.debug(f"fixed point fell below the lower bound {lower} at iteration {iteration}")
            break
        step = abs(x_new - x)
        x = x_new
        if step < tolerance:
            logger.info(f"mean weight converged by damped iteration: {x!r} after {iteration} iterations")
            return FixedPointResult(x, iteration, "fixed-point")
        growing = growing + 1 if step > previous_step else 0
        if growing >= _MAX_GROWING_STEPS:
            logger.debug(f"damped iteration is diverging at iteration {iteration}")
            break
        previous_step = step

    logger.warning("damped mean-weight iteration did not converge; solving by bracketing")
    return _solve_bracketed(mapping, x0, lower, tolerance, max_iterations)


def _solve_bracketed(mapping, x0, lower, tolerance, max_iterations) -> FixedPointResult:
    def residual(x: float) -> float:
        return _safe_eval(mapping, x) - x

    offset = 1e-9 * max(1.0, abs(lower))
    lo = lower + offset
    h_lo = residual(lo)
    while not math.isfinite(h_lo) and offset < 1.0:
        offset *= 10.0
        lo = lower + offset
        h_lo = residual(lo)
    if not math.isfinite(h_lo) or h_lo <= 0:
        raise ConvergenceError(
            f"no self-consistent mean weight above {lower}: residual at the bound is {h_lo!r}"
        )

    hi = max(x0, 2.0 * lo, lo + 1.0)
    h_hi = residual(hi)
    doublings = 0
    while not (math.isfinite(h_hi) and h_hi < 0):
        hi *= 2.0
        h_hi = residual(hi)
        doublings += 1
        if doublings > _MAX_BRACKET_DOUBLINGS:
            raise ConvergenceError("could not bracket the mean weight from above")

    try:
        root, result = brentq(residual, lo, hi, xtol=tolerance, maxiter=max_iterations, full_output=True)
    except (RuntimeError, ValueError) as e:
        raise ConvergenceError(f"mean weight root finding failed: {e}") from e
    if not result.converged:
        raise ConvergenceError(f"mean weight root finding did not converge after {result.iterations} iterations")
    logger.info(f"mean weight solved by bracketing: {root!r} after {result.iterations} iterations")
    return FixedPointResult(float(root), int(result.iterations), "bracketed")
