"""
Model Validation
Compares a model's exact degree distribution with reference data and with
simulated graphs
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.stats import chi2

from config.settings import settings
from core.errors import PAGraphError
from core.model import ModelSpec
from distributions.exact import DegreeDistribution, exact_vdd
from generator.histograms import mean_degree_histogram
from generator.replication import run_replications
from .empirical import EmpiricalDistribution, tv_distance
from .fitting import CalibratedModel, fit_power_law

logger = logging.getLogger(__name__)

# Head categories with fewer expected counts are merged into the remainder
_MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    degrees: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class ValidationReport:
    tv_exact_reference: float
    tv_simulated_exact: float
    chi_square: ChiSquareResult
    tail_slopes: Dict[str, float]
    fit_range: Tuple[int, int]
    n_sim: int
    replications: int
    curves: Dict[str, DegreeDistribution] = field(repr=False, default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "success": True,
            "tv_exact_reference": self.tv_exact_reference,
            "tv_simulated_exact": self.tv_simulated_exact,
            "chi_square": {
                "statistic": self.chi_square.statistic,
                "dof": self.chi_square.dof,
                "p_value": self.chi_square.p_value,
                "degrees": list(self.chi_square.degrees),
            },
            "tail_slopes": dict(self.tail_slopes),
            "fit_range": list(self.fit_range),
            "n_sim": self.n_sim,
            "replications": self.replications,
        }

    def curve_rows(self) -> List[Tuple[int, float, float, float]]:
        """(k, exact, reference, simulated) over the combined range"""
        exact, reference, simulated = (self.curves[name] for name in ("exact", "reference", "simulated"))
        k_lo = min(c.k_min for c in (exact, reference, simulated))
        k_hi = max(c.k_max for c in (exact, reference, simulated))
        return [(k, exact[k], reference[k], simulated[k]) for k in range(k_lo, k_hi + 1)]


def head_chi_square(expected: DegreeDistribution, observed: DegreeDistribution, total: float,
                    degrees: List[int]) -> ChiSquareResult:
    """
    Pearson statistic of observed head counts against the exact probabilities.

    Degrees outside `degrees` (and head degrees with tiny expected counts)
    form one remainder category.
    """
    categories = [k for k in degrees if expected[k] * total >= _MIN_EXPECTED]
    exp = np.array([expected[k] for k in categories]) * total
    obs = np.array([observed[k] for k in categories]) * total
    rest_exp = total - exp.sum()
    rest_obs = total - obs.sum()
    if rest_exp >= _MIN_EXPECTED:
        exp = np.append(exp, rest_exp)
        obs = np.append(obs, rest_obs)
    dof = len(exp) - 1
    if dof < 1:
        return ChiSquareResult(math.nan, 0, math.nan, tuple(categories))
    statistic = float(np.sum((obs - exp) ** 2 / exp))
    return ChiSquareResult(statistic, dof, float(chi2.sf(statistic, dof)), tuple(categories))


def _slope(dist: DegreeDistribution, fit_range: Tuple[int, int]) -> float:
    k_lo, k_hi = fit_range
    try:
        return -fit_power_law(np.arange(k_lo, k_hi + 1), dist.window(k_lo, k_hi)).alpha
    except PAGraphError:
        return math.nan


def validate(
    model: Union[CalibratedModel, ModelSpec],
    reference: Union[EmpiricalDistribution, DegreeDistribution],
    n_sim: int,
    replications: int = 1,
    seed: int = 0,
    workers: Optional[int] = None,
    k_max: Optional[int] = None,
    fit_range: Optional[Tuple[int, int]] = None,
    distinct_targets: bool = False,
    k_head: Optional[int] = None,
) -> ValidationReport:
    """Exact vs reference, simulated vs exact, head chi-square and tail slopes"""
    k_max = settings.kmax if k_max is None else k_max
    if isinstance(model, CalibratedModel):
        spec = model.to_model_spec()
        exact = model.exact_vdd(k_max)
        head_end = model.k_head
        fit_range = fit_range or model.diagnostics.fit_range
    else:
        spec = model
        exact = exact_vdd(model, k_max)
        head_end = settings.k_head if k_head is None else k_head
    reference_dist = reference.as_distribution() if isinstance(reference, EmpiricalDistribution) else reference
    if fit_range is None:
        fit_range = (max(head_end, exact.k_min), max(reference_dist.k_max, head_end + 2))

    results = run_replications(spec, n_sim, seed, replications, workers, distinct_targets)
    simulated = mean_degree_histogram([r.degree for r in results])

    head_degrees = list(range(exact.k_min, max(head_end, exact.k_min + 1)))
    chi = head_chi_square(exact, simulated, float(n_sim) * replications, head_degrees)
    report = ValidationReport(
        tv_exact_reference=tv_distance(exact, reference_dist),
        tv_simulated_exact=tv_distance(simulated, exact),
        chi_square=chi,
        tail_slopes={
            "exact": _slope(exact, fit_range),
            "reference": _slope(reference_dist, fit_range),
            "simulated": _slope(simulated, fit_range),
        },
        fit_range=(int(fit_range[0]), int(fit_range[1])),
        n_sim=n_sim,
        replications=replications,
        curves={"exact": exact, "reference": reference_dist, "simulated": simulated},
    )
    logger.info(f"validation: TV(exact, reference)={report.tv_exact_reference:.4g}, "
                f"TV(simulated, exact)={report.tv_simulated_exact:.4g}")
    return report
