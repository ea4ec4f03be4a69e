from .empirical import (
    EmpiricalDistribution, load_degree_file, parse_degree_text, from_distribution, tv_distance,
)
from .fitting import (
    TailFit, CalibrationOptions, FitDiagnostics, CalibratedModel, fit_power_law, log_log_slope,
    fit_tail_exponent, default_fit_range, auto_increment, invert_head, calibrate,
)
from .validation import ChiSquareResult, ValidationReport, head_chi_square, validate

__all__ = [
    'EmpiricalDistribution', 'load_degree_file', 'parse_degree_text', 'from_distribution', 'tv_distance',
    'TailFit', 'CalibrationOptions', 'FitDiagnostics', 'CalibratedModel', 'fit_power_law', 'log_log_slope',
    'fit_tail_exponent', 'default_fit_range', 'auto_increment', 'invert_head', 'calibrate',
    'ChiSquareResult', 'ValidationReport', 'head_chi_square', 'validate',
]
