from .errors import (
    PAGraphError, DomainError, InputFormatError, ConvergenceError, GenerationError, CalibrationError,
)
from .model import (
    WeightFunction, LinearWeight, ConstantWeight, TabulatedWeight, eval_weight, normalized_probabilities,
    IncrementSpec, FixedIncrement, StochasticIncrement,
    AutoSeed, CompleteSeed, ExplicitSeed, SeedPolicy,
    LinearRule, HybridRule, GeneralRule, AttachmentRule, RuleLabel, ModelSpec,
    Equivalence, NO_P_GRAPH, p_to_l, l_to_p,
    attachment_probabilities_P, attachment_probabilities_hybrid, attachment_probabilities_L,
)
from .documents import (
    model_to_document, model_from_document, calibrated_to_document, calibrated_from_document,
    is_calibration_document,
)

__all__ = [
    'PAGraphError', 'DomainError', 'InputFormatError', 'ConvergenceError', 'GenerationError',
    'CalibrationError',
    'WeightFunction', 'LinearWeight', 'ConstantWeight', 'TabulatedWeight', 'eval_weight',
    'normalized_probabilities',
    'IncrementSpec', 'FixedIncrement', 'StochasticIncrement',
    'AutoSeed', 'CompleteSeed', 'ExplicitSeed', 'SeedPolicy',
    'LinearRule', 'HybridRule', 'GeneralRule', 'AttachmentRule', 'RuleLabel', 'ModelSpec',
    'Equivalence', 'NO_P_GRAPH', 'p_to_l', 'l_to_p',
    'attachment_probabilities_P', 'attachment_probabilities_hybrid', 'attachment_probabilities_L',
    'model_to_document', 'model_from_document', 'calibrated_to_document', 'calibrated_from_document',
    'is_calibration_document',
]
