"""
Model Documents
JSON-compatible schemas for growth models and calibration results
"""
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ValidationError, model_validator

from .errors import DomainError
from .model import (
    AutoSeed, CompleteSeed, ConstantWeight, ExplicitSeed, FixedIncrement, GeneralRule,
    HybridRule, IncrementSpec, LinearRule, LinearWeight, ModelSpec, RuleLabel, SeedPolicy,
    StochasticIncrement, TabulatedWeight, WeightFunction,
)


class WeightsDocument(BaseModel):
    kind: Literal["linear", "constant", "tabulated"]
    s: Optional[float] = None
    head: Optional[List[float]] = None
    k_head: Optional[int] = None
    tail_s: Optional[float] = None


class IncrementDocument(BaseModel):
    fixed_m: Optional[int] = None
    r: Optional[List[Tuple[int, float]]] = None

    @model_validator(mode="after")
    def exactly_one(self):
        if (self.fixed_m is None) == (self.r is None):
            raise ValueError("increment needs exactly one of fixed_m or r")
        return self


class SeedDocument(BaseModel):
    type: Literal["auto", "complete", "explicit"] = "auto"
    n0: Optional[int] = None
    edges: Optional[List[Tuple[int, int]]] = None


class ModelDocument(BaseModel):
    rule: Literal["L", "P", "const", "general"]
    s: Optional[float] = None
    a: Optional[float] = None
    weights: Optional[WeightsDocument] = None
    increment: IncrementDocument
    seed: SeedDocument = SeedDocument()


class FitDiagnosticsDocument(BaseModel):
    fit_range: Tuple[int, int]
    residual: float
    tv_distance: float
    converged: bool
    clamped: List[int] = []
    iterations: int = 0
    solver: str = ""


class CalibrationDocument(ModelDocument):
    m: float
    alpha: float
    mean_weight: float
    fit_diagnostics: FitDiagnosticsDocument


def _weights_to_document(weight: WeightFunction) -> WeightsDocument:
    if isinstance(weight, ConstantWeight):
        return WeightsDocument(kind="constant")
    if isinstance(weight, LinearWeight):
        return WeightsDocument(kind="linear", s=weight.s)
    return WeightsDocument(kind="tabulated", head=list(weight.head), k_head=weight.k_head, tail_s=weight.tail_s)


def _weights_from_document(doc: WeightsDocument) -> WeightFunction:
    if doc.kind == "constant":
        return ConstantWeight()
    if doc.kind == "linear":
        return LinearWeight(doc.s or 0.0)
    if doc.head is None or doc.k_head is None or doc.tail_s is None:
        raise DomainError("tabulated weights need head, k_head and tail_s")
    return TabulatedWeight(tuple(doc.head), doc.tail_s, doc.k_head)


def _increment_to_document(increment: IncrementSpec) -> IncrementDocument:
    if isinstance(increment, FixedIncrement):
        return IncrementDocument(fixed_m=increment.m)
    return IncrementDocument(r=[(x, p) for x, p in increment.items()])


def _increment_from_document(doc: IncrementDocument) -> IncrementSpec:
    if doc.fixed_m is not None:
        return FixedIncrement(doc.fixed_m)
    return StochasticIncrement(tuple(x for x, _ in doc.r), tuple(p for _, p in doc.r))


def _seed_to_document(seed: SeedPolicy) -> SeedDocument:
    if isinstance(seed, CompleteSeed):
        return SeedDocument(type="complete", n0=seed.n0)
    if isinstance(seed, ExplicitSeed):
        return SeedDocument(type="explicit", edges=list(seed.arcs))
    return SeedDocument(type="auto")


def _seed_from_document(doc: SeedDocument) -> SeedPolicy:
    if doc.type == "complete":
        if doc.n0 is None:
            raise DomainError("complete seed needs n0")
        return CompleteSeed(doc.n0)
    if doc.type == "explicit":
        return ExplicitSeed(tuple(doc.edges or ()))
    return AutoSeed()


def _model_fields(spec: ModelSpec) -> Dict[str, Any]:
    label = spec.label
    fields: Dict[str, Any] = {
        "rule": label.value,
        "increment": _increment_to_document(spec.increment),
        "seed": _seed_to_document(spec.seed),
    }
    if label == RuleLabel.HYBRID:
        fields["a"] = spec.rule.a
    elif label == RuleLabel.LINEAR:
        fields["s"] = spec.rule.weight.s
    elif label == RuleLabel.GENERAL:
        fields["weights"] = _weights_to_document(spec.rule.weight)
        if spec.rule.weight.tail_displacement is not None:
            fields["s"] = spec.rule.weight.tail_displacement
    return fields


def model_to_document(spec: ModelSpec) -> Dict[str, Any]:
    """Serialize a ModelSpec to a plain dict"""
    return ModelDocument(**_model_fields(spec)).model_dump(exclude_none=True)


def _spec_from_validated(doc: ModelDocument) -> ModelSpec:
    increment = _increment_from_document(doc.increment)
    seed = _seed_from_document(doc.seed)
    if doc.rule == "P":
        if doc.a is None:
            raise DomainError("rule P needs a", flag="--a")
        return ModelSpec(HybridRule(doc.a), increment, seed)
    if doc.rule == "const":
        return ModelSpec(LinearRule(ConstantWeight()), increment, seed)
    if doc.rule == "L":
        return ModelSpec(LinearRule(LinearWeight(doc.s or 0.0)), increment, seed)
    if doc.weights is None:
        raise DomainError("rule general needs weights", flag="--weights-file")
    return ModelSpec(GeneralRule(_weights_from_document(doc.weights)), increment, seed)


def model_from_document(data: Dict[str, Any]) -> ModelSpec:
    """Parse and validate a model document"""
    try:
        doc = ModelDocument.model_validate(data)
    except ValidationError as e:
        raise DomainError(f"invalid model document: {e}") from e
    return _spec_from_validated(doc)


def is_calibration_document(data: Dict[str, Any]) -> bool:
    return "fit_diagnostics" in data


def calibrated_to_document(spec: ModelSpec, m: float, alpha: float, mean_weight: float,
                           diagnostics: Dict[str, Any]) -> Dict[str, Any]:
    """Model document extended with the fitted quantities"""
    doc = CalibrationDocument(
        **_model_fields(spec),
        m=m,
        alpha=alpha,
        mean_weight=mean_weight,
        fit_diagnostics=FitDiagnosticsDocument(**diagnostics),
    )
    return doc.model_dump(exclude_none=True)


def calibrated_from_document(data: Dict[str, Any]) -> Tuple[ModelSpec, CalibrationDocument]:
    try:
        doc = CalibrationDocument.model_validate(data)
    except ValidationError as e:
        raise DomainError(f"invalid calibration document: {e}") from e
    return _spec_from_validated(doc), doc
