import numpy as np
import pytest

from core.documents import (
    calibrated_from_document, calibrated_to_document, is_calibration_document, model_from_document,
    model_to_document,
)
from core.errors import DomainError, InputFormatError, PAGraphError
from core.model import (
    NO_P_GRAPH, CompleteSeed, ConstantWeight, ExplicitSeed, FixedIncrement, GeneralRule, HybridRule,
    LinearRule, LinearWeight, ModelSpec, RuleLabel, StochasticIncrement, TabulatedWeight,
    attachment_probabilities_hybrid, attachment_probabilities_L, attachment_probabilities_P, eval_weight,
    l_to_p, normalized_probabilities, p_to_l,
)


def test_linear_weight_table_zeroes_undefined_degrees():
    f = LinearWeight(-1.5)
    table = f.table(4)
    assert table[0] == 0.0
    assert table[1] == 0.0
    assert table[2] == pytest.approx(0.5)
    assert table[4] == pytest.approx(2.5)
    with pytest.raises(DomainError):
        f.evaluate(1)


def test_constant_weight_is_one_everywhere():
    f = ConstantWeight()
    assert eval_weight(f, 7) == 1.0
    assert list(f.table(3)) == [0.0, 1.0, 1.0, 1.0]


def test_tabulated_weight_head_then_linear_tail():
    f = TabulatedWeight((0.0, 0.5, 2.0), tail_s=-1.0, k_head=4)
    assert f.k_min == 1
    assert f.tail_start == 4
    assert f.tail_displacement == -1.0
    assert [f(k) for k in range(1, 7)] == [0.0, 0.5, 2.0, 3.0, 4.0, 5.0]
    assert list(f.table(5)) == [0.0, 0.0, 0.5, 2.0, 3.0, 4.0]


@pytest.mark.parametrize("head,tail_s,k_head", [
    ((1.0, -0.1), 0.0, 3),
    ((1.0, 2.0), -4.0, 3),
    ((1.0, 2.0, 3.0), 0.0, 3),
])
def test_tabulated_weight_rejects_bad_tables(head, tail_s, k_head):
    with pytest.raises(DomainError):
        TabulatedWeight(head, tail_s, k_head)


def test_stochastic_increment_moments():
    r = StochasticIncrement.from_mapping({3: 0.3, 1: 0.3, 2: 0.4})
    assert r.sizes == (1, 2, 3)
    assert r.mean == pytest.approx(2.0)
    assert (r.g, r.h) == (1, 3)
    assert r.probability(2) == 0.4
    assert r.probability(5) == 0.0
    assert list(r.table(4)) == [0.0, 0.3, 0.4, 0.3, 0.0]


def test_stochastic_increment_support_skips_zero_probabilities():
    r = StochasticIncrement((1, 2, 3, 4), (0.0, 0.5, 0.5, 0.0))
    assert (r.g, r.h) == (2, 3)


@pytest.mark.parametrize("sizes,probs", [
    ((1, 2), (0.5, 0.4)),
    ((2, 1), (0.5, 0.5)),
    ((0, 1), (0.5, 0.5)),
    ((1, 2), (1.5, -0.5)),
])
def test_stochastic_increment_validation(sizes, probs):
    with pytest.raises(DomainError) as info:
        StochasticIncrement(sizes, probs)
    assert info.value.flag == "--increment-dist"


def test_fixed_increment_rejects_non_integer():
    with pytest.raises(DomainError):
        FixedIncrement(1.5)
    with pytest.raises(DomainError):
        FixedIncrement(0)


def test_p_to_l_and_back():
    assert p_to_l(2, 0.75) == pytest.approx(12.0)
    assert l_to_p(2, 12.0) == pytest.approx(0.75)
    assert p_to_l(3, 0.0) == 0.0
    assert isinstance(p_to_l(2, 1.0), ConstantWeight)
    for m, a in [(1, 0.25), (3, 0.5), (5, 0.9)]:
        assert l_to_p(m, p_to_l(m, a)) == pytest.approx(a, rel=1e-14)


def test_negative_displacement_has_no_p_graph():
    assert l_to_p(1, -0.5) is NO_P_GRAPH
    with pytest.raises(DomainError):
        l_to_p(1, -1.0)
    with pytest.raises(DomainError):
        p_to_l(1, 1.2)


def test_hybrid_and_linear_attachment_probabilities_agree():
    # degree sum 6 = 2mN for m = 1, N = 3
    degrees = [1, 3, 2]
    s = p_to_l(1, 0.5)
    p_rule = attachment_probabilities_P(degrees, 1, 0.5)
    l_rule = attachment_probabilities_L(degrees, s)
    assert np.allclose(p_rule, [0.25, 5 / 12, 1 / 3], rtol=0, atol=1e-15)
    assert np.max(np.abs(p_rule - l_rule)) < 1e-15
    assert np.max(np.abs(attachment_probabilities_hybrid(degrees, 0.5) - l_rule)) < 1e-15


def test_normalized_probabilities_rejects_zero_total():
    assert list(normalized_probabilities([1, 3])) == [0.25, 0.75]
    with pytest.raises(DomainError):
        normalized_probabilities([0, 0])


@pytest.mark.parametrize("c", [1e-6, 0.5, 7.0, 1e9])
def test_normalized_probabilities_ignore_weight_scale(c):
    w = np.array([0.0, 1.5, 2.5, 4.0, 12.0])
    assert np.allclose(normalized_probabilities(c * w), normalized_probabilities(w), rtol=1e-13, atol=0)


def test_model_spec_labels_and_weights():
    hybrid = ModelSpec(HybridRule(0.5), FixedIncrement(2))
    assert hybrid.label == RuleLabel.HYBRID
    assert hybrid.weight == LinearWeight(4.0)
    assert hybrid.analytic_mean_weight() == pytest.approx(8.0)
    assert hybrid.equivalent_linear().rule == LinearRule(LinearWeight(4.0))

    const = ModelSpec(HybridRule(1.0), FixedIncrement(2))
    assert isinstance(const.weight, ConstantWeight)
    assert const.analytic_mean_weight() == 1.0

    general = ModelSpec(GeneralRule(TabulatedWeight((1.0,), 0.0, 2)), FixedIncrement(1))
    assert general.label == RuleLabel.GENERAL
    assert general.analytic_mean_weight() is None


def test_model_spec_rejects_inconsistent_parameters():
    with pytest.raises(DomainError):
        ModelSpec(HybridRule(0.5), StochasticIncrement((1, 2), (0.5, 0.5)))
    with pytest.raises(DomainError):
        ModelSpec(LinearRule(LinearWeight(-1.0)), StochasticIncrement((1, 2), (0.5, 0.5)))
    with pytest.raises(DomainError):
        ModelSpec(GeneralRule(TabulatedWeight((1.0,), 0.0, 3)), FixedIncrement(1))
    with pytest.raises(DomainError):
        ModelSpec(GeneralRule(TabulatedWeight((0.0, 0.0, 1.0), -2.0, 4)), FixedIncrement(2))
    with pytest.raises(DomainError):
        HybridRule(-0.1)


@pytest.mark.parametrize("spec", [
    ModelSpec(LinearRule(LinearWeight(0.0)), FixedIncrement(2)),
    ModelSpec(LinearRule(LinearWeight(-0.5)), FixedIncrement(1), CompleteSeed(4)),
    ModelSpec(LinearRule(ConstantWeight()), FixedIncrement(3)),
    ModelSpec(HybridRule(0.25), FixedIncrement(1), ExplicitSeed(((1, 0), (2, 0)))),
    ModelSpec(GeneralRule(TabulatedWeight((0.5, 1.5), -0.5, 3)),
              StochasticIncrement((1, 2, 3), (0.3, 0.4, 0.3))),
])
def test_model_document_round_trip(spec):
    data = model_to_document(spec)
    assert data["rule"] == spec.label.value
    assert not is_calibration_document(data)
    assert model_from_document(data) == spec


def test_model_document_validation_errors():
    with pytest.raises(DomainError):
        model_from_document({"rule": "X", "increment": {"fixed_m": 1}})
    with pytest.raises(DomainError):
        model_from_document({"rule": "L", "s": 0, "increment": {"fixed_m": 1, "r": [[1, 1.0]]}})
    with pytest.raises(DomainError):
        model_from_document({"rule": "P", "increment": {"fixed_m": 1}})


def test_calibration_document_round_trip():
    spec = ModelSpec(GeneralRule(TabulatedWeight((0.6, 1.4), -0.5, 3)),
                     StochasticIncrement((1, 2, 3), (0.3, 0.4, 0.3)))
    diagnostics = {
        "fit_range": (100, 10000), "residual": 0.01, "tv_distance": 1e-4, "converged": True,
        "clamped": [], "iterations": 12, "solver": "fixed-point",
    }
    data = calibrated_to_document(spec, 2.0, 2.75, 3.5, diagnostics)
    assert is_calibration_document(data)
    assert data["s"] == -0.5
    restored, doc = calibrated_from_document(data)
    assert restored == spec
    assert doc.alpha == 2.75
    assert doc.fit_diagnostics.fit_range == (100, 10000)


def test_error_payloads():
    error = InputFormatError("expected 'k n_k'", line_number=3, flag="--weights-file")
    assert str(error).startswith("line 3: ")
    assert error.line_number == 3
    payload = error.to_dict()
    assert payload == {"success": False, "error": str(error), "flag": "--weights-file"}
    assert isinstance(error, ValueError)
    assert isinstance(error, PAGraphError)
