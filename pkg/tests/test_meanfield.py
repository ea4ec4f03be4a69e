import numpy as np
import pytest

from core.errors import DomainError
from core.model import (
    NO_P_GRAPH, ConstantWeight, FixedIncrement, GeneralRule, HybridRule, LinearRule, LinearWeight, ModelSpec,
    StochasticIncrement, TabulatedWeight,
)
from distributions.meanfield import (
    Exponential, PowerLaw, alpha_to_s, arrival_fraction, classify, describe_regime, meanfield_cdf,
    meanfield_degree, meanfield_vdd, s_to_alpha,
)


def test_alpha_to_s_for_measured_exponent():
    assert alpha_to_s(2.0682, 2.1093) == pytest.approx(-1.9655, abs=5e-4)
    assert alpha_to_s(3.0, 2.0) == 0.0
    assert s_to_alpha(alpha_to_s(2.5, 3.0), 3.0) == pytest.approx(2.5)


@pytest.mark.parametrize("alpha", [2.0, 1.5])
def test_alpha_at_or_below_two_is_rejected(alpha):
    with pytest.raises(DomainError) as info:
        alpha_to_s(alpha, 1.0)
    assert "infinite" in str(info.value)
    assert info.value.flag == "--alpha"


def test_meanfield_degree_starts_at_m():
    assert meanfield_degree(2.0, 0.0, 10, 10) == pytest.approx(2.0)
    # BA growth: k(t) = m sqrt(t/i)
    assert meanfield_degree(2.0, 0.0, 1, 100) == pytest.approx(20.0)
    with pytest.raises(DomainError):
        meanfield_degree(2.0, 0.0, 10, 5)


@pytest.mark.parametrize("m,s", [(1.0, -0.9), (2.0, 0.0), (2.1093, -1.9655), (2.0, 12.0)])
def test_meanfield_degree_grows_with_time(m, s):
    degrees = [meanfield_degree(m, s, 3, t) for t in np.geomspace(3, 1e8, 60)]
    assert degrees[0] == pytest.approx(m)
    assert all(b >= a for a, b in zip(degrees, degrees[1:]))


def test_meanfield_cdf():
    assert meanfield_cdf(2.0, 0.0, 2.0) == pytest.approx(0.0)
    # (m/k)^2 of the vertices still have degree >= k in the BA case
    assert arrival_fraction(2.0, 0.0, 20.0) == pytest.approx(0.01)
    assert meanfield_cdf(2.0, 0.0, 20.0) == pytest.approx(0.99)


def test_meanfield_vdd_exponent():
    q = meanfield_vdd(2.0, -1.0, np.array([11.0, 21.0]))
    # (k + s)^-(3m+s)/m with (3m+s)/m = 2.5
    assert q[0] / q[1] == pytest.approx(2.0 ** 2.5)
    assert meanfield_vdd(1.0, 0.0, 10.0) == pytest.approx(2.0 / 1000.0)


def test_meanfield_rejects_bad_parameters():
    with pytest.raises(DomainError):
        meanfield_vdd(1.0, -1.0, 5.0)
    with pytest.raises(DomainError):
        meanfield_vdd(1.0, -0.5, 0.25)
    with pytest.raises(DomainError):
        PowerLaw(2.0)


def test_classify_models():
    assert isinstance(classify(ModelSpec(LinearRule(ConstantWeight()), FixedIncrement(2))), Exponential)
    assert isinstance(classify(ModelSpec(HybridRule(1.0), FixedIncrement(2))), Exponential)
    assert classify(ModelSpec(LinearRule(LinearWeight(-1.0)), FixedIncrement(2))) == PowerLaw(2.5)
    assert classify(ModelSpec(HybridRule(0.75), FixedIncrement(2))) == PowerLaw(9.0)
    tabulated = ModelSpec(
        GeneralRule(TabulatedWeight((0.0, 1.0), -0.5, 3)),
        StochasticIncrement((1, 2, 3), (0.3, 0.4, 0.3)),
    )
    assert classify(tabulated).alpha == pytest.approx(2.75)


def test_describe_regime():
    heavy = describe_regime(1.0, -0.5)
    assert heavy.alpha == pytest.approx(2.5)
    assert heavy.heavy_tailed
    assert heavy.equivalent_a is NO_P_GRAPH
    assert heavy.as_dict()["equivalent_a"] == NO_P_GRAPH.value

    ba = describe_regime(2.0, 0.0)
    assert ba.alpha == 3.0
    assert ba.heavy_tailed
    assert ba.equivalent_a == 0.0

    light = describe_regime(2.0, 12.0)
    assert not light.heavy_tailed
    assert light.equivalent_a == pytest.approx(0.75)
    assert light.as_dict()["class"].startswith("power-law")


def test_tabulated_tail_below_minus_m_is_rejected_before_classify():
    with pytest.raises(DomainError) as info:
        ModelSpec(GeneralRule(TabulatedWeight((1.0,) * 9, -5.0, 10)), FixedIncrement(1))
    assert info.value.flag == "--s"
    # head values may be large as long as the tail keeps alpha above 2
    steep_head = ModelSpec(GeneralRule(TabulatedWeight((1.0,) * 9, -0.9, 10)), FixedIncrement(1))
    assert classify(steep_head).alpha == pytest.approx(2.1)
