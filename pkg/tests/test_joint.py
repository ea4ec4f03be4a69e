import math

import numpy as np
import pytest

from core.errors import DomainError
from core.model import ConstantWeight, LinearWeight, TabulatedWeight
from distributions.exact import vdd_const, vdd_L
from distributions.joint import EndpointKind, edge_from_arc, joint_general, joint_L, joint_P


def _marginal_deficits(joint, vdd, m, k_hi):
    n = k_hi - m + 1
    ks = np.arange(m, k_hi + 1)
    source = vdd.window(m, k_hi) - joint.source_marginal()[:n]
    target = (ks - m) * vdd.window(m, k_hi) / m - joint.target_marginal()[:n]
    return source, target


def test_linear_first_row_values():
    joint = joint_L(1, 0.0, 50)
    assert joint.kind == EndpointKind.ARC
    assert joint.get(1, 2) == pytest.approx(2 / 15, rel=1e-14)
    assert joint.get(1, 1) == 0.0
    assert joint.get(0, 3) == 0.0


def test_constant_weight_values_and_edge_form():
    joint = joint_general(ConstantWeight(), 1, mean_weight=1.0, k_max=60)
    assert joint.get(1, 2) == pytest.approx(1 / 6, rel=1e-14)
    assert joint.get(1, 3) == pytest.approx(5 / 36, rel=1e-14)
    theta = edge_from_arc(joint)
    assert theta.kind == EndpointKind.EDGE
    assert theta.get(1, 2) == pytest.approx(1 / 12, rel=1e-14)
    assert theta.get(2, 1) == theta.get(1, 2)


def test_constant_weight_marginals():
    joint = joint_general(ConstantWeight(), 1, mean_weight=1.0, k_max=80)
    source, target = _marginal_deficits(joint, vdd_const(1, 80), 1, 40)
    assert np.max(np.abs(source)) < 1e-12
    assert np.max(np.abs(target)) < 1e-12


@pytest.mark.parametrize("m,a", [(2, 0.75), (1, 0.5)])
def test_hybrid_joint_equals_linear_twin(m, a):
    s = 2 * a * m / (1 - a)
    p = joint_P(m, a, 500)
    twin = joint_L(m, s, 500)
    assert np.max(np.abs(p.q - twin.q)) < 1e-12


def test_fast_decaying_joint_marginals():
    # tail exponent 9: nothing of note lies past 500
    m = 2
    joint = joint_L(m, 12.0, 500)
    source, target = _marginal_deficits(joint, vdd_L(m, 12.0, 500), m, 100)
    assert np.max(np.abs(source)) < 1e-6
    assert np.max(np.abs(target)) < 1e-6
    assert joint.tail_mass < 1e-6


def test_ba_joint_marginals_up_to_truncation():
    m = 2
    joint = joint_L(m, 0.0, 2000)
    source, target = _marginal_deficits(joint, vdd_L(m, 0.0, 2000), m, 500)
    # every missing entry lies beyond the window, so each deficit is bounded by the total cut mass
    assert joint.tail_mass == pytest.approx(1.0 - math.fsum(joint.q.ravel()))
    for deficit in (source, target):
        assert np.all(deficit >= -1e-12)
        assert np.all(deficit <= joint.tail_mass + 1e-12)


def test_general_linear_weight_matches_linear_joint():
    general = joint_general(LinearWeight(0.5), 1, mean_weight=2.5, k_max=100)
    linear = joint_L(1, 0.5, 100)
    assert np.allclose(general.q, linear.q, rtol=1e-12, atol=1e-300)
    assert general.params["mean_weight"] == 2.5


def test_general_tabulated_weight_solves_mean_weight():
    f = TabulatedWeight((1.5, 2.5), 0.5, 3)
    joint = joint_general(f, 1, k_max=100)
    assert joint.params["mean_weight"] == pytest.approx(2.5, abs=1e-8)
    assert np.allclose(joint.q, joint_L(1, 0.5, 100).q, rtol=1e-6, atol=1e-15)


def test_structural_zeros():
    joint = joint_L(2, 0.0, 20)
    assert joint.is_structural_zero(2, 2)
    assert joint.is_structural_zero(5, 2)
    assert not joint.is_structural_zero(2, 3)
    assert np.all(joint.q[:, 0] == 0.0)
    theta = edge_from_arc(joint)
    assert theta.is_structural_zero(2, 2)
    assert not theta.is_structural_zero(5, 2)


def test_edge_form_is_symmetric_and_keeps_mass():
    joint = joint_P(2, 0.5, 200)
    theta = edge_from_arc(joint)
    assert np.array_equal(theta.q, theta.q.T)
    assert math.fsum(theta.q.ravel()) == pytest.approx(math.fsum(joint.q.ravel()), abs=1e-14)
    with pytest.raises(DomainError):
        edge_from_arc(theta)


def test_restricted_window_moves_mass_to_tail():
    joint = joint_L(1, 0.0, 200)
    small = joint.restricted(50)
    assert small.k_max == 50
    assert small.get(3, 7) == joint.get(3, 7)
    assert small.tail_mass + math.fsum(small.q.ravel()) == pytest.approx(1.0, abs=1e-12)
    assert small.tail_mass > joint.tail_mass


def test_joint_domain_errors():
    with pytest.raises(DomainError):
        joint_P(2, 1.5, 10)
    with pytest.raises(DomainError):
        joint_L(0, 0.0, 10)
