from .solver import FixedPointResult, solve_fixed_point
from .exact import (
    DegreeDistribution, vdd_L, vdd_P, vdd_const, vdd_const_closed, vdd_L_closed, vdd_mixture,
    vdd_general, vdd_stochastic, stationary_distribution, exact_vdd, tail_weight_sum, balance_recurrence,
)
from .joint import EndpointKind, JointDegreeDistribution, joint_P, joint_L, joint_general, edge_from_arc
from .meanfield import (
    PowerLaw, Exponential, AsymptoticClass, RegimeDescription, meanfield_degree, meanfield_vdd,
    meanfield_cdf, arrival_fraction, alpha_to_s, s_to_alpha, classify, describe_regime,
)

__all__ = [
    'FixedPointResult', 'solve_fixed_point',
    'DegreeDistribution', 'vdd_L', 'vdd_P', 'vdd_const', 'vdd_const_closed', 'vdd_L_closed',
    'vdd_mixture', 'vdd_general', 'vdd_stochastic', 'stationary_distribution', 'exact_vdd', 'balance_recurrence',
    'tail_weight_sum',
    'EndpointKind', 'JointDegreeDistribution', 'joint_P', 'joint_L', 'joint_general', 'edge_from_arc',
    'PowerLaw', 'Exponential', 'AsymptoticClass', 'RegimeDescription', 'meanfield_degree',
    'meanfield_vdd', 'meanfield_cdf', 'arrival_fraction', 'alpha_to_s', 's_to_alpha', 'classify',
    'describe_regime',
]
