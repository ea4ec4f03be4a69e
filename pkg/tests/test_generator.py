import numpy as np
import pytest
from scipy.stats import chisquare

from calibration.empirical import tv_distance
from core.errors import DomainError, GenerationError
from core.model import (
    CompleteSeed, ConstantWeight, ExplicitSeed, FixedIncrement, GeneralRule, HybridRule, LinearRule,
    LinearWeight, ModelSpec, StochasticIncrement, TabulatedWeight, eval_weight, p_to_l,
)
from distributions.exact import vdd_L, vdd_P
from distributions.joint import edge_from_arc, joint_P
from generator.growth import draw_increment_size, grow, make_seed
from generator.histograms import (
    arc_endpoint_histogram, degree_histogram, edge_endpoint_histogram, mean_degree_histogram,
    mean_joint_histogram,
)
from generator.replication import replication_seed, run_replications
from generator.rng import SeededRNG, replication_rng
from generator.sampler import WeightedSampler, weighted_pick


def _linear(m, s):
    return ModelSpec(LinearRule(LinearWeight(s)), FixedIncrement(m))


# -- sampler -----------------------------------------------------------------

def test_sampler_prefix_sums():
    sampler = WeightedSampler(capacity=4)
    for w in [1.0, 2.0, 3.0, 4.0]:
        sampler.append(w)
    assert sampler.total() == 10.0
    assert [sampler.find_prefixsum_idx(x) for x in (0.0, 0.99, 1.0, 2.99, 3.0, 5.99, 6.0, 9.99)] == \
        [0, 0, 1, 1, 2, 2, 3, 3]
    sampler[1] = 0.0
    assert sampler.total() == 8.0
    assert sampler.find_prefixsum_idx(1.5) == 2
    assert sampler.positive_count == 3


def test_sampler_grows_past_capacity():
    sampler = WeightedSampler(capacity=2)
    for i in range(37):
        sampler.append(float(i))
    assert len(sampler) == 37
    assert sampler.total() == sum(range(37))
    assert sampler[36] == 36.0
    with pytest.raises(IndexError):
        sampler[37]


def test_sampler_rejects_negative_weight():
    sampler = WeightedSampler()
    sampler.append(1.0)
    with pytest.raises(DomainError):
        sampler[0] = -1.0


def test_weighted_pick_never_returns_zero_weight():
    sampler = WeightedSampler()
    for w in [0.0, 5.0, 0.0, 1.0]:
        sampler.append(w)
    rng = SeededRNG(3)
    picks = {weighted_pick(sampler, rng) for _ in range(2000)}
    assert picks == {1, 3}


def test_weighted_pick_on_empty_weights_fails():
    sampler = WeightedSampler()
    sampler.append(0.0)
    with pytest.raises(GenerationError):
        weighted_pick(sampler, SeededRNG(0))


def test_weighted_pick_frequencies():
    sampler = WeightedSampler()
    for w in [1.0, 2.0, 3.0, 4.0]:
        sampler.append(w)
    rng = SeededRNG(12345)
    draws = 100000
    counts = np.bincount([weighted_pick(sampler, rng) for _ in range(draws)], minlength=4)
    expected = draws * np.array([0.1, 0.2, 0.3, 0.4])
    assert chisquare(counts, expected).pvalue > 1e-4


# -- rng ---------------------------------------------------------------------

def test_rng_streams_are_reproducible_and_independent():
    a, b = SeededRNG(42), SeededRNG(42)
    assert [a.random() for _ in range(5)] == [b.random() for _ in range(5)]
    r0, r1 = replication_rng(42, 0), replication_rng(42, 1)
    assert r0.random() != r1.random()
    assert replication_seed(42, 3) == replication_seed(42, 3)
    child = SeededRNG(42).fork()
    assert child.seed == 42 and child.spawn_key != ()


@pytest.mark.parametrize("seed", [-1, 2 ** 64, 1.5])
def test_rng_rejects_bad_seeds(seed):
    with pytest.raises(DomainError) as info:
        SeededRNG(seed)
    assert info.value.flag == "--seed"


def test_increment_draws_follow_distribution():
    r = StochasticIncrement((1, 3), (0.25, 0.75))
    rng = SeededRNG(9)
    draws = [draw_increment_size(r, rng) for _ in range(4000)]
    assert set(draws) == {1, 3}
    assert np.mean(draws) == pytest.approx(2.5, abs=0.05)
    assert draw_increment_size(FixedIncrement(4), rng) == 4


# -- growth ------------------------------------------------------------------

def test_auto_seed_is_complete_graph():
    graph = make_seed(_linear(2, 0.0).seed, _linear(2, 0.0))
    assert graph.n == 5
    assert graph.arc_count == 10
    assert graph.degree == [4] * 5


def test_explicit_seed():
    spec = ModelSpec(LinearRule(LinearWeight(0.0)), FixedIncrement(1), ExplicitSeed(((1, 0), (2, 1))))
    graph = make_seed(spec.seed, spec)
    assert graph.n == 3
    assert graph.degree == [1, 2, 1]


@pytest.mark.parametrize("spec", [
    _linear(2, 0.0),
    _linear(2, -1.0),
    _linear(1, 3.0),
    ModelSpec(HybridRule(0.5), FixedIncrement(2)),
    ModelSpec(LinearRule(ConstantWeight()), FixedIncrement(3)),
])
def test_growth_invariants(spec):
    graph = grow(spec, 500, rng_seed=11)
    m = spec.increment.m
    assert graph.n == 500
    assert graph.arc_count == graph.seed_arcs + m * (500 - graph.n_seed)
    assert sum(graph.degree) == 2 * graph.arc_count
    new_arcs = graph.arcs[graph.seed_arcs:]
    assert all(target < source for source, target in new_arcs)
    assert list(graph.out_degrees()[graph.n_seed:]) == [m] * (500 - graph.n_seed)


def test_growth_is_deterministic_per_seed():
    spec = _linear(2, -0.5)
    assert grow(spec, 400, 5).arcs == grow(spec, 400, 5).arcs
    assert grow(spec, 400, 5).arcs != grow(spec, 400, 6).arcs


def test_picker_uses_tree_only_when_needed():
    assert grow(_linear(2, -0.5), 50, 1).sampler is not None
    assert grow(_linear(2, 0.5), 50, 1).sampler is None
    assert grow(ModelSpec(HybridRule(0.3), FixedIncrement(1)), 50, 1).sampler is None


def test_distinct_targets():
    spec = _linear(3, 0.0)
    graph = grow(spec, 300, 2, distinct_targets=True)
    for v in range(graph.n_seed, graph.n):
        start = graph.seed_arcs + 3 * (v - graph.n_seed)
        targets = graph.targets[start:start + 3]
        assert len(set(targets)) == 3


def test_distinct_targets_needs_enough_vertices():
    spec = ModelSpec(LinearRule(LinearWeight(0.0)), FixedIncrement(3), CompleteSeed(2))
    with pytest.raises(GenerationError):
        grow(spec, 10, 0, distinct_targets=True)


def test_zero_weight_degrees_never_receive_arcs():
    # f(1) = 0: newcomers of degree 1 stay at degree 1 forever
    spec = ModelSpec(GeneralRule(TabulatedWeight((0.0, 1.0), 0.0, 3)), FixedIncrement(1))
    graph = grow(spec, 300, 4)
    assert graph.sampler is not None
    assert graph.degree[graph.n_seed:] == [1] * (300 - graph.n_seed)


def test_stochastic_increment_growth():
    spec = ModelSpec(GeneralRule(TabulatedWeight((0.5, 1.5), -0.5, 3)),
                     StochasticIncrement((1, 2, 3), (0.3, 0.4, 0.3)))
    graph = grow(spec, 1000, 8)
    out = graph.out_degrees()[graph.n_seed:]
    assert set(out) <= {1, 2, 3}
    assert out.mean() == pytest.approx(2.0, abs=0.15)
    assert graph.arc_count == graph.seed_arcs + int(out.sum())


def test_target_below_seed_size():
    with pytest.raises(DomainError) as info:
        grow(_linear(2, 0.0), 3, 0)
    assert info.value.flag == "--n"


def test_ba_degree_one_fraction():
    graph = grow(_linear(1, 0.0), 20000, 21)
    assert degree_histogram(graph)[1] == pytest.approx(2 / 3, abs=0.02)


def test_hybrid_degree_one_fraction():
    graph = grow(ModelSpec(HybridRule(0.5), FixedIncrement(1)), 20000, 22)
    assert degree_histogram(graph)[1] == pytest.approx(vdd_P(1, 0.5)[1], abs=0.02)


def test_sampler_tracks_vertex_weights_after_each_vertex():
    spec = ModelSpec(GeneralRule(TabulatedWeight((0.5, 1.5), -0.5, 3)),
                     StochasticIncrement((1, 2, 3), (0.3, 0.4, 0.3)))
    for n in range(5, 60):
        graph = grow(spec, n, 13)
        expected = [eval_weight(spec.weight, k) for k in graph.degree]
        assert [graph.sampler[v] for v in range(graph.n)] == expected
        assert graph.total_weight == pytest.approx(sum(expected), rel=1e-12)


def test_total_weight_without_sampler():
    graph = grow(_linear(2, 0.5), 300, 1)
    assert graph.sampler is None
    assert graph.total_weight == pytest.approx(2 * graph.arc_count + 0.5 * graph.n)


# -- histograms --------------------------------------------------------------

def test_histograms_are_normalized():
    graph = grow(_linear(2, 0.0), 2000, 3)
    hist = degree_histogram(graph)
    assert hist.total() == pytest.approx(1.0)
    assert hist.k_min == 2
    arc = arc_endpoint_histogram(graph)
    assert arc.q.sum() == pytest.approx(1.0)
    assert arc.tail_mass == 0.0
    cut = arc_endpoint_histogram(graph, k_max=10)
    assert cut.q.sum() + cut.tail_mass == pytest.approx(1.0)
    edge = edge_endpoint_histogram(graph)
    assert np.allclose(edge.q, edge.q.T)


def test_mean_histograms_do_not_depend_on_order():
    a = degree_histogram(grow(_linear(1, 0.0), 300, 1))
    b = degree_histogram(grow(_linear(1, 0.0), 300, 2))
    c = degree_histogram(grow(_linear(1, 0.0), 300, 3))
    assert np.array_equal(mean_degree_histogram([a, b, c]).q, mean_degree_histogram([c, a, b]).q)
    ja = arc_endpoint_histogram(grow(_linear(1, 0.0), 300, 1))
    jb = arc_endpoint_histogram(grow(_linear(1, 0.0), 300, 2))
    assert np.array_equal(mean_joint_histogram([ja, jb]).q, mean_joint_histogram([jb, ja]).q)
    with pytest.raises(DomainError):
        mean_joint_histogram([ja, edge_endpoint_histogram(grow(_linear(1, 0.0), 300, 2))])


# -- replications ------------------------------------------------------------

def test_replications_do_not_depend_on_workers():
    spec = _linear(2, 0.0)
    serial = run_replications(spec, 300, 17, replications=3, workers=1, with_joint=True, k_max_joint=30)
    parallel = run_replications(spec, 300, 17, replications=3, workers=2, with_joint=True, k_max_joint=30)
    assert [r.index for r in parallel] == [0, 1, 2]
    for a, b in zip(serial, parallel):
        assert np.array_equal(a.degree.q, b.degree.q)
        assert np.array_equal(a.arc_joint.q, b.arc_joint.q)
    assert not np.array_equal(serial[0].degree.q, serial[1].degree.q)


# -- full-size checks --------------------------------------------------------

def _joint_tv(a, b, k_lo, k_hi):
    inside_a = inside_b = diff = 0.0
    for l in range(k_lo, k_hi + 1):
        for k in range(k_lo, k_hi + 1):
            x, y = a.get(l, k), b.get(l, k)
            inside_a += x
            inside_b += y
            diff += abs(x - y)
    return 0.5 * (diff + abs(inside_a - inside_b))


@pytest.mark.slow
def test_simulated_ba_matches_exact_distribution():
    results = run_replications(_linear(2, 0.0), 100000, 2024, replications=10, workers=4)
    simulated = mean_degree_histogram([r.degree for r in results])
    assert tv_distance(simulated, vdd_L(2, 0.0)) < 0.01


@pytest.mark.slow
def test_simulated_edge_endpoints_match_exact_joint():
    spec = ModelSpec(HybridRule(0.75), FixedIncrement(2))
    results = run_replications(spec, 100000, 2025, replications=10, workers=4, with_joint=True, k_max_joint=50)
    simulated = edge_from_arc(mean_joint_histogram([r.arc_joint for r in results]))
    exact = edge_from_arc(joint_P(2, 0.75, 500)).restricted(50)
    assert _joint_tv(simulated, exact, 2, 50) < 0.02


@pytest.mark.slow
def test_hybrid_and_linear_twin_grow_alike():
    m, a = 2, 0.75
    hybrid = run_replications(ModelSpec(HybridRule(a), FixedIncrement(m)), 100000, 2026,
                              replications=10, workers=4)
    linear = run_replications(_linear(m, p_to_l(m, a)), 100000, 2027, replications=10, workers=4)
    p_hist = mean_degree_histogram([r.degree for r in hybrid])
    l_hist = mean_degree_histogram([r.degree for r in linear])
    exact = vdd_P(m, a)
    assert tv_distance(p_hist, l_hist) < 0.02
    assert tv_distance(p_hist, exact) < 0.02
    assert tv_distance(l_hist, exact) < 0.02


@pytest.mark.slow
def test_weighted_pick_frequencies_across_seeds():
    weights = [1.0, 2.0, 3.0, 4.0]
    draws = 1000000
    expected = draws * np.array(weights) / sum(weights)
    passed = 0
    for seed in range(100):
        sampler = WeightedSampler(capacity=4)
        for w in weights:
            sampler.append(w)
        rng = SeededRNG(seed)
        counts = np.bincount([weighted_pick(sampler, rng) for _ in range(draws)], minlength=4)
        passed += chisquare(counts, expected).pvalue > 1e-3
    assert passed >= 99
