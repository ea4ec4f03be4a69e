from .rng import SeededRNG, replication_rng
from .sampler import WeightedSampler, weighted_pick
from .growth import GrowingGraph, IncrementSampler, make_seed, draw_increment_size, grow
from .histograms import (
    degree_histogram, arc_endpoint_histogram, edge_endpoint_histogram, mean_degree_histogram,
    mean_joint_histogram,
)
from .replication import ReplicationResult, replication_seed, run_replications

__all__ = [
    'SeededRNG', 'replication_rng',
    'WeightedSampler', 'weighted_pick',
    'GrowingGraph', 'IncrementSampler', 'make_seed', 'draw_increment_size', 'grow',
    'degree_histogram', 'arc_endpoint_histogram', 'edge_endpoint_histogram', 'mean_degree_histogram',
    'mean_joint_histogram',
    'ReplicationResult', 'replication_seed', 'run_replications',
]
