"""
Histograms
Empirical degree and endpoint-degree distributions of grown graphs
"""
import math
from typing import Optional, Sequence

import numpy as np

from core.errors import DomainError
from distributions.exact import DegreeDistribution
from distributions.joint import EndpointKind, JointDegreeDistribution, edge_from_arc
from .growth import GrowingGraph


def degree_histogram(graph: GrowingGraph) -> DegreeDistribution:
    """Fraction of vertices with each degree"""
    if graph.n == 0:
        raise DomainError("empty graph has no degree histogram")
    counts = np.bincount(np.asarray(graph.degree, dtype=np.int64))
    k_min = int(np.flatnonzero(counts)[0])
    q = counts[k_min:] / graph.n
    return DegreeDistribution(k_min, q, 0.0, math.nan, 0, "empirical")


def arc_endpoint_histogram(graph: GrowingGraph, k_max: Optional[int] = None) -> JointDegreeDistribution:
    """
    Fraction of arcs with (source degree, target degree) = (l, k).

    Arcs with an endpoint degree above k_max are counted in tail_mass.
    """
    if graph.arc_count == 0:
        raise DomainError("graph has no arcs")
    degree = np.asarray(graph.degree, dtype=np.int64)
    l = degree[np.asarray(graph.sources, dtype=np.int64)]
    k = degree[np.asarray(graph.targets, dtype=np.int64)]
    k_min = int(min(l.min(), k.min()))
    top = int(max(l.max(), k.max())) if k_max is None else int(k_max)
    if top < k_min:
        raise DomainError(f"k_max={top} is below the smallest endpoint degree {k_min}", flag="--kmax-joint")
    inside = (l <= top) & (k <= top)
    q = np.zeros((top - k_min + 1, top - k_min + 1))
    np.add.at(q, (l[inside] - k_min, k[inside] - k_min), 1.0)
    q /= graph.arc_count
    tail = float(np.count_nonzero(~inside)) / graph.arc_count
    return JointDegreeDistribution(k_min, q, EndpointKind.ARC, tail, {"model": "empirical", "arcs": graph.arc_count})


def edge_endpoint_histogram(graph: GrowingGraph, k_max: Optional[int] = None) -> JointDegreeDistribution:
    return edge_from_arc(arc_endpoint_histogram(graph, k_max))


def _order_free_mean(stack: np.ndarray) -> np.ndarray:
    # sorting along the replication axis makes the sum independent of input order
    return np.sort(stack, axis=0).sum(axis=0) / stack.shape[0]


def mean_degree_histogram(histograms: Sequence[DegreeDistribution]) -> DegreeDistribution:
    """Average of replication histograms over their combined degree range"""
    if not histograms:
        raise DomainError("no histograms to average")
    k_lo = min(h.k_min for h in histograms)
    k_hi = max(h.k_max for h in histograms)
    stack = np.stack([h.window(k_lo, k_hi) for h in histograms])
    tail = math.fsum(sorted(h.tail_mass for h in histograms)) / len(histograms)
    return DegreeDistribution(k_lo, _order_free_mean(stack), tail, math.nan, 0, "empirical")


def mean_joint_histogram(histograms: Sequence[JointDegreeDistribution]) -> JointDegreeDistribution:
    if not histograms:
        raise DomainError("no histograms to average")
    kinds = {h.kind for h in histograms}
    if len(kinds) != 1:
        raise DomainError("cannot average arc and edge histograms together", flag="--kind")
    k_lo = min(h.k_min for h in histograms)
    k_hi = max(h.k_max for h in histograms)
    n = k_hi - k_lo + 1
    padded = []
    for h in histograms:
        q = np.zeros((n, n))
        offset = h.k_min - k_lo
        q[offset:offset + h.q.shape[0], offset:offset + h.q.shape[1]] = h.q
        padded.append(q)
    tail = math.fsum(sorted(h.tail_mass for h in histograms)) / len(histograms)
    return JointDegreeDistribution(k_lo, _order_free_mean(np.stack(padded)), kinds.pop(), tail,
                                   {"model": "empirical", "replications": len(histograms)})
