"""
Graph Growth
Grows preferential-attachment graphs vertex by vertex under the linear,
hybrid and general attachment rules
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from config.settings import settings
from core.errors import DomainError, GenerationError
from core.model import (
    AutoSeed, CompleteSeed, ConstantWeight, ExplicitSeed, FixedIncrement, HybridRule, IncrementSpec,
    LinearRule, LinearWeight, ModelSpec, SeedPolicy, WeightFunction,
)
from .rng import SeededRNG
from .sampler import WeightedSampler, weighted_pick

logger = logging.getLogger(__name__)

_MAX_REJECTIONS = 10000


@dataclass
class GrowingGraph:
    """Directed multigraph; arcs point from the newer vertex to the older one"""
    sources: List[int] = field(default_factory=list)
    targets: List[int] = field(default_factory=list)
    degree: List[int] = field(default_factory=list)
    n_seed: int = 0
    seed_arcs: int = 0
    weight: Optional[WeightFunction] = None
    sampler: Optional[WeightedSampler] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.degree)

    @property
    def arc_count(self) -> int:
        return len(self.sources)

    @property
    def arcs(self) -> List[Tuple[int, int]]:
        return list(zip(self.sources, self.targets))

    @property
    def total_weight(self) -> float:
        """Sum of f(degree) over all vertices"""
        if self.sampler is not None:
            return self.sampler.total()
        if self.weight is None:
            return math.nan
        degrees = np.asarray(self.degree)
        return float(self.weight.table(int(degrees.max()))[degrees].sum()) if self.n else 0.0

    def add_arc(self, source: int, target: int):
        self.sources.append(source)
        self.targets.append(target)
        self.degree[source] += 1
        self.degree[target] += 1

    def out_degrees(self) -> np.ndarray:
        return np.bincount(np.asarray(self.sources, dtype=np.int64), minlength=self.n)


def _complete_graph(n0: int) -> GrowingGraph:
    graph = GrowingGraph(degree=[0] * n0, n_seed=n0)
    for i in range(n0):
        for j in range(i):
            graph.add_arc(i, j)
    graph.seed_arcs = graph.arc_count
    return graph


def make_seed(policy: SeedPolicy, model: ModelSpec) -> GrowingGraph:
    """Initial graph for a growth run"""
    if isinstance(policy, AutoSeed):
        graph = _complete_graph(2 * math.ceil(model.m) + 1)
    elif isinstance(policy, CompleteSeed):
        graph = _complete_graph(policy.n0)
    elif isinstance(policy, ExplicitSeed):
        n0 = 1 + max(max(u, v) for u, v in policy.arcs)
        graph = GrowingGraph(degree=[0] * n0, n_seed=n0)
        for u, v in policy.arcs:
            graph.add_arc(u, v)
        graph.seed_arcs = graph.arc_count
    else:
        raise DomainError(f"unknown seed policy {policy!r}")
    if graph.arc_count == 0:
        raise GenerationError("seed graph has no arcs")
    graph.weight = model.weight
    return graph


class IncrementSampler:
    """Draws x with P(x) = r_x"""

    def __init__(self, increment: IncrementSpec):
        self._fixed = increment.m if isinstance(increment, FixedIncrement) else None
        if self._fixed is None:
            sizes, probs = zip(*increment.items())
            self._sizes = list(sizes)
            self._cumulative = np.cumsum(probs)

    def __call__(self, rng: SeededRNG) -> int:
        if self._fixed is not None:
            return self._fixed
        return self._sizes[rng.choice_index(self._cumulative)]


def draw_increment_size(r: IncrementSpec, rng: SeededRNG) -> int:
    return IncrementSampler(r)(rng)


class _Grower:
    """
    Target selection for one growth run.

    Degree-proportional draws pick a uniform arc endpoint, uniform draws pick
    a uniform vertex, and everything else goes through the sum tree. All
    draws within an increment see the graph as it was before the increment.
    """

    def __init__(self, model: ModelSpec, graph: GrowingGraph, rng: SeededRNG):
        self.graph = graph
        self.rng = rng
        self.endpoints: List[int] = []
        for u, v in zip(graph.sources, graph.targets):
            self.endpoints.append(u)
            self.endpoints.append(v)
        self.weight = model.weight
        self._cache: Dict[int, float] = {}
        has_isolated = min(graph.degree) == 0

        rule = model.rule
        self.uniform_share = None
        if isinstance(rule, HybridRule) and not has_isolated:
            self.mode = "hybrid"
            self.a = rule.a
        elif isinstance(rule, LinearRule) and isinstance(self.weight, ConstantWeight) and not has_isolated:
            self.mode = "uniform"
        elif isinstance(rule, LinearRule) and isinstance(self.weight, LinearWeight) and self.weight.s >= 0 \
                and not has_isolated:
            self.mode = "linear"
        else:
            self.mode = "tree"
            graph.sampler = WeightedSampler(max(1024, graph.n))
            for k in graph.degree:
                graph.sampler.append(self.vertex_weight(k))
        logger.debug(f"growth picker mode: {self.mode}")

    def vertex_weight(self, k: int) -> float:
        w = self._cache.get(k)
        if w is None:
            try:
                w = self.weight.evaluate(k) if k >= max(1, self.weight.k_min) else 0.0
            except DomainError:
                w = 0.0
            self._cache[k] = w
        return w

    def attachable(self) -> int:
        if self.mode == "tree":
            return self.graph.sampler.positive_count
        return self.graph.n

    def pick(self, n_before: int, endpoints_before: int) -> int:
        rng = self.rng
        if self.mode == "hybrid":
            if rng.random() < self.a:
                return rng.randbelow(n_before)
            return self.endpoints[rng.randbelow(endpoints_before)]
        if self.mode == "uniform":
            return rng.randbelow(n_before)
        if self.mode == "linear":
            s = self.weight.s
            uniform_mass = s * n_before
            if rng.random() * (endpoints_before + uniform_mass) < uniform_mass:
                return rng.randbelow(n_before)
            return self.endpoints[rng.randbelow(endpoints_before)]
        return weighted_pick(self.graph.sampler, rng)

    def add_vertex(self, x: int, distinct: bool):
        graph = self.graph
        n_before, endpoints_before = graph.n, len(self.endpoints)
        if distinct and x > self.attachable():
            raise GenerationError(
                f"cannot draw {x} distinct targets from {self.attachable()} attachable vertices"
            )
        chosen: List[int] = []
        for _ in range(x):
            target = self.pick(n_before, endpoints_before)
            if distinct:
                attempts = 0
                while target in chosen:
                    attempts += 1
                    if attempts > _MAX_REJECTIONS:
                        raise GenerationError(f"rejection sampling of distinct targets stalled at vertex {n_before}")
                    target = self.pick(n_before, endpoints_before)
            chosen.append(target)

        source = n_before
        graph.degree.append(0)
        if graph.sampler is not None:
            graph.sampler.append(0.0)
        for target in chosen:
            graph.add_arc(source, target)
            self.endpoints.append(source)
            self.endpoints.append(target)
        if graph.sampler is not None:
            for v in set(chosen):
                graph.sampler[v] = self.vertex_weight(graph.degree[v])
            graph.sampler[source] = self.vertex_weight(graph.degree[source])


def grow(model: ModelSpec, target_n: int, rng_seed: int, distinct_targets: bool = False,
         show_progress: Optional[bool] = None) -> GrowingGraph:
    """
    Grow a graph to target_n vertices.

    Each new vertex brings x arcs (x from the model's increment) whose
    targets are drawn independently from the existing vertices. Repeated
    targets are allowed unless distinct_targets is set.
    """
    rng = SeededRNG(rng_seed)
    graph = make_seed(model.seed, model)
    if target_n < graph.n:
        raise DomainError(f"target n={target_n} is below the seed size {graph.n}", flag="--n")
    grower = _Grower(model, graph, rng)
    increments = IncrementSampler(model.increment)
    show_progress = settings.show_progress if show_progress is None else show_progress

    steps = range(graph.n, target_n)
    for _ in tqdm(steps, desc="Growing", disable=not show_progress, leave=False):
        grower.add_vertex(increments(rng), distinct_targets)
    logger.info(f"grew {model.label.value} graph: n={graph.n}, arcs={graph.arc_count}, mode={grower.mode}")
    return graph
