"""
Replications
Independent growth runs, optionally across worker processes, merged in
replication order
"""
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from tqdm import tqdm

from config.settings import settings
from core.model import ModelSpec
from distributions.exact import DegreeDistribution
from distributions.joint import JointDegreeDistribution
from .growth import grow
from .histograms import arc_endpoint_histogram, degree_histogram
from .rng import replication_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ReplicationResult:
    index: int
    seed_key: Tuple[int, ...]
    degree: DegreeDistribution
    arc_joint: Optional[JointDegreeDistribution] = None
    arc_count: int = 0


def replication_seed(base_seed: int, index: int) -> int:
    """64-bit growth seed of replication `index`"""
    return replication_rng(base_seed, index).next_seed()


def _run_one(task) -> ReplicationResult:
    model, n, base_seed, index, distinct_targets, k_max_joint, with_joint = task
    graph = grow(model, n, replication_seed(base_seed, index), distinct_targets, show_progress=False)
    joint = arc_endpoint_histogram(graph, k_max_joint) if with_joint else None
    return ReplicationResult(index, (base_seed, index), degree_histogram(graph), joint, graph.arc_count)


def run_replications(
    model: ModelSpec,
    n: int,
    base_seed: int,
    replications: int = 1,
    workers: Optional[int] = None,
    distinct_targets: bool = False,
    with_joint: bool = False,
    k_max_joint: Optional[int] = None,
    show_progress: Optional[bool] = None,
) -> List[ReplicationResult]:
    """
    Grow `replications` independent graphs.

    Replication j is seeded from (base_seed, j) only, so results do not
    depend on the number of workers or on completion order.
    """
    workers = settings.workers if workers is None else workers
    show_progress = settings.show_progress if show_progress is None else show_progress
    tasks = [(model, n, base_seed, j, distinct_targets, k_max_joint, with_joint) for j in range(replications)]

    results: Dict[int, ReplicationResult] = {}
    if workers <= 1 or replications <= 1:
        for task in tqdm(tasks, desc="Replications", disable=not show_progress):
            result = _run_one(task)
            results[result.index] = result
    else:
        with ProcessPoolExecutor(max_workers=min(workers, replications)) as pool:
            futures = {pool.submit(_run_one, task): task[3] for task in tasks}
            for future in tqdm(as_completed(futures), total=len(futures), desc="Replications",
                               disable=not show_progress):
                result = future.result()
                results[result.index] = result
    logger.info(f"completed {replications} replications of n={n} with {workers} worker(s)")
    return [results[j] for j in range(replications)]
