"""
Empirical Degree Data
Degree histograms (k, n_k) loaded from text files or synthesized from
exact distributions
"""
import io
import logging
import math
import os
import re
from dataclasses import dataclass
from typing import Dict, Optional, Union

import numpy as np

from core.errors import DomainError, InputFormatError
from distributions.exact import DegreeDistribution

logger = logging.getLogger(__name__)

_SEPARATORS = re.compile(r"[,\s]+")


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Counts n_k of vertices with degree k; counts may be fractional"""
    k: np.ndarray
    n: np.ndarray
    edges: Optional[float] = None

    def __post_init__(self):
        k = np.array(self.k, dtype=np.int64)
        n = np.array(self.n, dtype=float)
        if k.ndim != 1 or k.shape != n.shape or len(k) == 0:
            raise DomainError("degree data needs matching, non-empty k and n_k columns")
        if np.any(np.diff(k) <= 0):
            raise DomainError("degrees must be strictly increasing")
        if np.any(n < 0) or not np.all(np.isfinite(n)):
            raise DomainError("counts n_k must be finite and >= 0")
        if not n.sum() > 0:
            raise DomainError("degree data has zero total count")
        k.setflags(write=False)
        n.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)

    @property
    def N(self) -> float:
        return float(self.n.sum())

    @property
    def q_hat(self) -> np.ndarray:
        return self.n / self.N

    @property
    def k_min(self) -> int:
        return int(self.k[0])

    @property
    def k_max(self) -> int:
        return int(self.k[-1])

    def lookup(self, k: int) -> float:
        """Q^_k, zero for degrees absent from the data"""
        idx = int(np.searchsorted(self.k, k))
        if idx < len(self.k) and self.k[idx] == k:
            return float(self.n[idx] / self.N)
        return 0.0

    def count(self, k: int) -> float:
        idx = int(np.searchsorted(self.k, k))
        if idx < len(self.k) and self.k[idx] == k:
            return float(self.n[idx])
        return 0.0

    def mean_degree(self) -> float:
        return float(np.dot(self.k, self.n) / self.N)

    def as_distribution(self) -> DegreeDistribution:
        """Dense Q^_k over k_min..k_max"""
        q = np.zeros(self.k_max - self.k_min + 1)
        q[self.k - self.k_min] = self.q_hat
        return DegreeDistribution(self.k_min, q, 0.0, math.nan, 0, "empirical")


def _read_text(source) -> str:
    try:
        if isinstance(source, (bytes, bytearray)):
            return bytes(source).decode("utf-8")
        if hasattr(source, "read"):
            data = source.read()
            return data.decode("utf-8") if isinstance(data, bytes) else data
        if isinstance(source, (str, os.PathLike)):
            with open(source, "r", encoding="utf-8") as f:
                return f.read()
    except UnicodeDecodeError as e:
        raise InputFormatError(f"degree data is not valid UTF-8: {e}") from e
    except OSError as e:
        raise InputFormatError(f"cannot read degree file: {e}") from e
    raise DomainError(f"cannot read degree data from {type(source).__name__}")


def parse_degree_text(text: str, edges: Optional[float] = None) -> EmpiricalDistribution:
    counts: Dict[int, float] = {}
    for line_number, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [part for part in _SEPARATORS.split(line) if part]
        if len(fields) != 2:
            raise InputFormatError(f"expected 'k n_k', got {raw.strip()!r}", line_number)
        try:
            k_value = float(fields[0])
            n_value = float(fields[1])
        except ValueError:
            raise InputFormatError(f"non-numeric value in {raw.strip()!r}", line_number)
        if not k_value.is_integer() or k_value < 0:
            raise InputFormatError(f"degree must be a nonnegative integer, got {fields[0]}", line_number)
        if n_value < 0 or not math.isfinite(n_value):
            raise InputFormatError(f"negative or invalid count {fields[1]}", line_number)
        k = int(k_value)
        if k in counts:
            raise InputFormatError(f"duplicate degree k={k}", line_number)
        counts[k] = n_value
    if not counts:
        raise InputFormatError("degree file contains no data")
    ks = sorted(counts)
    return EmpiricalDistribution(np.array(ks), np.array([counts[k] for k in ks]), edges)


def load_degree_file(source: Union[str, os.PathLike, bytes, io.IOBase],
                     edges: Optional[float] = None) -> EmpiricalDistribution:
    """
    Read `k n_k` lines (whitespace or comma separated, `#` comments).

    `source` is a path, raw bytes or an open stream.
    """
    emp = parse_degree_text(_read_text(source), edges)
    logger.info(f"loaded degree data: {len(emp.k)} degrees, N={emp.N:g}")
    return emp


def from_distribution(dist: DegreeDistribution, total: float = 1e6,
                      edges: Optional[float] = None) -> EmpiricalDistribution:
    """Synthetic data with n_k = total * Q_k"""
    return EmpiricalDistribution(dist.degrees(), np.asarray(dist.q) * total, edges)


def _as_dense(dist) -> DegreeDistribution:
    if isinstance(dist, EmpiricalDistribution):
        return dist.as_distribution()
    if isinstance(dist, DegreeDistribution):
        return dist
    if isinstance(dist, dict):
        ks = sorted(dist)
        q = np.zeros(ks[-1] - ks[0] + 1)
        for k in ks:
            q[k - ks[0]] = dist[k]
        return DegreeDistribution(ks[0], q, 0.0, math.nan, 0, "empirical")
    raise DomainError(f"cannot compare distribution of type {type(dist).__name__}")


def tv_distance(p, q) -> float:
    """Total variation distance, half the L1 distance over the union of supports"""
    a, b = _as_dense(p), _as_dense(q)
    k_lo = min(a.k_min, b.k_min)
    k_hi = max(a.k_max, b.k_max)
    return 0.5 * math.fsum(np.abs(a.window(k_lo, k_hi) - b.window(k_lo, k_hi)))
