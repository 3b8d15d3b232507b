"""Domain types, the density total order and the run configuration."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

import numpy as np

from ._errors import InternalInvariantError, InvalidConfigError

ROOT = -1
"""Sentinel stored in ``mu`` for the global density maximum."""

KERNELS = ("gaussian", "cutoff")
METRICS = ("euclidean", "cosine", "precomputed")

DEFAULT_K = 16
DEFAULT_BATCH = 1024
DEFAULT_PERCENTILE = 2.0
DEFAULT_DC_SAMPLE = 2000


def density_outranks(i, rho_i, j, rho_j):
    """Return True if point ``i`` is denser than point ``j``.

    Ties in density go to the smaller index, which turns the density
    comparison into a strict total order.
    """
    return bool(rho_i > rho_j or (rho_i == rho_j and i < j))


def outranks_mask(candidates, rho, point):
    """Vectorized :func:`density_outranks` of each candidate over ``point``."""
    candidates = np.asarray(candidates)
    rc = rho[candidates]
    rp = rho[point]
    return (rc > rp) | ((rc == rp) & (candidates < point))


def density_order(rho):
    """Indices sorted from the densest point down (ties by lower index)."""
    rho = np.asarray(rho)
    return np.lexsort((np.arange(rho.shape[0]), -rho))


@dataclass(frozen=True)
class DistanceBlock:
    """Wide distance block: ``m`` consecutive rows against all ``n`` points."""

    row_offset: int
    values: np.ndarray

    @property
    def m(self):
        return self.values.shape[0]

    @property
    def n(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class KnnTable:
    """Per-point nearest neighbors, sorted ascending by (distance, index)."""

    ids: np.ndarray
    dists: np.ndarray

    @property
    def n(self):
        return self.ids.shape[0]

    @property
    def K(self):
        return self.ids.shape[1]


@dataclass(frozen=True)
class LeadingStructure:
    """Depending node ``mu`` (``ROOT`` for the maximum) and depending distance ``delta``."""

    mu: np.ndarray
    delta: np.ndarray

    @property
    def root(self):
        roots = np.flatnonzero(self.mu == ROOT)
        if roots.shape[0] != 1:
            raise InternalInvariantError(f"expected exactly one root, found {roots.shape[0]}")
        return int(roots[0])


@dataclass(frozen=True)
class ClusterResult:
    centers: np.ndarray
    labels: np.ndarray

    @property
    def n_clusters(self):
        return self.centers.shape[0]


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines the output of a run.

    ``dc`` and ``dc_percentile`` are mutually exclusive; when ``dc`` is None
    the cutoff is estimated from a seeded sample of pairwise distances.
    ``n_clusters=None`` selects the cluster count automatically.
    """

    kernel: str = "gaussian"
    dc: Optional[float] = None
    dc_percentile: float = DEFAULT_PERCENTILE
    dc_sample_size: int = DEFAULT_DC_SAMPLE
    K: int = DEFAULT_K
    batch_size: int = DEFAULT_BATCH
    workers: Optional[int] = None
    n_clusters: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise InvalidConfigError(f"kernel must be one of {KERNELS}, got {self.kernel!r}")
        if self.dc is not None and not (np.isfinite(self.dc) and self.dc > 0):
            raise InvalidConfigError(f"dc must be a positive finite number, got {self.dc}")
        if not 0 < self.dc_percentile < 100:
            raise InvalidConfigError(f"dc_percentile must lie in (0, 100), got {self.dc_percentile}")
        if self.dc_sample_size < 2:
            raise InvalidConfigError("dc_sample_size must be at least 2")
        if self.K < 1:
            raise InvalidConfigError(f"K must be >= 1, got {self.K}")
        if self.batch_size < 1:
            raise InvalidConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.workers is not None and self.workers < 1:
            raise InvalidConfigError(f"workers must be >= 1, got {self.workers}")
        if self.n_clusters is not None and self.n_clusters < 1:
            raise InvalidConfigError(f"n_clusters must be >= 1, got {self.n_clusters}")

    def check_n(self, n):
        """Validate the size-dependent constraints against ``n`` points."""
        if n > 1 and not self.K < n:
            raise InvalidConfigError(f"K={self.K} must be smaller than n={n}")
        if self.n_clusters is not None and self.n_clusters > n:
            raise InvalidConfigError(f"n_clusters={self.n_clusters} exceeds n={n}")

    def effective_K(self, n):
        # n == 1 has no neighbors at all
        return min(self.K, n - 1)

    def effective_batch(self, n):
        return min(self.batch_size, n)

    def effective_workers(self, n):
        n_batches = -(-n // self.effective_batch(n))
        workers = self.workers
        if workers is None:
            workers = os.cpu_count() or 1
        return max(1, min(workers, n_batches))

    def to_dict(self):
        return asdict(self)


@dataclass
class RunReport:
    """Metadata recorded by a pipeline run."""

    config: dict
    n: int
    dc: float
    n_clusters: int
    n_minicenters: int
    workers: int
    n_batches: int
    timings: dict = field(default_factory=dict)
    peak_block_entries: int = 0
    max_single_block_entries: int = 0
    root_delta_convention: str = "max_distance"

    def to_dict(self):
        return asdict(self)
