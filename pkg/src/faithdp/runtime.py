"""Coordinator/worker execution of the blocked pipeline.

Workers are threads that talk to the coordinator only through queues. The
coordinator hands each worker its batch windows, gathers the per-window
results and writes them into the global vectors by row offset, so the order
in which messages arrive never affects the output. Two barriers separate the
stages: all density/KNN segments are in before the density vector is
broadcast for the leading-node scan, and all scan results are in before the
mini centers are resolved centrally.
"""

from __future__ import annotations

import logging
import os
import queue
import threading
import time
from dataclasses import dataclass

import numpy as np

from ._errors import WorkerError
from .assignment import assign_labels, center_potential, select_centers
from .core import ClusterResult, KnnTable, LeadingStructure, RunConfig, RunReport
from .density import density_segment, estimate_dc
from .leading import knn_from_block, merge_leading, resolve_minicenters, scan_leading

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShardPlan:
    """Batch windows ``(row_offset, m)`` and their round-robin worker assignment."""

    n: int
    batch_size: int
    R: int
    batches: tuple
    assignments: tuple

    @property
    def n_batches(self):
        return len(self.batches)


def plan_shards(n, batch_size, R):
    """Split ``[0, n)`` into ``ceil(n / batch_size)`` windows; batch ``k`` goes to worker ``k % R``."""
    batches = tuple((s, min(batch_size, n - s)) for s in range(0, n, batch_size))
    assignments = tuple(batches[r::R] for r in range(R))
    return ShardPlan(n, batch_size, R, batches, assignments)


class BlockTracker:
    """Counts live distance-block entries across threads and records the peak."""

    def __init__(self):
        self._lock = threading.Lock()
        self.live = 0
        self.peak = 0
        self.max_single = 0
        self.allocations = 0

    def acquire(self, entries):
        with self._lock:
            self.live += entries
            self.allocations += 1
            self.peak = max(self.peak, self.live)
            self.max_single = max(self.max_single, entries)

    def release(self, entries):
        with self._lock:
            self.live -= entries


class _Worker(threading.Thread):
    def __init__(self, rank, windows, outbox):
        super().__init__(name=f"faithdp-worker-{rank}", daemon=True)
        self.rank = rank
        self.windows = windows
        self.inbox = queue.Queue()
        self.outbox = outbox

    def run(self):
        while True:
            msg = self.inbox.get()
            if msg is None:
                return
            task, shared = msg
            for window in self.windows:
                try:
                    result = task(window, shared)
                except BaseException as exc:  # reported to the coordinator
                    self.outbox.put(("error", self.rank, window, exc))
                    break
                self.outbox.put(("result", self.rank, window, result))
            self.outbox.put(("done", self.rank, None, None))


class WorkerPool:
    """``R`` worker threads with private inboxes and one shared outbox."""

    def __init__(self, plan):
        self.plan = plan
        self.outbox = queue.Queue()
        self.workers = [_Worker(r, plan.assignments[r], self.outbox) for r in range(plan.R)]

    def __enter__(self):
        for w in self.workers:
            w.start()
        return self

    def __exit__(self, *exc):
        for w in self.workers:
            w.inbox.put(None)
        for w in self.workers:
            w.join()

    def run(self, task, shared=None):
        """Broadcast ``(task, shared)`` and gather ``{row_offset: result}`` at the barrier."""
        for w in self.workers:
            w.inbox.put((task, shared))
        results = {}
        failure = None
        pending = len(self.workers)
        while pending:
            kind, rank, window, payload = self.outbox.get()
            if kind == "done":
                pending -= 1
            elif kind == "error":
                if failure is None:
                    failure = WorkerError(rank, window, payload)
                    failure.__cause__ = payload
            else:
                results[window[0]] = payload
        if failure is not None:
            raise failure
        return results


def _compute_slots(R):
    # live blocks are bounded by the worker count and further by the cores
    # that can actually work on them at once
    return threading.BoundedSemaphore(max(1, min(R, os.cpu_count() or 1)))


def run_stage1(plan, source, *, dc, kernel="gaussian", K=16, tracker=None, pool=None):
    """Per window: distance block, density segment and KNN rows.

    Returns
    -------
    rho : ndarray of shape (n,)
    knn : KnnTable
    """
    n = plan.n
    K = min(K, n - 1)
    slots = _compute_slots(plan.R)

    def task(window, _):
        offset, m = window
        with slots:
            block = source.block(offset, m)
            entries = block.values.size
            if tracker is not None:
                tracker.acquire(entries)
            try:
                if K > 0:
                    knn = knn_from_block(block, K)
                else:
                    knn = KnnTable(np.empty((m, 0), dtype=np.int64), np.empty((m, 0)))
                rho = density_segment(block, dc, kernel)
            finally:
                if tracker is not None:
                    tracker.release(entries)
                del block
        return rho, knn

    results = _dispatch(plan, task, None, pool)
    rho = np.empty(n)
    ids = np.empty((n, K), dtype=np.int64)
    dists = np.empty((n, K))
    for offset, m in plan.batches:
        seg, knn = results[offset]
        rho[offset:offset + m] = seg
        ids[offset:offset + m] = knn.ids
        dists[offset:offset + m] = knn.dists
    return rho, KnnTable(ids, dists)


def run_stage2(plan, knn, rho, source, *, tracker=None, pool=None):
    """Leading-node scan on the workers, then central mini-center resolution.

    Returns
    -------
    leading : LeadingStructure
    minicenters : ndarray of int
    """

    def task(window, shared):
        offset, m = window
        knn_all, rho_all = shared
        part = KnnTable(knn_all.ids[offset:offset + m], knn_all.dists[offset:offset + m])
        return scan_leading(part, rho_all, row_offset=offset)

    results = _dispatch(plan, task, (knn, rho), pool)
    parts = []
    for offset, _ in plan.batches:
        mu, delta, _ = results[offset]
        parts.append((offset, mu, delta))
    minicenters = np.concatenate([results[o][2] for o, _ in plan.batches]).astype(np.int64)
    mc_mu, mc_delta = resolve_minicenters(
        minicenters, source, rho, batch_size=plan.batch_size, tracker=tracker
    )
    leading = merge_leading(plan.n, parts, mc_mu, minicenters, mc_delta)
    return leading, minicenters


def _dispatch(plan, task, shared, pool):
    if pool is not None:
        return pool.run(task, shared)
    with WorkerPool(plan) as own:
        return own.run(task, shared)


@dataclass
class PipelineResult:
    """Every intermediate vector of a run plus the clustering."""

    dc: float
    rho: np.ndarray
    knn: KnnTable
    leading: LeadingStructure
    gamma: np.ndarray
    minicenters: np.ndarray
    clusters: ClusterResult

    @property
    def labels(self):
        return self.clusters.labels

    @property
    def centers(self):
        return self.clusters.centers


def resolve_dc(source, config):
    if config.dc is not None:
        return float(config.dc)
    return estimate_dc(source, config.dc_percentile, config.dc_sample_size, config.seed)


def run_pipeline(source, config=None):
    """Run all three stages on ``source`` and return ``(PipelineResult, RunReport)``."""
    config = RunConfig() if config is None else config
    n = source.n
    config.check_n(n)
    b = config.effective_batch(n)
    R = config.effective_workers(n)
    K = config.effective_K(n)
    plan = plan_shards(n, b, R)
    tracker = BlockTracker()
    timings = {}

    t0 = time.perf_counter()
    dc = resolve_dc(source, config) if n > 1 else float(config.dc or 1.0)
    timings["dc"] = time.perf_counter() - t0

    with WorkerPool(plan) as pool:
        t = time.perf_counter()
        rho, knn = run_stage1(plan, source, dc=dc, kernel=config.kernel, K=K,
                              tracker=tracker, pool=pool)
        timings["stage1"] = time.perf_counter() - t
        logger.debug("stage 1 done in %.3fs", timings["stage1"])

        t = time.perf_counter()
        leading, minicenters = run_stage2(plan, knn, rho, source, tracker=tracker, pool=pool)
        timings["stage2"] = time.perf_counter() - t

    t = time.perf_counter()
    gamma = center_potential(rho, leading.delta)
    centers = select_centers(gamma, config.n_clusters)
    clusters = assign_labels(leading, rho, centers, source)
    timings["stage3"] = time.perf_counter() - t
    timings["total"] = time.perf_counter() - t0

    result = PipelineResult(dc, rho, knn, leading, gamma, minicenters, clusters)
    report = RunReport(
        config=config.to_dict(),
        n=n,
        dc=dc,
        n_clusters=int(centers.shape[0]),
        n_minicenters=int(minicenters.shape[0]),
        workers=R,
        n_batches=plan.n_batches,
        timings=timings,
        peak_block_entries=tracker.peak,
        max_single_block_entries=tracker.max_single,
    )
    return result, report
