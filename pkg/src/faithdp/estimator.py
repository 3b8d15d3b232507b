"""scikit-learn compatible front end."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._errors import InvalidConfigError
from .core import DEFAULT_BATCH, DEFAULT_DC_SAMPLE, DEFAULT_K, DEFAULT_PERCENTILE, RunConfig
from .distances import make_source
from .runtime import run_pipeline


class FaithPDP(ClusterMixin, BaseEstimator):
    """Density peaks clustering computed block by block, without an ``n x n`` matrix.

    Densities, depending nodes, depending distances and labels are identical
    to those of brute-force density peaks clustering (see
    :func:`faithdp.oracle.oracle_dp`) while memory stays linear in ``n``.

    Parameters
    ----------
    n_clusters : int or "auto", default="auto"
        Number of centers. ``"auto"`` (or None) cuts the sorted center
        potentials at their largest ratio gap.
    kernel : {"gaussian", "cutoff"}, default="gaussian"
    dc : float, optional
        Cutoff distance. Estimated from ``dc_percentile`` when omitted.
    dc_percentile : float, default=2.0
        Percentile of sampled pairwise distances used for ``dc``.
    dc_sample_size : int, default=2000
    n_neighbors : int, default=16
        Neighbors kept per point for the leading-node scan. Affects speed
        only, never the result.
    batch_size : int, default=1024
        Rows per distance block.
    n_workers : int, optional
        Worker threads; defaults to the CPU count.
    metric : {"euclidean", "cosine", "precomputed"}, default="euclidean"
    random_state : int, default=0
        Seed for the ``dc`` sample.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
    centers_ : ndarray of int
        Indices of the center points, in label order.
    cluster_centers_ : ndarray of shape (n_clusters, n_features)
        Center coordinates (not set for ``metric="precomputed"``).
    rho_, delta_, gamma_ : ndarray of shape (n_samples,)
        Local density, depending distance and center potential.
    mu_ : ndarray of shape (n_samples,)
        Depending node of every point, ``-1`` for the densest point.
    knn_indices_, knn_distances_ : ndarray of shape (n_samples, n_neighbors)
    minicenters_ : ndarray of int
        Points whose depending node was not among their neighbors.
    dc_ : float
    report_ : RunReport
    """

    def __init__(
        self,
        n_clusters="auto",
        *,
        kernel="gaussian",
        dc=None,
        dc_percentile=DEFAULT_PERCENTILE,
        dc_sample_size=DEFAULT_DC_SAMPLE,
        n_neighbors=DEFAULT_K,
        batch_size=DEFAULT_BATCH,
        n_workers=None,
        metric="euclidean",
        random_state=0,
    ):
        self.n_clusters = n_clusters
        self.kernel = kernel
        self.dc = dc
        self.dc_percentile = dc_percentile
        self.dc_sample_size = dc_sample_size
        self.n_neighbors = n_neighbors
        self.batch_size = batch_size
        self.n_workers = n_workers
        self.metric = metric
        self.random_state = random_state

    def _config(self):
        n_clusters = self.n_clusters
        if isinstance(n_clusters, str):
            if n_clusters != "auto":
                raise InvalidConfigError(f"n_clusters must be an int or 'auto', got {n_clusters!r}")
            n_clusters = None
        return RunConfig(
            kernel=self.kernel,
            dc=self.dc,
            dc_percentile=self.dc_percentile,
            dc_sample_size=self.dc_sample_size,
            K=self.n_neighbors,
            batch_size=self.batch_size,
            workers=self.n_workers,
            n_clusters=n_clusters,
            seed=self.random_state,
        )

    def fit(self, X, y=None):
        """Cluster ``X``; ``y`` is ignored."""
        config = self._config()
        if self.metric == "precomputed" and isinstance(X, np.memmap):
            data = X
        else:
            data = check_array(X, dtype=np.float64, ensure_min_samples=1)
        source = make_source(data, self.metric)
        result, report = run_pipeline(source, config)

        self.labels_ = result.labels
        self.centers_ = result.centers
        if self.metric != "precomputed":
            self.cluster_centers_ = np.asarray(data)[result.centers]
        self.n_clusters_ = int(result.centers.shape[0])
        self.rho_ = result.rho
        self.mu_ = result.leading.mu
        self.delta_ = result.leading.delta
        self.gamma_ = result.gamma
        self.knn_indices_ = result.knn.ids
        self.knn_distances_ = result.knn.dists
        self.minicenters_ = result.minicenters
        self.dc_ = result.dc
        self.report_ = report
        self.n_features_in_ = np.asarray(data).shape[1]
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def decision_graph(self):
        """``(rho_, delta_)``, the coordinates of the classic decision graph."""
        check_is_fitted(self, "labels_")
        return self.rho_, self.delta_
