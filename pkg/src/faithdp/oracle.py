"""Brute-force density peaks on the full distance matrix.

No batching, no neighbor lists, no mini centers: every quantity is computed
straight from its definition. Conventions that the pipeline must share
(density order, the root's depending distance, center selection and the
root fallback) are imported rather than restated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import GuardRefusedError, InvalidConfigError
from .assignment import center_potential, nearest_center, select_centers
from .core import KERNELS, ROOT, outranks_mask
from .density import row_sums
from .distances import make_source

MAX_ORACLE_N = 20000


@dataclass
class OracleResult:
    distances: np.ndarray
    rho: np.ndarray
    mu: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray
    centers: np.ndarray
    labels: np.ndarray


def _oracle_density(D, dc, kernel):
    n = D.shape[0]
    if kernel == "gaussian":
        # summing over all j and removing the exact exp(0) == 1 self term is
        # the same per-row arithmetic the blocked path performs
        return row_sums(np.exp(-(D / dc) ** 2)) - 1.0
    off_diag = ~np.eye(n, dtype=bool)
    return np.count_nonzero((D < dc) & off_diag, axis=1).astype(np.float64)


def _oracle_leading(D, rho):
    n = D.shape[0]
    mu = np.full(n, ROOT, dtype=np.int64)
    delta = np.zeros(n)
    everyone = np.arange(n)
    for i in range(n):
        denser = np.flatnonzero(outranks_mask(everyone, rho, i))
        if denser.shape[0] == 0:
            delta[i] = D[i].max()
            continue
        d = D[i, denser]
        best = denser[d == d.min()].min()
        mu[i] = best
        delta[i] = D[i, best]
    return mu, delta


def _chain_labels(mu, D, centers):
    n = mu.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    labels[centers] = np.arange(centers.shape[0])
    root = int(np.flatnonzero(mu == ROOT)[0])
    if labels[root] < 0:
        labels[root] = nearest_center(D[root], centers)
    for i in range(n):
        path = []
        j = i
        while labels[j] < 0:
            path.append(j)
            j = mu[j]
        labels[path] = labels[j]
    return labels


def oracle_dp(X, dc, kernel="gaussian", n_clusters=None, metric="euclidean"):
    """Vanilla density peaks clustering on the full ``n x n`` distance matrix.

    Refuses inputs with more than 20 000 points.
    """
    if kernel not in KERNELS:
        raise InvalidConfigError(f"unknown kernel {kernel!r}")
    if not dc > 0:
        raise InvalidConfigError(f"dc must be > 0, got {dc}")
    source = make_source(X, metric)
    n = source.n
    if n > MAX_ORACLE_N:
        raise GuardRefusedError(f"oracle refuses n={n} > {MAX_ORACLE_N}")
    D = source.block(0, n).values
    rho = _oracle_density(D, dc, kernel)
    mu, delta = _oracle_leading(D, rho)
    gamma = center_potential(rho, delta)
    centers = select_centers(gamma, n_clusters)
    labels = _chain_labels(mu, D, centers)
    return OracleResult(D, rho, mu, delta, gamma, centers, labels)
