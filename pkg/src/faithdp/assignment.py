"""Center potential, center selection and chain-rule label propagation."""

from __future__ import annotations

import numpy as np

from ._errors import InternalInvariantError, InvalidConfigError, InvalidInputError
from .core import ROOT, ClusterResult, density_order

AUTO_MAX_CLUSTERS = 50


def center_potential(rho, delta):
    """Elementwise ``rho * delta``."""
    rho = np.asarray(rho, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    if rho.shape != delta.shape:
        raise InvalidInputError(f"rho and delta differ in shape: {rho.shape} vs {delta.shape}")
    return rho * delta


def _gap_choice(g):
    kmax = min(g.shape[0] - 1, AUTO_MAX_CLUSTERS)
    if kmax < 2:
        return min(2, g.shape[0])
    hi = g[1:kmax]
    lo = g[2:kmax + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(lo > 0, hi / np.where(lo > 0, lo, 1.0), np.where(hi > 0, np.inf, 1.0))
    # ratio[0] is the gap after the 2nd value
    return int(np.argmax(ratio)) + 2


def select_centers(gamma, n_clusters=None):
    """Indices of the cluster centers, by descending ``gamma`` (ties by lower index).

    With ``n_clusters=None`` the count is the position of the largest ratio
    between consecutive sorted potentials, searched over the first 50 and
    never below 2.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    n = gamma.shape[0]
    order = np.argsort(-gamma, kind="stable")
    if n_clusters is None:
        n_clusters = _gap_choice(gamma[order])
    elif not 1 <= n_clusters <= n:
        raise InvalidConfigError(f"n_clusters={n_clusters} must lie in [1, n={n}]")
    return order[:n_clusters].astype(np.int64)


def nearest_center(row, centers):
    """Position in ``centers`` of the center closest to the point with distance ``row``.

    Used to label the root when it was not picked as a center; ties go to
    the earlier center.
    """
    return int(np.argmin(np.asarray(row)[np.asarray(centers)]))


def assign_labels(leading, rho, centers, source=None):
    """Label every point with the label of its depending node.

    Centers get labels ``0..C-1`` in the order given. Points are visited from
    densest to sparsest, so a depending node is always labelled before the
    points that depend on it. When the root is not a center it joins the
    nearest center (``source`` is then required for the distances).
    """
    mu = leading.mu
    n = mu.shape[0]
    centers = np.asarray(centers, dtype=np.int64)
    if centers.shape[0] == 0 or np.unique(centers).shape[0] != centers.shape[0]:
        raise InvalidInputError("centers must be non-empty and distinct")
    labels = np.full(n, -1, dtype=np.int64)
    labels[centers] = np.arange(centers.shape[0])
    root = leading.root
    if labels[root] < 0:
        if source is None:
            raise InvalidInputError("root is not a center; a distance source is needed")
        row = source.rows(np.array([root]))[0]
        labels[root] = nearest_center(row, centers)
    for i in density_order(rho):
        if labels[i] >= 0:
            continue
        parent = mu[i]
        if parent == ROOT or labels[parent] < 0:
            raise InternalInvariantError(f"point {i} depends on an unlabelled point {parent}")
        labels[i] = labels[parent]
    return ClusterResult(centers, labels)
