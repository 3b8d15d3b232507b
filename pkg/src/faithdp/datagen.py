"""Synthetic workloads: interleaved five-arm spirals and Gaussian blobs."""

from __future__ import annotations

import numpy as np

from ._errors import InvalidConfigError

SPIRAL_ARMS = 5
# arms three quarters of a turn long: adjacent arms stay about twice as far
# apart as the 2nd-percentile pairwise distance
SPIRAL_A = 0.5
SPIRAL_B = 2.0
SPIRAL_T = (0.5, 1.5 * np.pi)


def _split_counts(n_total, parts):
    # the remainder goes to the lowest-index parts
    base, extra = divmod(n_total, parts)
    return [base + (c < extra) for c in range(parts)]


def five_spirals(n_total, noise_sigma=0.05, seed=0, *, a=SPIRAL_A, b=SPIRAL_B, t_range=SPIRAL_T):
    """Five interleaved Archimedean spiral arms in 2-D.

    Arm ``c`` follows ``r = a + b t`` at angle ``t + 2 pi c / 5``, with ``t``
    evenly spaced over ``t_range``; each coordinate then gets Gaussian noise
    of standard deviation ``noise_sigma``.

    Returns
    -------
    X : ndarray of shape (n_total, 2)
    labels : ndarray of shape (n_total,)
        Arm index of each point. Rows are grouped by arm.
    """
    if n_total < SPIRAL_ARMS:
        raise InvalidConfigError(f"n_total must be at least {SPIRAL_ARMS}, got {n_total}")
    if noise_sigma < 0:
        raise InvalidConfigError("noise_sigma must be non-negative")
    rng = np.random.default_rng(seed)
    t0, t1 = t_range
    pts, labels = [], []
    for c, count in enumerate(_split_counts(n_total, SPIRAL_ARMS)):
        t = np.linspace(t0, t1, count)
        r = a + b * t
        angle = t + c * (2 * np.pi / SPIRAL_ARMS)
        pts.append(np.column_stack([r * np.cos(angle), r * np.sin(angle)]))
        labels.append(np.full(count, c, dtype=np.int64))
    X = np.concatenate(pts)
    X += rng.normal(0.0, 1.0, size=X.shape) * noise_sigma
    return X, np.concatenate(labels)


def _blob_centers(C, d, separation):
    if C <= d:
        # scaled coordinate axes: every pair exactly `separation` apart
        return np.eye(d)[:C] * (separation / np.sqrt(2.0))
    centers = np.zeros((C, d))
    if d == 1:
        centers[:, 0] = np.arange(C) * separation
        return centers
    # regular polygon in the first two dimensions, neighbors `separation` apart
    radius = separation / (2 * np.sin(np.pi / C))
    angle = 2 * np.pi * np.arange(C) / C
    centers[:, 0] = radius * np.cos(angle)
    centers[:, 1] = radius * np.sin(angle)
    return centers


def gaussian_blobs(n_total, n_clusters=3, n_dims=2, separation=10.0, sigma=1.0, seed=0):
    """Isotropic Gaussian clusters with centers ``separation`` apart.

    With ``n_clusters <= n_dims`` the centers sit on scaled coordinate axes
    and are exactly ``separation`` apart pairwise; otherwise they form a
    regular polygon in the first two dimensions (a line when ``n_dims`` is 1)
    with neighboring centers ``separation`` apart. Rows are shuffled.
    """
    if n_clusters < 1 or n_dims < 1 or n_total < n_clusters:
        raise InvalidConfigError(
            f"need 1 <= n_clusters <= n_total and n_dims >= 1 "
            f"(got n_total={n_total}, n_clusters={n_clusters}, n_dims={n_dims})"
        )
    if sigma < 0 or separation < 0:
        raise InvalidConfigError("sigma and separation must be non-negative")
    rng = np.random.default_rng(seed)
    centers = _blob_centers(n_clusters, n_dims, separation)
    labels = np.concatenate(
        [np.full(k, c, dtype=np.int64) for c, k in enumerate(_split_counts(n_total, n_clusters))]
    )
    X = centers[labels] + rng.normal(0.0, sigma, size=(n_total, n_dims))
    perm = rng.permutation(n_total)
    return X[perm], labels[perm]
