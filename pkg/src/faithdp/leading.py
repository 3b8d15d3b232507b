"""Nearest-neighbor tables, the inverse leading-node scan and mini-center resolution."""

from __future__ import annotations

import numpy as np

from ._errors import InvalidConfigError
from .core import ROOT, KnnTable, LeadingStructure, density_order

_CHUNK = 256


def _knn_rows(D, offset, K):
    m, n = D.shape
    rows = np.arange(m)
    selfcol = offset + rows
    D[rows, selfcol] = np.inf
    try:
        part = np.argpartition(D, K - 1, axis=1)[:, :K]
        pd = np.take_along_axis(D, part, axis=1)
        kth = pd.max(axis=1)
        # argpartition picks an arbitrary subset of entries tied with the
        # K-th distance; redo those rows with a stable sort
        n_tied_all = np.count_nonzero(D == kth[:, None], axis=1)
        n_tied_sel = np.count_nonzero(pd == kth[:, None], axis=1)
        for r in np.flatnonzero(n_tied_all != n_tied_sel):
            part[r] = np.argsort(D[r], kind="stable")[:K]
            pd[r] = D[r, part[r]]
    finally:
        D[rows, selfcol] = 0.0
    order = np.lexsort((part, pd), axis=-1)
    return np.take_along_axis(part, order, axis=1), np.take_along_axis(pd, order, axis=1)


def knn_from_block(block, K):
    """K nearest neighbors of every row of ``block``, excluding the point itself.

    Rows come out sorted ascending by ``(distance, index)``, so equal
    distances are broken by lower index. The block is modified in place while
    this runs and restored before returning.

    Returns
    -------
    KnnTable
        Rows for the block's window only.
    """
    m, n = block.values.shape
    if not 1 <= K < n:
        raise InvalidConfigError(f"K must satisfy 1 <= K < n (K={K}, n={n})")
    ids = np.empty((m, K), dtype=np.int64)
    dists = np.empty((m, K))
    for start in range(0, m, _CHUNK):
        stop = min(start + _CHUNK, m)
        i, d = _knn_rows(block.values[start:stop], block.row_offset + start, K)
        ids[start:stop] = i
        dists[start:stop] = d
    return KnnTable(ids, dists)


def scan_leading(knn, rho, row_offset=0):
    """Inverse leading-node finding over a window of KNN rows.

    For every point, walk its neighbors from nearest to farthest and stop at
    the first one that is denser. Because the row is sorted, no denser point
    can be closer than the one found, so the answer equals the brute-force
    nearest denser point.

    Parameters
    ----------
    knn : KnnTable
        Rows for points ``row_offset .. row_offset + len(knn.ids) - 1``.
    rho : ndarray of shape (n,)
        The full density vector.

    Returns
    -------
    mu, delta : ndarray
        ``mu`` is ``ROOT`` and ``delta`` is 0 where no denser neighbor was found.
    minicenters : ndarray of int
        Global indices of those points.
    """
    ids = knn.ids
    m = ids.shape[0]
    points = row_offset + np.arange(m)
    if ids.shape[1] == 0:
        return np.full(m, ROOT, dtype=np.int64), np.zeros(m), points.astype(np.int64)
    r_nb = rho[ids]
    r_pt = rho[points][:, None]
    denser = (r_nb > r_pt) | ((r_nb == r_pt) & (ids < points[:, None]))
    found = denser.any(axis=1)
    first = denser.argmax(axis=1)
    mu = np.where(found, ids[np.arange(m), first], ROOT).astype(np.int64)
    delta = np.where(found, knn.dists[np.arange(m), first], 0.0)
    return mu, delta, points[~found].astype(np.int64)


def nearest_denser(rows, points, rho):
    """Nearest denser point for each of ``points`` from their full distance rows.

    Returns ``(mu, delta)``; the global maximum gets ``ROOT`` and the largest
    entry of its row.
    """
    n = rho.shape[0]
    points = np.asarray(points, dtype=np.int64)
    rp = rho[points][:, None]
    denser = (rho[None, :] > rp) | ((rho[None, :] == rp) & (np.arange(n)[None, :] < points[:, None]))
    masked = np.where(denser, rows, np.inf)
    # argmin returns the first minimum: lower index wins distance ties
    q = np.argmin(masked, axis=1)
    found = denser.any(axis=1)
    r = np.arange(points.shape[0])
    mu = np.where(found, q, ROOT).astype(np.int64)
    delta = np.where(found, rows[r, q], rows.max(axis=1) if n else 0.0)
    return mu, delta


def resolve_minicenters(minicenters, source, rho, batch_size=1024, tracker=None):
    """Depending node and distance for each mini center via its full distance row.

    Rows are fetched ``batch_size`` at a time. ``tracker`` (optional) is
    notified of every block allocation and release.
    """
    minicenters = np.asarray(minicenters, dtype=np.int64)
    mu = np.empty(minicenters.shape[0], dtype=np.int64)
    delta = np.empty(minicenters.shape[0])
    for start in range(0, minicenters.shape[0], batch_size):
        sel = minicenters[start:start + batch_size]
        rows = source.rows(sel)
        if tracker is not None:
            tracker.acquire(rows.size)
        try:
            mu[start:start + sel.shape[0]], delta[start:start + sel.shape[0]] = nearest_denser(
                rows, sel, rho
            )
        finally:
            if tracker is not None:
                tracker.release(rows.size)
            del rows
    return mu, delta


def merge_leading(n, parts, minicenter_mu, minicenters, minicenter_delta):
    """Assemble the full :class:`LeadingStructure` from window results."""
    mu = np.full(n, ROOT, dtype=np.int64)
    delta = np.zeros(n)
    for offset, part_mu, part_delta in parts:
        mu[offset:offset + part_mu.shape[0]] = part_mu
        delta[offset:offset + part_delta.shape[0]] = part_delta
    mu[minicenters] = minicenter_mu
    delta[minicenters] = minicenter_delta
    return LeadingStructure(mu, delta)


def check_leading(leading, rho):
    """Raise if ``leading`` is not a tree rooted at the density maximum."""
    from ._errors import InternalInvariantError

    mu = leading.mu
    root = leading.root
    if root != int(density_order(rho)[0]):
        raise InternalInvariantError("root is not the density maximum")
    idx = np.flatnonzero(mu != ROOT)
    q = mu[idx]
    ok = (rho[q] > rho[idx]) | ((rho[q] == rho[idx]) & (q < idx))
    if not ok.all():
        raise InternalInvariantError("a depending node does not outrank its point")
