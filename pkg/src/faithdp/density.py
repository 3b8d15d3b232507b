"""Local density segments and cutoff-distance estimation."""

from __future__ import annotations

import numpy as np

from ._errors import DegenerateDataError, InvalidConfigError
from .core import KERNELS

# rows per temporary when turning a block into densities
_CHUNK = 256


def row_sums(values):
    """Strict left-to-right sum of each row.

    Unlike ``np.sum`` (pairwise summation) the result of a row never depends
    on anything but that row's entries in column order.
    """
    if values.shape[1] == 0:
        return np.zeros(values.shape[0])
    acc = np.add.accumulate(values, axis=1)
    return acc[:, -1].copy()


def _gaussian_rows(D, dc):
    E = np.divide(D, dc)
    np.square(E, out=E)
    np.negative(E, out=E)
    np.exp(E, out=E)
    np.add.accumulate(E, axis=1, out=E)
    # the self column contributes exp(0) == 1 exactly
    return E[:, -1] - 1.0


def density_segment(block, dc, kernel="gaussian"):
    """Densities of the points in ``block``'s row window.

    Parameters
    ----------
    block : DistanceBlock
        Wide block whose self entries are exact zeros.
    dc : float
        Cutoff distance, > 0.
    kernel : {"gaussian", "cutoff"}
        ``gaussian`` sums ``exp(-(d/dc)^2)`` over all other points;
        ``cutoff`` counts the other points with ``d < dc``.

    Returns
    -------
    ndarray of shape (m,)
    """
    if not dc > 0:
        raise InvalidConfigError(f"dc must be > 0, got {dc}")
    if kernel not in KERNELS:
        raise InvalidConfigError(f"unknown kernel {kernel!r}")
    D = block.values
    m = D.shape[0]
    out = np.empty(m)
    for start in range(0, m, _CHUNK):
        chunk = D[start:start + _CHUNK]
        if kernel == "gaussian":
            out[start:start + _CHUNK] = _gaussian_rows(chunk, dc)
        else:
            counts = np.count_nonzero(chunk < dc, axis=1)
            # the self column is 0 < dc; drop it by index, duplicates still count
            out[start:start + _CHUNK] = counts - 1
    return out


def estimate_dc(source, percentile=2.0, sample_size=2000, seed=0):
    """Cutoff distance as a percentile of pairwise distances in a random sample.

    Draws ``min(sample_size, n)`` points without replacement, takes every
    pairwise distance among them and returns the requested percentile
    (linear interpolation).
    """
    if not 0 < percentile < 100:
        raise InvalidConfigError(f"percentile must lie in (0, 100), got {percentile}")
    if sample_size < 2:
        raise InvalidConfigError("sample_size must be at least 2")
    n = source.n
    if n < 2:
        raise DegenerateDataError("need at least two points to estimate dc")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(n, size=min(sample_size, n), replace=False))
    P = source.pairwise(idx)
    iu = np.triu_indices(idx.shape[0], k=1)
    dists = P[iu]
    if not np.any(dists > 0):
        raise DegenerateDataError("all sampled pairwise distances are zero")
    dc = float(np.percentile(dists, percentile))
    if not dc > 0:
        raise DegenerateDataError(
            f"percentile {percentile} of sampled distances is zero; pass dc explicitly"
        )
    return dc
