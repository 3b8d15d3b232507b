"""Wide distance blocks between a row window and the full dataset.

Every entry of a block depends only on the two points involved, never on
the window it was computed in. Dot products and squared norms are
accumulated one dimension at a time with plain elementwise arithmetic, so a
row comes out bit-for-bit the same whether it is computed in a window of 1
row or of ``n`` rows. BLAS ``gemm`` gives no such guarantee.
"""

from __future__ import annotations

import numpy as np

from ._errors import BlockRangeError, InvalidInputError
from .core import DistanceBlock


def _as_data(X):
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise InvalidInputError(f"expected a non-empty 2-D data matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("data matrix contains NaN or infinite values")
    return X


def _check_window(n, row_offset, m):
    if row_offset < 0 or m < 0 or row_offset + m > n:
        raise BlockRangeError(f"row window [{row_offset}, {row_offset + m}) outside [0, {n})")


def _dot_rows(P, XT):
    """``P @ X.T`` accumulated dimension by dimension (see module docstring)."""
    out = np.multiply.outer(P[:, 0], XT[0])
    if P.shape[1] > 1:
        tmp = np.empty_like(out)
        for k in range(1, P.shape[1]):
            np.multiply.outer(P[:, k], XT[k], out=tmp)
            out += tmp
    return out


def _sq_norms(X):
    acc = X[:, 0] * X[:, 0]
    for k in range(1, X.shape[1]):
        acc = acc + X[:, k] * X[:, k]
    return acc


def _zero_self(values, row_offset):
    m = values.shape[0]
    values[np.arange(m), row_offset + np.arange(m)] = 0.0


def _euclidean_rows(P, sq_p, XT, sq_x):
    D = _dot_rows(P, XT)
    D *= -2.0
    D += sq_p[:, None]
    D += sq_x[None, :]
    np.maximum(D, 0.0, out=D)
    np.sqrt(D, out=D)
    return D


def _cosine_rows(P, norm_p, XT, norm_x):
    D = _dot_rows(P, XT)
    D /= norm_p[:, None]
    D /= norm_x[None, :]
    np.subtract(1.0, D, out=D)
    np.clip(D, 0.0, 2.0, out=D)
    return D


def euclidean_block(X, row_offset, m):
    """Euclidean distances from rows ``[row_offset, row_offset + m)`` to all rows of ``X``.

    Uses the expanded form ``|p|^2 + |x|^2 - 2 p.x``, clamped at zero before
    the square root. Self-distances are written as exact zeros.
    """
    return EuclideanSource(X).block(row_offset, m)


def cosine_block(X, row_offset, m):
    """Cosine distances ``1 - p.x / (|p| |x|)``, clipped into ``[0, 2]``."""
    return CosineSource(X).block(row_offset, m)


def _check_norms(norms):
    zero = np.flatnonzero(norms == 0)
    if zero.shape[0]:
        raise InvalidInputError(f"row {int(zero[0])} has zero norm; cosine distance is undefined")


def precomputed_block(D, row_offset, m):
    """Rows ``[row_offset, row_offset + m)`` of a precomputed distance matrix, verbatim."""
    n = D.shape[0]
    _check_window(n, row_offset, m)
    return DistanceBlock(row_offset, np.array(D[row_offset:row_offset + m], dtype=np.float64))


def validate_precomputed(D, *, full_check_limit=2000, n_samples=10000, seed=0, atol=1e-12):
    """Check that ``D`` is a square, symmetric, non-negative matrix with zero diagonal.

    Matrices up to ``full_check_limit`` rows are checked entirely; larger ones
    row by row for the diagonal and by random sampling for symmetry.
    """
    if D.ndim != 2 or D.shape[0] != D.shape[1] or D.shape[0] < 1:
        raise InvalidInputError(f"precomputed distances must be a non-empty square matrix, got {D.shape}")
    n = D.shape[0]
    diag = np.asarray(D[np.arange(n), np.arange(n)])
    if np.any(diag != 0):
        raise InvalidInputError("precomputed distance matrix has a non-zero diagonal")
    if n <= full_check_limit:
        A = np.asarray(D, dtype=np.float64)
        if not np.all(np.isfinite(A)) or np.any(A < 0):
            raise InvalidInputError("precomputed distances must be finite and non-negative")
        if not np.allclose(A, A.T, rtol=0, atol=atol):
            raise InvalidInputError("precomputed distance matrix is not symmetric")
        return
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, n_samples)
    j = rng.integers(0, n, n_samples)
    a = np.asarray(D[i, j], dtype=np.float64)
    b = np.asarray(D[j, i], dtype=np.float64)
    if not (np.all(np.isfinite(a)) and np.all(a >= 0)):
        raise InvalidInputError("precomputed distances must be finite and non-negative")
    if np.any(np.abs(a - b) > atol):
        raise InvalidInputError("precomputed distance matrix is not symmetric")


class DistanceSource:
    """Something that serves wide distance blocks by row window."""

    metric = None

    @property
    def n(self):
        raise NotImplementedError

    def block(self, row_offset, m):
        raise NotImplementedError

    def rows(self, indices):
        """Distance rows for an arbitrary set of points, shape ``(len(indices), n)``."""
        raise NotImplementedError

    def pairwise(self, indices):
        """Pairwise distances among a subset of points."""
        raise NotImplementedError


class EuclideanSource(DistanceSource):
    metric = "euclidean"
    _rows_fn = staticmethod(_euclidean_rows)

    def __init__(self, X):
        self.X = _as_data(X)
        self._XT = np.ascontiguousarray(self.X.T)
        self._aux = self._prepare()

    def _prepare(self):
        return _sq_norms(self.X)

    @property
    def n(self):
        return self.X.shape[0]

    def block(self, row_offset, m):
        _check_window(self.n, row_offset, m)
        w = slice(row_offset, row_offset + m)
        D = self._rows_fn(self.X[w], self._aux[w], self._XT, self._aux)
        _zero_self(D, row_offset)
        return DistanceBlock(row_offset, D)

    def rows(self, indices):
        indices = np.asarray(indices, dtype=np.intp)
        D = self._rows_fn(self.X[indices], self._aux[indices], self._XT, self._aux)
        D[np.arange(indices.shape[0]), indices] = 0.0
        return D

    def pairwise(self, indices):
        sub = type(self)(self.X[np.asarray(indices, dtype=np.intp)])
        return sub.block(0, sub.n).values


class CosineSource(EuclideanSource):
    metric = "cosine"
    _rows_fn = staticmethod(_cosine_rows)

    def _prepare(self):
        norms = np.sqrt(_sq_norms(self.X))
        _check_norms(norms)
        return norms


class PrecomputedSource(DistanceSource):
    """Rows of an ``n x n`` distance store (ndarray or ``np.memmap``)."""

    metric = "precomputed"

    def __init__(self, D, validate=True):
        if validate:
            validate_precomputed(D)
        self.D = D

    @property
    def n(self):
        return self.D.shape[0]

    def block(self, row_offset, m):
        return precomputed_block(self.D, row_offset, m)

    def rows(self, indices):
        indices = np.asarray(indices, dtype=np.intp)
        return np.array(self.D[indices], dtype=np.float64)

    def pairwise(self, indices):
        indices = np.asarray(indices, dtype=np.intp)
        return np.array(self.D[np.ix_(indices, indices)], dtype=np.float64)


def make_source(X, metric="euclidean", validate=True):
    """Wrap an array as a :class:`DistanceSource` for ``metric``."""
    if isinstance(X, DistanceSource):
        return X
    if metric == "euclidean":
        return EuclideanSource(X)
    if metric == "cosine":
        return CosineSource(X)
    if metric == "precomputed":
        return PrecomputedSource(X, validate=validate)
    raise InvalidInputError(f"unknown metric {metric!r}")
