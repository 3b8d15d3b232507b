"""External clustering agreement: NMI and ARI."""

import numpy as np

from ._errors import InvalidInputError


def _contingency(a, b):
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape != b.shape:
        raise InvalidInputError(f"label vectors differ in length: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] == 0:
        raise InvalidInputError("label vectors are empty")
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    table = np.zeros((ia.max() + 1, ib.max() + 1), dtype=np.int64)
    np.add.at(table, (ia, ib), 1)
    return table


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log(p)))


def nmi(a, b):
    """Normalized mutual information, ``I(A;B) / sqrt(H(A) H(B))``, natural log.

    Two single-cluster labelings score 1; if only one side is a single
    cluster the score is 0.
    """
    table = _contingency(a, b)
    n = table.sum()
    ha = _entropy(table.sum(axis=1), n)
    hb = _entropy(table.sum(axis=0), n)
    if ha == 0 and hb == 0:
        return 1.0
    if ha == 0 or hb == 0:
        return 0.0
    pa = table.sum(axis=1, keepdims=True) / n
    pb = table.sum(axis=0, keepdims=True) / n
    nz = table > 0
    pab = table / n
    mi = float(np.sum(pab[nz] * np.log(pab[nz] / (pa @ pb)[nz])))
    return float(min(max(mi / np.sqrt(ha * hb), 0.0), 1.0))


def _pairs(x):
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1) / 2


def ari(a, b):
    """Adjusted Rand index (Hubert and Arabie)."""
    table = _contingency(a, b)
    n = table.sum()
    if n < 2:
        raise InvalidInputError("ARI needs at least two points")
    index = _pairs(table).sum()
    sa = _pairs(table.sum(axis=1)).sum()
    sb = _pairs(table.sum(axis=0)).sum()
    expected = sa * sb / _pairs(n)
    mean = (sa + sb) / 2
    if mean == expected:
        return 1.0
    return float((index - expected) / (mean - expected))
