"""On-disk formats: FDPM binary matrices, CSV matrices and label files.

FDPM layout (little-endian): the 4 magic bytes ``FDPM``, a ``u16`` version,
``u64`` rows, ``u64`` columns, then rows*columns ``float64`` values in
row-major order.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from ._errors import InvalidConfigError, InvalidInputError

MAGIC = b"FDPM"
VERSION = 1
_HEADER = struct.Struct("<4sHQQ")
CSV_MAX_VALUES = 10**6


def write_fdpm(path, X):
    X = np.ascontiguousarray(X, dtype="<f8")
    if X.ndim != 2:
        raise InvalidInputError("FDPM stores 2-D matrices only")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, X.shape[0], X.shape[1]))
        fh.write(X.tobytes())


def read_fdpm_header(path):
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        raise InvalidInputError(f"{path}: truncated FDPM header")
    magic, version, n, d = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise InvalidInputError(f"{path}: not an FDPM file")
    if version != VERSION:
        raise InvalidInputError(f"{path}: unsupported FDPM version {version}")
    return n, d


def read_fdpm(path, mmap=False):
    """Load an FDPM file; ``mmap=True`` returns a read-only memory map."""
    n, d = read_fdpm_header(path)
    expected = _HEADER.size + 8 * n * d
    size = Path(path).stat().st_size
    if size != expected:
        raise InvalidInputError(f"{path}: expected {expected} bytes, found {size}")
    if mmap:
        return np.memmap(path, dtype="<f8", mode="r", offset=_HEADER.size, shape=(n, d))
    with open(path, "rb") as fh:
        fh.seek(_HEADER.size)
        return np.frombuffer(fh.read(), dtype="<f8").reshape(n, d).astype(np.float64)


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_csv_matrix(path):
    """Numeric CSV, one sample per row, with an optional header line."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows and not all(_is_number(v) for v in rows[0]):
        rows = rows[1:]
    if not rows:
        raise InvalidInputError(f"{path}: no data rows")
    if len(rows) * len(rows[0]) > CSV_MAX_VALUES:
        raise InvalidConfigError(
            f"{path}: CSV input is limited to {CSV_MAX_VALUES} values; convert to FDPM"
        )
    try:
        return np.array([[float(v) for v in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None


def read_matrix(path, mmap=False):
    """FDPM or CSV, chosen by the file's magic bytes."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return read_fdpm(path, mmap=mmap)
    return read_csv_matrix(path)


def write_labels(path, labels):
    labels = np.asarray(labels, dtype=np.int64)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for i, y in enumerate(labels):
            w.writerow((i, int(y)))


def read_labels(path):
    """Labels from ``index,label`` rows (or a single label column), sorted by index."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows and not all(_is_number(v) for v in rows[0]):
        rows = rows[1:]
    try:
        if rows and len(rows[0]) >= 2:
            pairs = sorted((int(r[0]), int(r[1])) for r in rows)
            return np.array([y for _, y in pairs], dtype=np.int64)
        return np.array([int(r[0]) for r in rows], dtype=np.int64)
    except (ValueError, IndexError) as exc:
        raise InvalidInputError(f"{path}: malformed labels file ({exc})") from None


def write_vectors(path, rho, mu, delta, gamma):
    """Dump the per-point vectors as ``index,rho,mu,delta,gamma`` with round-trip precision."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("index", "rho", "mu", "delta", "gamma"))
        for i in range(len(rho)):
            w.writerow((i, repr(float(rho[i])), int(mu[i]), repr(float(delta[i])), repr(float(gamma[i]))))
