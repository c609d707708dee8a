"""Coordinate text format for banded matrices and storage of low-rank factors.

A coordinate file starts with the header ``n nnz symmetric|general``
followed by ``nnz`` lines ``i j value`` with 1-based indices. Symmetric
files list the lower triangle only. Blank lines and lines starting with
``#`` or ``%`` are ignored.
"""

from __future__ import annotations

import numpy as np

from .banded import BandedMatrix
from .exceptions import ShapeMismatchError
from .lowrank import LowRankFactor, TwoSidedFactor

KINDS = ("symmetric", "general")


def _lines(path):
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if line and line[0] not in "#%":
                yield line


def read_coordinate(path):
    """Load a coordinate file; the bandwidth is inferred from the entries."""
    it = _lines(path)
    try:
        header = next(it).split()
    except StopIteration:
        raise ValueError(f"{path}: empty file") from None
    if len(header) != 3 or header[2] not in KINDS:
        raise ValueError(f"{path}: header must read 'n nnz symmetric|general'")
    n, nnz = int(header[0]), int(header[1])
    symmetric = header[2] == "symmetric"
    rows, cols, vals = [], [], []
    for line in it:
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"{path}: malformed entry line {line!r}")
        rows.append(int(parts[0]) - 1)
        cols.append(int(parts[1]) - 1)
        vals.append(complex(parts[2]) if "j" in parts[2] else float(parts[2]))
    if len(vals) != nnz:
        raise ValueError(f"{path}: header announces {nnz} entries, found {len(vals)}")
    rows = np.asarray(rows, dtype=int)
    cols = np.asarray(cols, dtype=int)
    vals = np.asarray(vals)
    if nnz and (rows.min() < 0 or cols.min() < 0 or rows.max() >= n or cols.max() >= n):
        raise ShapeMismatchError(f"{path}: index outside order {n}")
    if symmetric:
        swap = rows < cols
        rows[swap], cols[swap] = cols[swap], rows[swap]
    beta = int(np.abs(rows - cols).max()) if nnz else 0
    beta = min(beta, max(n - 1, 0))
    if symmetric:
        data = np.zeros((beta + 1, n), dtype=vals.dtype if nnz else float)
        data[beta - (rows - cols), rows] = vals
    else:
        data = np.zeros((2 * beta + 1, n), dtype=vals.dtype if nnz else float)
        data[cols - rows + beta, rows] = vals
    return BandedMatrix(data, symmetric=symmetric)


def _fmt(v):
    # shortest round-trip text for real and complex scalars
    if np.iscomplexobj(v):
        return repr(complex(v))
    return repr(float(v))


def write_coordinate(path, X, tol=0.0):
    """Write a banded matrix; entries with magnitude ``<= tol`` are skipped."""
    n, beta = X.n, X.beta
    lines = []
    offsets = range(-beta, 1) if X.symmetric else range(-beta, beta + 1)
    for k in offsets:
        d = X.diagonal(k)
        start_i = max(0, -k)
        for t in np.nonzero(np.abs(d) > tol)[0]:
            i = start_i + t
            lines.append(f"{i + 1} {i + k + 1} {_fmt(d[t])}")
    kind = "symmetric" if X.symmetric else "general"
    with open(path, "w") as fh:
        fh.write(f"{n} {len(lines)} {kind}\n")
        if lines:
            fh.write("\n".join(lines) + "\n")


def write_factor(path, F):
    """Save a low-rank factor as a ``.npz`` archive."""
    if isinstance(F, LowRankFactor):
        np.savez(path, S=F.S, sig=F.sig)
    else:
        np.savez(path, U=F.U, C=F.C, V=F.V)


def read_factor(path):
    with np.load(path) as z:
        if "S" in z:
            return LowRankFactor(z["S"], z["sig"])
        return TwoSidedFactor(z["U"], z["C"], z["V"])
