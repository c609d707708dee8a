"""Banded matrix storage and band-limited kernels.

Storage is diagonal-major. ``data[k, i]`` holds ``X[i, i + k - beta]``, so
every diagonal is one contiguous row of ``data`` indexed by the row of the
entry. General matrices keep all ``2*beta + 1`` diagonals; symmetric
matrices keep only the ``beta + 1`` diagonals of the lower triangle
(offsets ``-beta .. 0``). Positions that fall outside the matrix are kept
at zero, which lets the kernels work on whole diagonals without masking.

Symmetric means ``X.T == X``; for complex data this is complex symmetric,
not Hermitian.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ShapeMismatchError

# Wide operands are multiplied through BLAS instead of diagonal sweeps.
# Ratio of per-element cost of a numpy sweep to a BLAS flop, measured on
# a single core.
_DENSE_CROSSOVER = 150.0
_DENSE_MAX_ORDER = 4000


def _valid_rows(n, d):
    """Row range ``[lo, hi)`` on which offset ``d`` addresses the matrix."""
    return max(0, -d), min(n, n - d)


class BandedMatrix:
    """Square banded matrix, real or complex.

    Parameters
    ----------
    data : ndarray
        Diagonal-major band array, shape ``(beta + 1, n)`` when
        ``symmetric`` else ``(2 * beta + 1, n)``.
    symmetric : bool
        Whether only the lower triangle is stored.
    """

    __slots__ = ("data", "n", "beta", "symmetric")

    def __init__(self, data, symmetric=False):
        data = np.asarray(data)
        if data.ndim != 2:
            raise ValueError("band data must be two-dimensional")
        rows, n = data.shape
        if symmetric:
            beta = rows - 1
        else:
            if rows % 2 != 1:
                raise ValueError("general band data needs an odd number of diagonals")
            beta = (rows - 1) // 2
        if n and beta >= n:
            raise ValueError(f"bandwidth {beta} must be smaller than the order {n}")
        self.data = data
        self.n = n
        self.beta = beta
        self.symmetric = bool(symmetric)

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def zeros(cls, n, beta=0, symmetric=True, dtype=float):
        rows = beta + 1 if symmetric else 2 * beta + 1
        return cls(np.zeros((rows, n), dtype=dtype), symmetric=symmetric)

    @classmethod
    def identity(cls, n, scale=1.0):
        data = np.full((1, n), scale)
        return cls(data, symmetric=True)

    @classmethod
    def from_diagonals(cls, n, diagonals, symmetric=False, dtype=None):
        """Build from ``{offset: values}``.

        ``values`` is a scalar or an array of length ``n - |offset|``. With
        ``symmetric=True`` only offsets ``<= 0`` may be given.
        """
        if not diagonals:
            return cls.zeros(n, 0, symmetric=symmetric, dtype=dtype or float)
        beta = max(abs(d) for d in diagonals)
        if dtype is None:
            dtype = np.result_type(*[np.asarray(v).dtype for v in diagonals.values()], float)
        out = cls.zeros(n, beta, symmetric=symmetric, dtype=dtype)
        for d, vals in diagonals.items():
            if symmetric and d > 0:
                raise ValueError("symmetric storage takes offsets <= 0 only")
            lo, hi = _valid_rows(n, d)
            out.data[d + beta, lo:hi] = vals
        return out

    @classmethod
    def from_dense(cls, X, beta=None, symmetric=None, tol=0.0):
        """Extract the band of a dense array.

        ``beta`` defaults to the outermost diagonal holding an entry with
        magnitude above ``tol``; ``symmetric`` defaults to an exact
        symmetry test.
        """
        X = np.asarray(X)
        n = X.shape[0]
        if X.shape != (n, n):
            raise ShapeMismatchError("matrix must be square")
        if symmetric is None:
            symmetric = bool(np.array_equal(X, X.T))
        if beta is None:
            rows, cols = np.nonzero(np.abs(X) > tol)
            beta = int(np.max(np.abs(rows - cols))) if rows.size else 0
        beta = min(beta, max(n - 1, 0))
        out = cls.zeros(n, beta, symmetric=symmetric, dtype=np.result_type(X.dtype, float))
        top = 0 if symmetric else beta
        for d in range(-beta, top + 1):
            lo, hi = _valid_rows(n, d)
            out.data[d + beta, lo:hi] = np.diagonal(X, offset=d)
        return out

    # ------------------------------------------------------------------
    # basic queries

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def scalar_kind(self):
        return "complex" if np.iscomplexobj(self.data) else "real"

    @property
    def shape(self):
        return (self.n, self.n)

    @property
    def nbytes(self):
        return int(self.stored_entries * self.data.itemsize)

    @property
    def stored_entries(self):
        """Number of in-matrix positions held by the storage."""
        top = 0 if self.symmetric else self.beta
        return sum(self.n - abs(d) for d in range(-self.beta, top + 1))

    def __repr__(self):
        kind = "symmetric" if self.symmetric else "general"
        return f"BandedMatrix(n={self.n}, beta={self.beta}, {kind}, {self.dtype})"

    def entry(self, i, j):
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"index ({i}, {j}) out of range for order {self.n}")
        if self.symmetric and j > i:
            i, j = j, i
        d = j - i
        if abs(d) > self.beta:
            return self.data.dtype.type(0)
        return self.data[d + self.beta, i]

    def diagonal(self, d=0):
        """Values on diagonal ``d`` (``X[i, i + d]``) in row order."""
        if abs(d) > self.beta:
            return np.zeros(self.n - abs(d), dtype=self.dtype)
        if self.symmetric and d > 0:
            d = -d
            lo, hi = _valid_rows(self.n, d)
            return self.data[d + self.beta, lo:hi].copy()
        lo, hi = _valid_rows(self.n, d)
        return self.data[d + self.beta, lo:hi].copy()

    def full_data(self):
        """General ``(2*beta + 1, n)`` band array (a copy for symmetric storage)."""
        if not self.symmetric:
            return self.data
        b, n = self.beta, self.n
        full = np.zeros((2 * b + 1, n), dtype=self.dtype)
        full[: b + 1] = self.data
        for d in range(1, b + 1):
            full[b + d, : n - d] = self.data[b - d, d:]
        return full

    def as_general(self):
        if not self.symmetric:
            return self
        return BandedMatrix(self.full_data(), symmetric=False)

    def as_symmetric(self, check=True, tol=0.0):
        """Lower-triangle storage; optionally verifies symmetry."""
        if self.symmetric:
            return self
        if check:
            gap = np.max(np.abs(self.data - self.transpose().data), initial=0.0)
            scale = np.max(np.abs(self.data), initial=0.0)
            if gap > tol * max(scale, 1.0):
                raise ValueError(f"matrix is not symmetric (max asymmetry {gap:.3e})")
        return BandedMatrix(self.data[: self.beta + 1].copy(), symmetric=True)

    def transpose(self):
        if self.symmetric:
            return self
        b, n = self.beta, self.n
        out = np.zeros_like(self.data)
        out[b] = self.data[b]
        for d in range(1, b + 1):
            out[b + d, : n - d] = self.data[b - d, d:]
            out[b - d, d:] = self.data[b + d, : n - d]
        return BandedMatrix(out, symmetric=False)

    @property
    def T(self):
        return self.transpose()

    def to_dense(self):
        X = np.zeros((self.n, self.n), dtype=self.dtype)
        b = self.beta
        rng = np.arange(self.n)
        top = 0 if self.symmetric else b
        for d in range(-b, top + 1):
            lo, hi = _valid_rows(self.n, d)
            X[rng[lo:hi], rng[lo:hi] + d] = self.data[d + b, lo:hi]
            if self.symmetric and d < 0:
                X[rng[lo:hi] + d, rng[lo:hi]] = self.data[d + b, lo:hi]
        return X

    @property
    def real(self):
        return BandedMatrix(np.ascontiguousarray(self.data.real), symmetric=self.symmetric)

    def astype(self, dtype):
        return BandedMatrix(self.data.astype(dtype), symmetric=self.symmetric)

    def copy(self):
        return BandedMatrix(self.data.copy(), symmetric=self.symmetric)

    # ------------------------------------------------------------------
    # bandwidth management

    def outer_nonzero(self):
        """Offset of the outermost diagonal holding a nonzero entry."""
        b = self.beta
        nz = np.any(self.data != 0, axis=1)
        if self.symmetric:
            idx = np.flatnonzero(nz)
            return int(b - idx[0]) if idx.size else 0
        idx = np.flatnonzero(nz)
        if not idx.size:
            return 0
        return int(max(b - idx[0], idx[-1] - b))

    def with_beta(self, beta):
        """Same matrix in storage of bandwidth ``beta`` (drops outer diagonals)."""
        beta = min(beta, max(self.n - 1, 0))
        b = self.beta
        if beta == b:
            return self
        if self.symmetric:
            out = np.zeros((beta + 1, self.n), dtype=self.dtype)
            k = min(b, beta)
            out[beta - k :] = self.data[b - k :]
        else:
            out = np.zeros((2 * beta + 1, self.n), dtype=self.dtype)
            k = min(b, beta)
            out[beta - k : beta + k + 1] = self.data[b - k : b + k + 1]
        return BandedMatrix(out, symmetric=self.symmetric)

    def trim(self):
        """Shrink storage to the outermost nonzero diagonal."""
        return self.with_beta(self.outer_nonzero())

    # ------------------------------------------------------------------
    # products with vectors

    def matvec(self, v):
        """``X @ v`` for a vector or an ``(n, m)`` block of vectors."""
        v = np.asarray(v)
        if v.shape[0] != self.n:
            raise ShapeMismatchError(f"vector length {v.shape[0]} != order {self.n}")
        full = self.full_data()
        b, n = self.beta, self.n
        dtype = np.result_type(full.dtype, v.dtype)
        out = np.zeros(v.shape, dtype=dtype)
        if v.ndim == 1:
            for d in range(-b, b + 1):
                lo, hi = _valid_rows(n, d)
                out[lo:hi] += full[d + b, lo:hi] * v[lo + d : hi + d]
        else:
            for d in range(-b, b + 1):
                lo, hi = _valid_rows(n, d)
                out[lo:hi] += full[d + b, lo:hi, None] * v[lo + d : hi + d]
        return out

    # ------------------------------------------------------------------
    # operators

    def __add__(self, other):
        if not isinstance(other, BandedMatrix):
            return NotImplemented
        return band_add(self, other, 1.0)

    def __sub__(self, other):
        if not isinstance(other, BandedMatrix):
            return NotImplemented
        return band_add(self, other, -1.0)

    def __mul__(self, alpha):
        if isinstance(alpha, BandedMatrix) or np.ndim(alpha) != 0:
            return NotImplemented
        return BandedMatrix(self.data * alpha, symmetric=self.symmetric)

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        return self * (1.0 / alpha)

    def __neg__(self):
        return BandedMatrix(-self.data, symmetric=self.symmetric)

    def __matmul__(self, other):
        if isinstance(other, BandedMatrix):
            return band_matmul(self, other)
        return self.matvec(other)


def _check_order(X, Y):
    if X.n != Y.n:
        raise ShapeMismatchError(f"order mismatch: {X.n} vs {Y.n}")


def band_add(X, Y, alpha=1.0):
    """Return ``X + alpha * Y`` with bandwidth ``max(beta_X, beta_Y)``."""
    _check_order(X, Y)
    beta = max(X.beta, Y.beta)
    dtype = np.result_type(X.dtype, Y.dtype, np.asarray(alpha).dtype)
    if X.symmetric and Y.symmetric:
        out = np.zeros((beta + 1, X.n), dtype=dtype)
        out[beta - X.beta :] += X.data
        out[beta - Y.beta :] += alpha * Y.data
        return BandedMatrix(out, symmetric=True)
    out = np.zeros((2 * beta + 1, X.n), dtype=dtype)
    out[beta - X.beta : beta + X.beta + 1] += X.full_data()
    out[beta - Y.beta : beta + Y.beta + 1] += alpha * Y.full_data()
    return BandedMatrix(out, symmetric=False)


def _use_dense(n, bx, by):
    sweep = (2 * bx + 1) * (2 * by + 1) * n
    return sweep * _DENSE_CROSSOVER > 2.0 * n**3 and n <= _DENSE_MAX_ORDER


def band_matmul(X, Y, symmetric_result=False):
    """Product ``X @ Y`` with bandwidth ``beta_X + beta_Y`` (capped at ``n - 1``).

    With ``symmetric_result=True`` the caller asserts that the product is
    symmetric; only its lower triangle is computed and stored.
    """
    _check_order(X, Y)
    n, bx, by = X.n, X.beta, Y.beta
    bz = bx + by
    bz_cap = min(bz, max(n - 1, 0))
    dtype = np.result_type(X.dtype, Y.dtype)
    if _use_dense(n, bx, by):
        Z = X.to_dense() @ Y.to_dense()
        return BandedMatrix.from_dense(Z, beta=bz_cap, symmetric=symmetric_result)
    Xf = X.full_data()
    Yf = Y.full_data()
    Ypad = np.zeros((2 * by + 1, n + 2 * bx), dtype=Yf.dtype)
    Ypad[:, bx : bx + n] = Yf
    if symmetric_result:
        Z = np.zeros((bz + 1, n), dtype=dtype)
        for d1 in range(-bx, bx + 1):
            top = min(by, -d1)
            if top < -by:
                continue
            rows = top + by + 1
            ysh = Ypad[:rows, bx + d1 : bx + d1 + n]
            Z[d1 - by + bz : d1 + top + bz + 1] += Xf[d1 + bx] * ysh
        out = BandedMatrix(Z, symmetric=True)
    else:
        Z = np.zeros((2 * bz + 1, n), dtype=dtype)
        for d1 in range(-bx, bx + 1):
            ysh = Ypad[:, bx + d1 : bx + d1 + n]
            Z[d1 - by + bz : d1 + by + bz + 1] += Xf[d1 + bx] * ysh
        out = BandedMatrix(Z, symmetric=False)
    return out.with_beta(bz_cap)


def frob_inner(X, Y):
    """``trace(Y^T X)`` summed over the overlapping bands only."""
    _check_order(X, Y)
    b = min(X.beta, Y.beta)
    if X.symmetric and Y.symmetric:
        xs = X.data[X.beta - b :]
        ys = Y.data[Y.beta - b :]
        prod = xs * ys
        val = 2.0 * prod[:b].sum() + prod[b].sum()
    else:
        xf = X.full_data()[X.beta - b : X.beta + b + 1]
        yf = Y.full_data()[Y.beta - b : Y.beta + b + 1]
        val = (xf * yf).sum()
    if np.iscomplexobj(val):
        return complex(val)
    return float(val)


def frob_norm(X):
    if np.iscomplexobj(X.data):
        return float(np.sqrt(frob_inner(X.real, X.real) + frob_inner(
            BandedMatrix(np.ascontiguousarray(X.data.imag), X.symmetric),
            BandedMatrix(np.ascontiguousarray(X.data.imag), X.symmetric))))
    return float(np.sqrt(max(frob_inner(X, X), 0.0)))


def truncate_small(X, eps):
    """Zero entries with ``|x| < eps`` and shrink to the outermost nonzero diagonal."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    data = X.data.copy()
    if eps > 0:
        data[np.abs(data) < eps] = 0
    return BandedMatrix(data, symmetric=X.symmetric).trim()


def sym_part_lower(S):
    """Lower storage of ``S + S^T`` for a general banded ``S``."""
    if S.symmetric:
        return S * 2.0
    b, n = S.beta, S.n
    out = S.data[: b + 1].copy()
    out[b] *= 2.0
    for r in range(1, b + 1):
        # (S^T)[i, i - r] = S[i - r, i]
        out[b - r, r:] += S.data[b + r, : n - r]
    return BandedMatrix(out, symmetric=True)
