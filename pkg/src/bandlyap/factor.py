"""Banded factorizations: real Cholesky and unpivoted complex-symmetric LDL^T.

Factors are kept in LAPACK lower band form, ``ab[s, j] = L[j + s, j]``,
which is the natural layout for column-oriented substitutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_solve_banded, cholesky_banded

from .banded import BandedMatrix
from .exceptions import NotSPDError, ShapeMismatchError, SingularPivotError

PIVOT_GUARD = 1e-14


def lower_to_lapack(M):
    """LAPACK lower band form of a symmetric ``BandedMatrix``."""
    if not M.symmetric:
        M = M.as_symmetric()
    b, n = M.beta, M.n
    ab = np.zeros((b + 1, n), dtype=M.dtype)
    for s in range(b + 1):
        ab[s, : n - s] = M.data[b - s, s:]
    return ab


def lapack_to_banded(ab):
    """Lower-triangular ``BandedMatrix`` (general storage) from LAPACK band form."""
    b = ab.shape[0] - 1
    n = ab.shape[1]
    data = np.zeros((2 * b + 1, n), dtype=ab.dtype)
    for s in range(b + 1):
        data[b - s, s:] = ab[s, : n - s]
    return BandedMatrix(data, symmetric=False)


@dataclass(frozen=True)
class CholFactor:
    """Banded Cholesky factor ``A = L L^T`` in LAPACK lower band form."""

    ab: np.ndarray

    @property
    def n(self):
        return self.ab.shape[1]

    @property
    def beta(self):
        return self.ab.shape[0] - 1

    @property
    def L(self):
        return lapack_to_banded(self.ab)


@dataclass(frozen=True)
class LdltFactor:
    """Unit lower band factor ``ab`` (row 0 is all ones) and pivots ``d``."""

    ab: np.ndarray
    d: np.ndarray

    @property
    def n(self):
        return self.ab.shape[1]

    @property
    def beta(self):
        return self.ab.shape[0] - 1

    @property
    def L(self):
        return lapack_to_banded(self.ab)

    @property
    def Ddiag(self):
        return self.d

    def reconstruct(self):
        """Dense ``L diag(d) L^T``; intended for checks on small orders."""
        L = self.L.to_dense()
        return (L * self.d) @ L.T


def banded_cholesky(A):
    """Cholesky factor of a symmetric positive definite banded matrix.

    Raises
    ------
    NotSPDError
        If a non-positive pivot is met.
    """
    ab = lower_to_lapack(A)
    if np.iscomplexobj(ab):
        raise NotSPDError("Cholesky needs a real matrix")
    try:
        L = cholesky_banded(ab, lower=True)
    except LinAlgError as exc:
        raise NotSPDError(f"matrix is not positive definite: {exc}") from None
    return CholFactor(L)


def chol_solve(F, b):
    """Solve ``A x = b`` with a factor from :func:`banded_cholesky`."""
    b = np.asarray(b)
    if b.shape[0] != F.n:
        raise ShapeMismatchError(f"right-hand side length {b.shape[0]} != order {F.n}")
    return cho_solve_banded((F.ab, True), b)


def complex_ldlt(M):
    """Unpivoted ``M = L diag(d) L^T`` for a (complex) symmetric banded ``M``.

    Right-looking elimination on the lower band; the factor keeps the
    bandwidth of ``M``.

    Raises
    ------
    SingularPivotError
        If a pivot modulus falls below ``1e-14 * max|M|``.
    """
    ab = lower_to_lapack(M).astype(np.result_type(M.dtype, complex), copy=True)
    b, n = M.beta, M.n
    guard = PIVOT_GUARD * max(np.max(np.abs(ab), initial=0.0), np.finfo(float).tiny)
    d = np.empty(n, dtype=ab.dtype)
    # (t, s) pairs with t >= s index the trailing update L[j+t] L[j+s]
    tt, ss = np.tril_indices(b)
    for j in range(n):
        dj = ab[0, j]
        if abs(dj) < guard:
            raise SingularPivotError(f"pivot {j} has modulus {abs(dj):.3e} below guard {guard:.3e}")
        d[j] = dj
        if b == 0:
            continue
        m = min(b, n - 1 - j)
        col = ab[1 : m + 1, j] / dj
        ab[1 : m + 1, j] = col
        if m == b:
            ab[tt - ss, j + 1 + ss] -= dj * col[tt] * col[ss]
        else:
            t2, s2 = np.tril_indices(m)
            ab[t2 - s2, j + 1 + s2] -= dj * col[t2] * col[s2]
    ab[0] = 1.0
    return LdltFactor(ab, d)


def partial_inverse_column(F, q, p_hat):
    """Entries ``q..p_hat`` (0-based, inclusive) of ``M^{-1} e_q``.

    Forward and backward substitutions are truncated at ``p_hat``, so the
    result is exact only when ``p_hat = n - 1``.
    """
    n, b = F.n, F.beta
    if not (0 <= q <= p_hat < n):
        raise IndexError(f"need 0 <= q <= p_hat < n, got q={q}, p_hat={p_hat}, n={n}")
    ab, d = F.ab, F.d
    length = p_hat - q + 1
    y = np.zeros(length, dtype=ab.dtype)
    y[0] = 1.0
    for k in range(1, length):
        row = q + k
        lo = max(0, k - b)
        # L[row, q+j] = ab[row - q - j, q + j]
        js = np.arange(lo, k)
        y[k] = -np.dot(ab[k - js, q + js], y[lo:k])
    z = y / d[q : p_hat + 1]
    s = np.zeros(length, dtype=ab.dtype)
    for k in range(length - 1, -1, -1):
        hi = min(length - 1, k + b)
        js = np.arange(k + 1, hi + 1)
        s[k] = z[k] - np.dot(ab[js - k, q + k], s[k + 1 : hi + 1])
    return s


def inverse_lower_band(F, pbar):
    """Truncated lower band of ``M^{-1}`` for all columns at once.

    Returns ``S`` of shape ``(pbar + 1, n)`` with ``S[r, q]`` equal to the
    result of :func:`partial_inverse_column` at ``q`` with
    ``p_hat = min(n - 1, q + pbar)``, entry ``q + r``.
    """
    n, b = F.n, F.beta
    pbar = int(min(pbar, n - 1))
    width = n + pbar + b + 1
    Lc = np.zeros((b + 1, width), dtype=F.ab.dtype)
    Lc[:, :n] = F.ab
    dp = np.ones(width, dtype=F.d.dtype)
    dp[:n] = F.d
    q = np.arange(n)
    y = np.zeros((pbar + 1, n), dtype=Lc.dtype)
    y[0] = 1.0
    for r in range(1, pbar + 1):
        acc = np.zeros(n, dtype=Lc.dtype)
        for s in range(1, min(b, r) + 1):
            acc -= Lc[s, q + r - s] * y[r - s]
        y[r] = acc
    for r in range(pbar + 1):
        y[r] /= dp[q + r]
    for r in range(pbar, -1, -1):
        for s in range(1, min(b, pbar - r) + 1):
            y[r] -= Lc[s, q + r] * y[r + s]
    for r in range(1, pbar + 1):
        y[r, n - r :] = 0.0
    return y
