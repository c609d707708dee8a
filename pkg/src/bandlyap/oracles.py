"""Dense spectral reference solvers for small problems."""

import numpy as np

from .exceptions import NotSPDError, ShapeMismatchError

MAX_DENSE_ORDER = 2000


def _eig(A):
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ShapeMismatchError("matrix must be square")
    if n > MAX_DENSE_ORDER:
        raise ValueError(f"dense oracle limited to n <= {MAX_DENSE_ORDER}")
    return np.linalg.eigh(0.5 * (A + A.T))


def _divide(C, lam_row, lam_col):
    denom = lam_row[:, None] + lam_col[None, :]
    if np.any(denom <= 0.0):
        raise NotSPDError("eigenvalue sums must be positive")
    return C / denom, denom


def dense_lyap_oracle(A, D):
    """Solve ``AX + XA = D`` through the eigendecomposition of ``A``."""
    lam, Q = _eig(A)
    Y, _ = _divide(Q.T @ np.asarray(D) @ Q, lam, lam)
    return Q @ Y @ Q.T


def dense_finite_horizon_oracle(A, D, tau):
    """``X(tau) = int_0^tau exp(-tA) D exp(-tA) dt`` in closed form."""
    lam, Q = _eig(A)
    Y, denom = _divide(Q.T @ np.asarray(D) @ Q, lam, lam)
    Y = Y * -np.expm1(-tau * denom)
    return Q @ Y @ Q.T


def dense_sylvester_oracle(A, B, D):
    """Solve ``AX + XB = D`` for symmetric ``A`` and ``B``."""
    la, Qa = _eig(A)
    lb, Qb = _eig(B)
    Y, _ = _divide(Qa.T @ np.asarray(D) @ Qb, la, lb)
    return Qa @ Y @ Qb.T


def dense_expm_sym(A, t=1.0):
    """``exp(-tA)`` for symmetric ``A``."""
    lam, Q = _eig(A)
    return (Q * np.exp(-t * lam)) @ Q.T


def lyap_residual(A, X, D):
    """Relative Frobenius residual of ``AX + XA = D``."""
    R = A @ X + X @ A - D
    return np.linalg.norm(R) / max(np.linalg.norm(D), np.finfo(float).tiny)
