"""Extremal eigenvalue estimates and the small dense symmetric eigensolver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .factor import banded_cholesky, chol_solve


@dataclass(frozen=True)
class EigPair:
    lambda_min: float
    lambda_max: float
    converged: bool = True

    @property
    def kappa(self):
        return self.lambda_max / self.lambda_min


def sym_eig_dense(M):
    """Eigenpairs of a small dense symmetric matrix, eigenvalues ascending."""
    M = np.asarray(M, dtype=float)
    M = 0.5 * (M + M.T)
    return np.linalg.eigh(M)


def lanczos_largest(apply, n, tol=1e-4, maxit=300, seed=0):
    """Largest eigenvalue of a symmetric operator by Lanczos.

    Full reorthogonalization keeps the basis clean. Stops once the Ritz
    residual ``|beta_k * y_k|`` drops below ``tol * theta``.

    Returns
    -------
    theta : float
        Largest Ritz value.
    converged : bool
    """
    rng = np.random.default_rng(seed)
    maxit = max(1, min(maxit, n))
    V = np.zeros((n, maxit + 1))
    v = rng.standard_normal(n)
    V[:, 0] = v / np.linalg.norm(v)
    alphas, betas = [], []
    theta = 0.0
    for k in range(maxit):
        w = apply(V[:, k])
        alpha = V[:, k] @ w
        w = w - alpha * V[:, k]
        if k:
            w -= betas[-1] * V[:, k - 1]
        for _ in range(2):
            w -= V[:, : k + 1] @ (V[:, : k + 1].T @ w)
        beta = np.linalg.norm(w)
        alphas.append(alpha)
        T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        vals, vecs = np.linalg.eigh(T)
        theta = vals[-1]
        resid = abs(beta * vecs[-1, -1])
        if resid <= tol * abs(theta) or beta <= 1e-14 * max(abs(theta), 1.0):
            return float(theta), True
        betas.append(beta)
        V[:, k + 1] = w / beta
    return float(theta), maxit >= n


def lanczos_extreme_eigs(A, tol=1e-4, maxit=300, seed=0, chol=None):
    """Estimate ``lambda_min`` and ``lambda_max`` of an SPD banded matrix.

    ``lambda_max`` comes from Lanczos on ``A``; ``lambda_min`` from Lanczos
    on ``A^{-1}`` applied through a banded Cholesky factor.

    Raises
    ------
    NotSPDError
        If the Cholesky factorization fails.
    """
    if maxit < 2:
        raise ValueError("maxit must be at least 2")
    n = A.n
    if chol is None:
        chol = banded_cholesky(A)
    lmax, ok_max = lanczos_largest(A.matvec, n, tol, maxit, seed)
    inv_max, ok_min = lanczos_largest(lambda v: chol_solve(chol, v), n, tol, maxit, seed + 1)
    lmin = 1.0 / inv_max
    lmin = min(lmin, lmax)
    return EigPair(float(lmin), float(lmax), bool(ok_max and ok_min))
