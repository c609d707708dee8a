"""Matrix-oriented conjugate gradients in banded arithmetic.

The Lyapunov operator ``X -> AX + XA`` is SPD on symmetric matrices when
``A`` is SPD, so CG runs directly on banded iterates. Every iterate keeps
the bandwidth envelope of the Krylov polynomial in ``A`` applied to ``D``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .banded import BandedMatrix, band_add, band_matmul, frob_inner, sym_part_lower
from .exceptions import BreakdownError, NotSPDError, ShapeMismatchError

RESIDUAL_REFRESH = 50
BREAKDOWN_GUARD = 1e-300


@dataclass
class CgReport:
    iterations: int
    final_relres: float
    beta_X: int
    residual_history: list = field(default_factory=list)
    converged: bool = True
    beta_history: list = field(default_factory=list)

    def to_csv(self):
        lines = ["iter,relres,beta"]
        betas = self.beta_history or [""] * len(self.residual_history)
        lines += [f"{k},{r:.6e},{b}" for (k, r), b in zip(self.residual_history, betas)]
        return "\n".join(lines) + "\n"


def _lyap_apply(A, X):
    """Lower storage of ``AX + XA`` for symmetric ``X``."""
    return sym_part_lower(band_matmul(A, X))


def _sylv_apply(A, B, X):
    return band_add(band_matmul(A, X), band_matmul(X, B))


def _check(A, D):
    if A.n != D.n:
        raise ShapeMismatchError(f"order mismatch: {A.n} vs {D.n}")


def _run_cg(apply, D, X, eps_res, m_max, callback, symmetric):
    AX = apply(X)
    R = band_add(D, AX, -1.0)
    rr = frob_inner(R, R)
    r0 = math.sqrt(rr)
    history = [(0, 1.0 if r0 > 0 else 0.0)]
    betas = [X.outer_nonzero()]
    if r0 == 0.0:
        return X, CgReport(0, 0.0, betas[0], history, True, betas)
    P = R
    relres = 1.0
    converged = False
    k = 0
    for k in range(1, m_max + 1):
        W = apply(P)
        pw = frob_inner(P, W)
        if abs(pw) < BREAKDOWN_GUARD:
            raise BreakdownError(f"<P, W> = {pw:.3e} at iteration {k}")
        if pw < 0.0:
            raise NotSPDError(f"<P, W> = {pw:.3e} < 0 at iteration {k}: operator not SPD")
        alpha = rr / pw
        X = band_add(X, P, alpha)
        R = band_add(R, W, -alpha)
        if k % RESIDUAL_REFRESH == 0:
            R = band_add(D, apply(X), -1.0)
        rr_new = frob_inner(R, R)
        relres = math.sqrt(max(rr_new, 0.0)) / r0
        history.append((k, relres))
        betas.append(X.outer_nonzero())
        if callback is not None:
            callback(k, X, R, P, W)
        if relres < eps_res:
            converged = True
            break
        P = band_add(R, P, rr_new / rr)
        rr = rr_new
    return X, CgReport(k, relres, betas[-1], history, converged, betas)


def lyap_cg(A, D, X0=None, eps_res=1e-3, m_max=2000, callback=None):
    """Solve ``AX + XA = D`` by CG on symmetric banded iterates.

    Parameters
    ----------
    A : BandedMatrix
        Symmetric positive definite coefficient.
    D : BandedMatrix
        Symmetric right-hand side.
    X0 : BandedMatrix, optional
        Symmetric starting guess, zero by default.
    eps_res : float
        Stop when ``||R_k||_F / ||R_0||_F < eps_res``.
    m_max : int
        Iteration cap; the report is flagged unconverged when reached.
    callback : callable, optional
        Called as ``callback(k, X, R, P_prev, W)`` after each update.

    Returns
    -------
    X : BandedMatrix
        Symmetric banded approximate solution.
    report : CgReport
    """
    _check(A, D)
    A = A.as_symmetric()
    D = D.as_symmetric()
    if X0 is None:
        X0 = BandedMatrix.zeros(A.n, 0, symmetric=True, dtype=np.result_type(A.dtype, D.dtype))
    else:
        _check(A, X0)
        X0 = X0.as_symmetric()
    return _run_cg(lambda X: _lyap_apply(A, X), D, X0, eps_res, m_max, callback, True)


def sylv_cg(A, B, D, X0=None, eps_res=1e-3, m_max=2000, callback=None):
    """Solve ``AX + XB = D`` by CG on general banded iterates."""
    _check(A, D)
    _check(B, D)
    A = A.as_general()
    B = B.as_general()
    D = D.as_general()
    if X0 is None:
        X0 = BandedMatrix.zeros(A.n, 0, symmetric=False, dtype=np.result_type(A.dtype, D.dtype))
    else:
        _check(A, X0)
        X0 = X0.as_general()
    return _run_cg(lambda X: _sylv_apply(A, B, X), D, X0, eps_res, m_max, callback, False)
