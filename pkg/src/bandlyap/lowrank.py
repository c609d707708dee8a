"""Low-rank approximation of ``exp(-tau A) X exp(-tau A)`` by inverse Krylov projection.

The basis spans ``{v, A^{-1} v, A^{-2} v, ...}``. A Galerkin condition on
the projected Lyapunov equation gives a small solve, and the residual norm
of the full splitting approximation is tracked through quantities of the
size of the basis, without forming any ``n x n`` matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .banded import band_add, band_matmul, frob_norm, sym_part_lower
from .eigen import sym_eig_dense
from .exceptions import BandlyapError, NotSPDError, ShapeMismatchError
from .factor import banded_cholesky, chol_solve

BREAKDOWN_TOL = 1e-14
DROP_TOL = 1e-12


@dataclass
class LowRankFactor:
    """Symmetric low-rank term ``S diag(sig) S^T``."""

    S: np.ndarray
    sig: np.ndarray

    @classmethod
    def empty(cls, n):
        return cls(np.zeros((n, 0)), np.zeros(0))

    @property
    def rank(self):
        return self.S.shape[1]

    @property
    def nbytes(self):
        return int(self.S.nbytes)

    def apply(self, v):
        return self.S @ (self.sig[:, None] * (self.S.T @ v)) if np.ndim(v) == 2 else (
            self.S @ (self.sig * (self.S.T @ v))
        )

    def entry(self, i, j):
        return float(np.sum(self.S[i] * self.sig * self.S[j]))

    def to_dense(self):
        return (self.S * self.sig) @ self.S.T


@dataclass
class TwoSidedFactor:
    """Low-rank term ``U diag(C) V^T``."""

    U: np.ndarray
    C: np.ndarray
    V: np.ndarray

    @property
    def rank(self):
        return self.C.size

    @property
    def nbytes(self):
        return int(self.U.nbytes + self.V.nbytes + self.C.nbytes)

    def apply(self, v):
        if np.ndim(v) == 2:
            return self.U @ (self.C[:, None] * (self.V.T @ v))
        return self.U @ (self.C * (self.V.T @ v))

    def entry(self, i, j):
        return float(np.sum(self.U[i] * self.C * self.V[j]))

    def to_dense(self):
        return (self.U * self.C) @ self.V.T


# ----------------------------------------------------------------------
# Krylov state


class KrylovState:
    """Orthonormal basis of ``K(A^{-1}, v)`` with running projections.

    The basis is kept one vector ahead of the projection order ``m`` so
    that the Arnoldi relation for step ``m`` is always available.

    Attributes
    ----------
    V : ndarray, shape (n, m + 1)
        Basis vectors; the last is zero after a breakdown.
    H : ndarray, shape (m + 1, m)
        Orthogonalization coefficients of ``A^{-1} V_m = V_{m+1} H``.
    K, Dm : ndarray
        ``V^T A V`` and ``V^T D V`` over all stored basis vectors.
    W_RB_W : ndarray
        ``V^T R_B V`` over all stored basis vectors, when ``R_B`` is given.
    """

    def __init__(self, A, D, v0, chol=None, RB=None, capacity=64):
        n = A.n
        if D.n != n or np.shape(v0) != (n,):
            raise ShapeMismatchError("A, D and v0 must share the order n")
        self.A = A
        self.D = D
        self.RB = RB
        self.chol = banded_cholesky(A) if chol is None else chol
        self.n = n
        self._V = np.zeros((n, capacity))
        self._AV = np.zeros((n, capacity))
        self._DV = np.zeros((n, capacity))
        self._RBV = np.zeros((n, capacity)) if RB is not None else None
        self._H = np.zeros((capacity + 1, capacity))
        self.size = 0
        self.breakdown = False
        nv = np.linalg.norm(v0)
        if nv == 0.0:
            raise ValueError("starting vector must be nonzero")
        self._append(v0 / nv)

    @property
    def m(self):
        """Projection order: number of basis vectors with a known successor."""
        return self.size - 1

    def _grow(self):
        cap = self._V.shape[1]
        new = 2 * cap

        def pad(M, rows=None):
            out = np.zeros((M.shape[0] if rows is None else rows, new))
            out[: M.shape[0], :cap] = M
            return out

        self._V = pad(self._V)
        self._AV = pad(self._AV)
        self._DV = pad(self._DV)
        if self._RBV is not None:
            self._RBV = pad(self._RBV)
        self._H = pad(self._H, new + 1)

    def _append(self, v):
        if self.size == self._V.shape[1]:
            self._grow()
        k = self.size
        self._V[:, k] = v
        self._AV[:, k] = self.A.matvec(v)
        self._DV[:, k] = self.D.matvec(v)
        if self._RBV is not None:
            self._RBV[:, k] = self.RB.matvec(v)
        self.size += 1

    @property
    def V(self):
        return self._V[:, : self.size]

    @property
    def AV(self):
        return self._AV[:, : self.size]

    @property
    def H(self):
        return self._H[: self.size, : self.size - 1]

    @property
    def K(self):
        V = self.V
        K = V.T @ self.AV
        return 0.5 * (K + K.T)

    @property
    def Dm(self):
        V = self.V
        M = V.T @ self._DV[:, : self.size]
        return 0.5 * (M + M.T)

    @property
    def W_RB_W(self):
        if self._RBV is None:
            return None
        M = self.V.T @ self._RBV[:, : self.size]
        return 0.5 * (M + M.T)

    def projections(self, m):
        """``K_m``, ``D_m`` and ``V_m^T R_B V_m`` for the first ``m`` vectors."""
        V = self._V[:, :m]
        K = V.T @ self._AV[:, :m]
        Dm = V.T @ self._DV[:, :m]
        P = V.T @ self._RBV[:, :m] if self._RBV is not None else None
        sym = lambda M: None if M is None else 0.5 * (M + M.T)
        return sym(K), sym(Dm), sym(P)


def expand_basis(state, chol=None):
    """Append ``A^{-1} v_last`` orthogonalized against the basis.

    Two Gram-Schmidt passes give full reorthogonalization. A remainder
    below ``1e-14`` relative to the solve result signals an invariant
    subspace; the appended vector is then zero and ``state.breakdown`` is
    set.
    """
    if state.breakdown:
        raise BandlyapError("basis already broke down; no further expansion")
    chol = state.chol if chol is None else chol
    k = state.size - 1
    w = chol_solve(chol, state._V[:, k])
    wn = np.linalg.norm(w)
    V = state.V
    h = np.zeros(state.size)
    for _ in range(2):
        c = V.T @ w
        w = w - V @ c
        h += c
    nrm = np.linalg.norm(w)
    state._H[: state.size, k] = h
    if nrm <= BREAKDOWN_TOL * wn or state.size >= state.n:
        state._H[state.size, k] = 0.0
        state.breakdown = True
        state._append(np.zeros(state.n))
        return state
    state._H[state.size, k] = nrm
    state._append(w / nrm)
    return state


# ----------------------------------------------------------------------
# projected solves


def projected_solve(K, Dm):
    """Solve ``K Z + Z K = Dm`` in the eigenbasis of ``K``.

    Returns
    -------
    Pi, Psi : ndarray
        Eigenvectors and eigenvalues of ``K``.
    Zhat : ndarray
        Solution in the eigenbasis, ``Z = Pi Zhat Pi^T``.
    """
    Psi, Pi = sym_eig_dense(K)
    denom = Psi[:, None] + Psi[None, :]
    if np.any(denom <= 0.0):
        raise NotSPDError("projected matrix is not positive definite")
    Zhat = (Pi.T @ Dm @ Pi) / denom
    return Pi, Psi, 0.5 * (Zhat + Zhat.T)


def assemble_S(V, Pi, Psi, Zhat, tau, drop_tol=DROP_TOL):
    """Signature factor of ``V Pi e^{-tau Psi} Zhat e^{-tau Psi} Pi^T V^T``.

    Columns whose norm falls below ``drop_tol`` times the largest are
    dropped.

    Returns
    -------
    factor : LowRankFactor
    Delta : ndarray
        Small factor with ``S = V Delta``.
    """
    theta, W = sym_eig_dense(Zhat)
    E = np.exp(-tau * Psi)
    Delta = (Pi * E) @ (W * np.sqrt(np.abs(theta)))
    norms = np.linalg.norm(Delta, axis=0)
    top = norms.max(initial=0.0)
    keep = norms > 0.0 if top == 0.0 else norms >= drop_tol * top
    keep &= norms > 0.0
    Delta = Delta[:, keep]
    sig = np.where(theta[keep] >= 0.0, 1.0, -1.0)
    return LowRankFactor(V @ Delta, sig), Delta


def arnoldi_G(state, m=None):
    """Matrix ``G`` with ``A V_m = [V_m, vhat] G`` for the inverse Krylov basis.

    Returns
    -------
    vhat : ndarray
        Normalized component of ``A v_{m+1}`` orthogonal to ``V_m`` (zero
        when that component vanishes).
    G : ndarray, shape (m + 1, m)
    """
    m = state.m if m is None else m
    if m < 1 or m + 1 > state.size:
        raise ValueError(f"projection order {m} not available")
    Vm = state._V[:, :m]
    Hm = state._H[:m, :m]
    h_next = state._H[m, m - 1]
    try:
        Hinv = np.linalg.solve(Hm, np.eye(m))
    except np.linalg.LinAlgError:
        raise BandlyapError("Hessenberg block is singular; restart with a new vector") from None
    if not np.all(np.isfinite(Hinv)):
        raise BandlyapError("Hessenberg block is singular; restart with a new vector")
    lower = np.vstack([Hinv, -h_next * Hinv[m - 1 : m, :]])
    Av = state._AV[:, m]
    c = np.zeros(m)
    r = Av.copy()
    for _ in range(2):
        cc = Vm.T @ r
        r -= Vm @ cc
        c += cc
    eta = np.linalg.norm(r)
    if eta > 0.0:
        vhat = r / eta
    else:
        vhat = np.zeros(state.n)
    top = np.zeros((m + 1, m + 1))
    top[:m, :m] = np.eye(m)
    top[:m, m] = c
    top[m, m] = eta
    return vhat, top @ lower


@dataclass
class ResidualTracker:
    """Fixed part of the splitting residual and the stagnation reference."""

    gamma: float
    mu: float
    d: int = 10
    normD: float = 1.0
    history: list = field(default_factory=list)


def _sandwich(state, m, vhat):
    """``[V_m, vhat]^T R_B [V_m, vhat]``."""
    Vm = state._V[:, :m]
    P = np.zeros((m + 1, m + 1))
    top = Vm.T @ state._RBV[:, :m]
    P[:m, :m] = 0.5 * (top + top.T)
    if np.any(vhat):
        RBv = state.RB.matvec(vhat)
        col = Vm.T @ RBv
        P[:m, m] = col
        P[m, :m] = col
        P[m, m] = vhat @ RBv
    return P


def cheap_residual(tracker, state, G, Delta, sig, vhat, m=None):
    """Frobenius norm of the splitting residual from small matrices only.

    Returns
    -------
    value : float
    clamped : bool
        True when cancellation made the squared norm negative and it was
        clamped to zero.
    """
    m = state.m if m is None else m
    if Delta.shape[1] == 0:
        return tracker.gamma, False
    Y = (Delta * sig) @ Delta.T
    E = np.zeros((m + 1, m))
    E[:m, :m] = np.eye(m)
    J = G @ Y @ E.T
    J = J + J.T
    val = tracker.gamma**2 + np.sum(J * J)
    if state.RB is not None:
        val += 2.0 * np.sum(J * _sandwich(state, m, vhat))
    scale = tracker.gamma**2 + np.sum(J * J)
    if val < 0.0:
        if val < -1e-12 * max(scale, 1e-300):
            warnings.warn("cancellation in residual evaluation; value clamped at zero", RuntimeWarning)
        return 0.0, True
    return math.sqrt(val), False


# ----------------------------------------------------------------------
# drivers


@dataclass
class LowRankReport:
    iterations: int
    rank: int
    relres: float
    reason: str
    residual_history: list = field(default_factory=list)
    clamped: bool = False

    @property
    def converged(self):
        return self.reason in ("converged", "stagnation", "breakdown")


def residual_banded_part(A, XB, D, B=None):
    """``R_B = A X_B + X_B B - D`` as a banded matrix."""
    if B is None:
        return band_add(sym_part_lower(band_matmul(A.as_symmetric(), XB.as_symmetric())), D.as_symmetric(), -1.0)
    return band_add(band_add(band_matmul(A, XB), band_matmul(XB, B)), D, -1.0)


def _start_vector(n, v0, seed):
    if v0 is None:
        v0 = np.random.default_rng(seed).standard_normal(n)
    v0 = np.asarray(v0, dtype=float)
    return v0 / np.linalg.norm(v0)


def lowrank_iterate(
    A,
    D,
    XB,
    tau,
    v0=None,
    eps_res=1e-3,
    eps_it=1e-5,
    m_max=2000,
    d=10,
    chol=None,
    seed=0,
    drop_tol=DROP_TOL,
):
    """Grow the inverse Krylov space until the splitting residual is small.

    Stops when ``||R||/||D|| < eps_res`` (converged), when the residual
    changes by a relative amount below ``eps_it`` between checks
    (stagnation), when the space becomes invariant (breakdown), or after
    ``m_max`` vectors (max_iter). Residual checks happen every ``d``
    iterations.

    Returns
    -------
    factor : LowRankFactor
    report : LowRankReport
    """
    n = A.n
    A = A.as_symmetric()
    D = D.as_symmetric()
    normD = frob_norm(D)
    if normD == 0.0 and (XB is None or not np.any(XB.data)):
        return LowRankFactor.empty(n), LowRankReport(0, 0, 0.0, "converged", [])
    RB = residual_banded_part(A, XB, D) if XB is not None else D * -1.0
    gamma = frob_norm(RB)
    tracker = ResidualTracker(gamma, normD, d, normD)
    state = KrylovState(A, D, _start_vector(n, v0, seed), chol=chol, RB=RB)
    expand_basis(state)
    clamped_any = False
    m = 1
    while True:
        check = m % d == 0 or state.breakdown or m >= m_max
        if check:
            Pi, Psi, Zhat = projected_solve(*state.projections(m)[:2])
            factor, Delta = assemble_S(state._V[:, :m], Pi, Psi, Zhat, tau, drop_tol)
            vhat, G = arnoldi_G(state, m)
            res, clamped = cheap_residual(tracker, state, G, Delta, factor.sig, vhat, m)
            clamped_any |= clamped
            rel = res / normD if normD > 0 else res
            tracker.history.append((m, rel))
            reason = None
            if rel < eps_res:
                reason = "converged"
            elif res > 0 and abs(res - tracker.mu) / res < eps_it:
                reason = "stagnation"
            elif state.breakdown:
                reason = "breakdown"
            elif m >= m_max:
                reason = "max_iter"
            if reason is not None:
                return factor, LowRankReport(m, factor.rank, rel, reason, tracker.history, clamped_any)
            tracker.mu = res
        expand_basis(state)
        m += 1


def lowrank_iterate_sylvester(
    A,
    B,
    D,
    XB,
    tau,
    v0=None,
    w0=None,
    eps_res=1e-3,
    eps_it=1e-5,
    m_max=2000,
    d=10,
    chol_A=None,
    chol_B=None,
    seed=0,
    drop_tol=DROP_TOL,
):
    """Two-sided analogue of :func:`lowrank_iterate` for ``AX + XB = D``.

    Left and right inverse Krylov spaces grow together. The projected
    Sylvester equation is solved in the eigenbases of both projected
    coefficients, and the low-rank term is truncated through an SVD of the
    small core.

    Returns
    -------
    factor : TwoSidedFactor
    report : LowRankReport
    """
    n = A.n
    A = A.as_symmetric()
    B = B.as_symmetric()
    D = D.as_general()
    normD = frob_norm(D)
    RB = residual_banded_part(A.as_general(), XB.as_general(), D, B.as_general()) if XB is not None else D * -1.0
    gamma = frob_norm(RB)
    v0 = _start_vector(n, v0, seed)
    w0 = v0 if w0 is None else _start_vector(n, w0, seed)
    # the right space carries D^T so that its projections read V_B^T D^T V_B
    left = KrylovState(A, D, v0, chol=chol_A)
    right = KrylovState(B, D.transpose(), w0, chol=chol_B)
    expand_basis(left)
    expand_basis(right)
    mu = normD
    history = []
    m = 1
    while True:
        done = left.breakdown or right.breakdown
        if m % d == 0 or done or m >= m_max:
            factor, res = _sylvester_check(left, right, D, RB, gamma, tau, m, drop_tol)
            rel = res / normD if normD > 0 else res
            history.append((m, rel))
            reason = None
            if rel < eps_res:
                reason = "converged"
            elif res > 0 and abs(res - mu) / res < eps_it:
                reason = "stagnation"
            elif done:
                reason = "breakdown"
            elif m >= m_max:
                reason = "max_iter"
            if reason is not None:
                return factor, LowRankReport(m, factor.rank, rel, reason, history)
            mu = res
        expand_basis(left)
        expand_basis(right)
        m += 1


def _sylvester_check(left, right, D, RB, gamma, tau, m, drop_tol):
    VA = left._V[:, :m]
    VB = right._V[:, :m]
    KA = left.projections(m)[0]
    KB = right.projections(m)[0]
    Dm = VA.T @ D.matvec(VB)
    psiA, PiA = sym_eig_dense(KA)
    psiB, PiB = sym_eig_dense(KB)
    denom = psiA[:, None] + psiB[None, :]
    if np.any(denom <= 0.0):
        raise NotSPDError("projected matrices are not positive definite")
    Zhat = (PiA.T @ Dm @ PiB) / denom
    F = (PiA * np.exp(-tau * psiA)) @ Zhat @ (PiB * np.exp(-tau * psiB)).T
    P, s, Qt = np.linalg.svd(F)
    keep = s >= drop_tol * s.max(initial=0.0)
    keep &= s > 0.0
    Fk = (P[:, keep] * s[keep]) @ Qt[keep]
    factor = TwoSidedFactor(VA @ P[:, keep], s[keep], VB @ Qt[keep].T)
    vA, GA = arnoldi_G(left, m)
    vB, GB = arnoldi_G(right, m)
    E = np.zeros((m + 1, m))
    E[:m, :m] = np.eye(m)
    J = GA @ Fk @ E.T + E @ Fk @ GB.T
    WA = np.column_stack([VA, vA])
    WB = np.column_stack([VB, vB])
    core = WA.T @ RB.matvec(WB)
    val = gamma**2 + np.sum(J * J) + 2.0 * np.sum(J * core)
    return factor, math.sqrt(max(val, 0.0))
