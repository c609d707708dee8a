"""End-to-end solvers for banded Lyapunov and Sylvester equations.

Two routes are offered. Matrix CG works directly on banded iterates and
suits well-conditioned coefficients. The splitting route writes the
solution as a banded finite-horizon integral ``X_B`` plus a low-rank
correction ``L`` and handles ill-conditioned coefficients.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .banded import BandedMatrix, band_add, band_matmul, frob_norm
from .bounds import SpectralInterval, select_tau
from .cg import lyap_cg, sylv_cg
from .eigen import lanczos_extreme_eigs
from .exceptions import ShapeMismatchError, TauSelectionError
from .expm import NU_MAX, NU_MIN, compute_XB, nu_from_tolerance
from .factor import banded_cholesky
from .lowrank import LowRankFactor, lowrank_iterate, lowrank_iterate_sylvester

METHODS = ("auto", "cg", "split")


@dataclass(frozen=True)
class SolverConfig:
    """Solver tolerances and limits.

    ``eps_it`` defaults to ``eps_quad`` when left as ``None``; ``tau``
    overrides the automatic splitting time.
    """

    eps_res: float = 1e-3
    m_max: int = 2000
    eps_tau: float = 1e-5
    beta_max: int = 500
    nu: int = 6
    eps_B: float = 1e-5
    eps_quad: float = 1e-5
    d: int = 10
    seed: int = 0
    eps_it: float | None = None
    kappa_threshold: float = 1e4
    tau: float | None = None
    eig_tol: float = 1e-4
    nu_rule: bool = False

    def __post_init__(self):
        for name in ("eps_res", "eps_tau", "eps_B", "eps_quad", "kappa_threshold", "eig_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("m_max", "d"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.beta_max < 2:
            raise ValueError("beta_max must be at least 2")
        if not NU_MIN <= self.nu <= NU_MAX:
            raise ValueError(f"nu must lie in [{NU_MIN}, {NU_MAX}]")
        if self.eps_it is not None and self.eps_it < 0:
            raise ValueError("eps_it must be non-negative")
        if self.tau is not None and self.tau <= 0:
            raise ValueError("tau must be positive")

    @property
    def effective_nu(self):
        """``nu``, or the degree tied to ``eps_quad`` when ``nu_rule`` is set."""
        return nu_from_tolerance(self.eps_quad) if self.nu_rule else self.nu

    @property
    def stagnation_tol(self):
        return self.eps_quad if self.eps_it is None else self.eps_it

    def with_(self, **kw):
        return replace(self, **kw)


def _factor_parts(F):
    """``(left, coeff, right)`` with ``F = left diag(coeff) right^T``."""
    if isinstance(F, LowRankFactor):
        return F.S, F.sig, F.S
    return F.U, F.C, F.V


@dataclass
class SplitSolution:
    """Solution ``X = XB + left diag(coeff) right^T``.

    CG solutions use the same container with an empty low-rank part.
    """

    XB: BandedMatrix
    low_rank: object
    scale_applied: float = 1.0
    tau: float | None = None
    report: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.XB.n

    @property
    def rank(self):
        return self.low_rank.rank

    def _check_index(self, i, j):
        n = self.n
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"entry ({i}, {j}) outside order {n}")

    def entry(self, i, j):
        self._check_index(i, j)
        val = self.XB.entry(i, j)
        if self.rank:
            val = float(np.real(val)) + self.low_rank.entry(i, j)
        return float(np.real(val))

    def apply(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.n:
            raise ShapeMismatchError(f"vector length {v.shape[0]} != {self.n}")
        out = self.XB.matvec(v)
        if self.rank:
            out = out + self.low_rank.apply(v)
        return out

    def to_dense(self):
        X = self.XB.to_dense()
        if self.rank:
            X = X + self.low_rank.to_dense()
        return X

    def residual_norm(self, A, D, B=None):
        """``||A X + X B - D||_F`` with ``B = A`` by default.

        The banded part is formed explicitly. The low-rank part ``T`` enters
        through ``||R_B + T||^2 = ||R_B||^2 + 2 <R_B, T> + ||T||^2``, which
        only needs products with the thin factors.
        """
        B = A if B is None else B
        for M in (A, B, D):
            if M.n != self.n:
                raise ShapeMismatchError(f"order mismatch: {M.n} vs {self.n}")
        XB = self.XB.as_general()
        RB = band_add(
            band_add(band_matmul(A.as_general(), XB), band_matmul(XB, B.as_general())),
            D.as_general(),
            -1.0,
        )
        total = frob_norm(RB) ** 2
        if self.rank:
            left, coeff, right = _factor_parts(self.low_rank)
            # T = [A left, left] diag(coeff, coeff) [right, B right]^T
            P = np.hstack([A.matvec(left), left])
            Q = np.hstack([right, B.matvec(right)])
            M = np.concatenate([coeff, coeff])
            PtP = P.T @ P
            QtQ = Q.T @ Q
            tt = np.sum((M[:, None] * PtP * M[None, :]) * QtQ.T)
            cross = np.sum(np.sum(P * RB.matvec(Q), axis=0) * M)
            total += 2.0 * cross + tt
        return math.sqrt(max(total, 0.0))

    def relative_residual(self, A, D, B=None):
        nd = frob_norm(D)
        return self.residual_norm(A, D, B) / nd if nd > 0 else self.residual_norm(A, D, B)

    def memory_report(self):
        n = self.n
        xb = int(self.XB.nbytes)
        lr = int(self.low_rank.nbytes)
        dense = n * n * 8
        return {
            "bytes_xb": xb,
            "bytes_lowrank": lr,
            "bytes_total": xb + lr,
            "bytes_dense": dense,
            "fraction_of_dense": (xb + lr) / dense,
            "beta_xb": int(self.XB.beta),
            "rank": int(self.rank),
        }


def estimate_spectrum(A, cfg=None, chol=None):
    cfg = SolverConfig() if cfg is None else cfg
    return lanczos_extreme_eigs(A, tol=cfg.eig_tol, seed=cfg.seed, chol=chol)


def method_select(A, cfg=None, eig=None):
    """Return ``"cg"`` when ``kappa(A) <= cfg.kappa_threshold``, else ``"split"``.

    ``A`` may also be given directly as a condition number.
    """
    cfg = SolverConfig() if cfg is None else cfg
    if isinstance(A, (int, float)):
        kappa = float(A)
    else:
        eig = estimate_spectrum(A, cfg) if eig is None else eig
        kappa = eig.kappa
    return "cg" if kappa <= cfg.kappa_threshold else "split"


def _scaled_interval(eig, c, beta):
    lmin = eig.lambda_min * c
    return SpectralInterval(lmin, max(eig.lambda_max * c, lmin), max(beta, 1))


def _choose_tau(spec, cfg, diagonal=False):
    if cfg.tau is not None:
        return cfg.tau
    if diagonal or spec.lambda_max <= spec.lambda_min * (1.0 + 1e-12):
        # exp(-tA) is diagonal: only the diagonal term constrains tau
        return math.log(10.0 / cfg.eps_tau) / spec.lambda_min
    try:
        return select_tau(spec, cfg.beta_max, cfg.eps_tau).tau
    except TauSelectionError as exc:
        raise TauSelectionError(
            f"{exc}; alternatively pass an explicit tau, or use the cg method "
            f"for this well-conditioned coefficient (kappa={spec.kappa:.3g})"
        ) from None


def _cg_solution(X, rep, elapsed):
    n = X.n
    report = {
        "method": "cg",
        "iterations": rep.iterations,
        "relres": rep.final_relres,
        "converged": rep.converged,
        "beta_xb": rep.beta_X,
        "rank": 0,
        "tau": None,
        "seconds": elapsed,
        "residual_history": rep.residual_history,
        "beta_history": rep.beta_history,
    }
    return SplitSolution(X, LowRankFactor.empty(n), 1.0, None, report)


def solve_lyapunov(A, D, cfg=None, method="split"):
    """Solve ``AX + XA = D`` for SPD banded ``A`` and symmetric banded ``D``.

    Parameters
    ----------
    method : {"split", "cg", "auto"}
        ``auto`` picks through :func:`method_select`.

    Returns
    -------
    SplitSolution
    """
    cfg = SolverConfig() if cfg is None else cfg
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if A.n != D.n:
        raise ShapeMismatchError(f"order mismatch: {A.n} vs {D.n}")
    A = A.as_symmetric()
    D = D.as_symmetric()
    t0 = time.perf_counter()
    eig = None
    if method == "auto":
        chol = banded_cholesky(A)
        eig = estimate_spectrum(A, cfg, chol)
        method = method_select(A, cfg, eig)
    if method == "cg":
        X, rep = lyap_cg(A, D, eps_res=cfg.eps_res, m_max=cfg.m_max)
        return _cg_solution(X, rep, time.perf_counter() - t0)

    chol = banded_cholesky(A)
    eig = estimate_spectrum(A, cfg, chol) if eig is None else eig
    c = 1.0 / eig.lambda_min
    As, Ds = A * c, D * c
    chol_s = banded_cholesky(As)
    spec = _scaled_interval(eig, c, A.beta)
    tau = _choose_tau(spec, cfg, A.outer_nonzero() == 0)
    XB, info = compute_XB(As, Ds, tau, cfg.effective_nu, cfg.eps_B, cfg.eps_quad, spec=spec, return_info=True)
    t_xb = time.perf_counter() - t0
    F, rep = lowrank_iterate(
        As,
        Ds,
        XB,
        tau,
        eps_res=cfg.eps_res,
        eps_it=cfg.stagnation_tol,
        m_max=cfg.m_max,
        d=cfg.d,
        chol=chol_s,
        seed=cfg.seed,
    )
    elapsed = time.perf_counter() - t0
    report = {
        "method": "split",
        "iterations": rep.iterations,
        "relres": rep.relres,
        "converged": rep.reason == "converged",
        "stop_reason": rep.reason,
        "beta_xb": XB.beta,
        "rank": F.rank,
        "tau": tau,
        "lambda_min": eig.lambda_min,
        "lambda_max": eig.lambda_max,
        "kappa": eig.kappa,
        "quad_evaluations": info.quadrature.evaluations,
        "max_beta_exp": info.max_beta_exp,
        "seconds_xb": t_xb,
        "seconds": elapsed,
        "residual_history": rep.residual_history,
    }
    return SplitSolution(XB, F, c, tau, report)


def solve_sylvester(A, B, D, cfg=None, method="split"):
    """Solve ``AX + XB = D`` for SPD banded ``A`` and ``B``.

    The splitting time is chosen from the coefficient with the wider band.
    """
    cfg = SolverConfig() if cfg is None else cfg
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if not (A.n == B.n == D.n):
        raise ShapeMismatchError(f"order mismatch: {A.n}, {B.n}, {D.n}")
    A = A.as_symmetric()
    B = B.as_symmetric()
    D = D.as_general()
    t0 = time.perf_counter()
    chol_A = banded_cholesky(A)
    chol_B = banded_cholesky(B)
    eig_A = estimate_spectrum(A, cfg, chol_A)
    eig_B = estimate_spectrum(B, cfg, chol_B)
    if method == "auto":
        method = method_select(max(eig_A.kappa, eig_B.kappa), cfg)
    if method == "cg":
        X, rep = sylv_cg(A, B, D, eps_res=cfg.eps_res, m_max=cfg.m_max)
        return _cg_solution(X, rep, time.perf_counter() - t0)

    wide, eig_w = (A, eig_A) if A.beta >= B.beta else (B, eig_B)
    c = 1.0 / eig_w.lambda_min
    As, Bs, Ds = A * c, B * c, D * c
    spec_A = _scaled_interval(eig_A, c, A.beta)
    spec_B = _scaled_interval(eig_B, c, B.beta)
    spec_w = _scaled_interval(eig_w, c, wide.beta)
    tau = _choose_tau(spec_w, cfg, A.outer_nonzero() == 0 and B.outer_nonzero() == 0)
    XB, info = compute_XB(
        As, Ds, tau, cfg.effective_nu, cfg.eps_B, cfg.eps_quad, spec=spec_A, B=Bs, spec_B=spec_B, return_info=True
    )
    F, rep = lowrank_iterate_sylvester(
        As,
        Bs,
        Ds,
        XB,
        tau,
        eps_res=cfg.eps_res,
        eps_it=cfg.stagnation_tol,
        m_max=cfg.m_max,
        d=cfg.d,
        chol_A=banded_cholesky(As),
        chol_B=banded_cholesky(Bs),
        seed=cfg.seed,
    )
    report = {
        "method": "split",
        "iterations": rep.iterations,
        "relres": rep.relres,
        "converged": rep.reason == "converged",
        "stop_reason": rep.reason,
        "beta_xb": XB.beta,
        "rank": F.rank,
        "tau": tau,
        "quad_evaluations": info.quadrature.evaluations,
        "max_beta_exp": info.max_beta_exp,
        "seconds": time.perf_counter() - t0,
        "residual_history": rep.residual_history,
    }
    return SplitSolution(XB, F, c, tau, report)
