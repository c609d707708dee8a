"""Entrywise decay bounds, bandwidth cutoffs and the splitting-time selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .exceptions import (
    DegenerateIntervalError,
    EllipseConsistencyError,
    QuadratureError,
    TauSelectionError,
)


@dataclass(frozen=True)
class SpectralInterval:
    lambda_min: float
    lambda_max: float
    beta_A: int = 1

    def __post_init__(self):
        if not (0 < self.lambda_min <= self.lambda_max):
            raise ValueError(
                f"need 0 < lambda_min <= lambda_max, got {self.lambda_min}, {self.lambda_max}"
            )

    @property
    def kappa(self):
        return self.lambda_max / self.lambda_min

    def scaled(self, c):
        return SpectralInterval(self.lambda_min * c, self.lambda_max * c, self.beta_A)


@dataclass(frozen=True)
class TauChoice:
    tau: float
    xi_bar: int
    rho: float
    eps_tau: float
    beta_max: int


def _nonzeros(D):
    """Row, column and value arrays of the nonzero entries of a banded ``D``."""
    dense_rows, dense_cols, vals = [], [], []
    b, n = D.beta, D.n
    full = D.full_data()
    for k in range(2 * b + 1):
        d = k - b
        rows = np.flatnonzero(full[k])
        rows = rows[(rows + d >= 0) & (rows + d < n)]
        dense_rows.append(rows)
        dense_cols.append(rows + d)
        vals.append(full[k, rows])
    return np.concatenate(dense_rows), np.concatenate(dense_cols), np.concatenate(vals)


# ----------------------------------------------------------------------
# solution bounds


def haber_solution_bound(spec, D, i, j):
    """Kronecker-inverse decay bound for ``|X[i, j]|`` (0-based indices).

    The Kronecker operator is treated as a banded matrix of bandwidth
    ``n * beta_A``, which makes the decay rate close to one for large ``n``.
    """
    n = D.n
    kappa = spec.kappa
    sk = math.sqrt(kappa)
    # Demko constant max(1/a, (1+sqrt(k))^2/(2b)) for the Kronecker spectrum [a, b]
    tau_h = max(1.0, (1.0 + sk) ** 2 / (2.0 * kappa)) / (2.0 * spec.lambda_min)
    rho = ((sk - 1.0) / (sk + 1.0)) ** (1.0 / (n * spec.beta_A))
    k, l, v = _nonzeros(D)
    if v.size == 0:
        return 0.0
    expo = np.abs((l - j) * n + k - i).astype(float)
    if rho == 0.0:
        return float(tau_h * np.sum(np.abs(v[expo == 0])))
    return float(tau_h * np.sum(np.abs(v) * np.exp(expo * math.log(rho))))


def _alpha_minus_one_sq(w, lmin, lmax):
    """``(alpha^2 - 1, alpha)`` for the shifted interval ``[lmin, lmax] + i w``."""
    a = np.hypot(lmin, w)
    b = np.hypot(lmax, w)
    delta = lmax - lmin
    alpha = (a + b) / delta
    # (a+b)^2 - delta^2 = (a+b-delta)(a+b+delta), both factors positive
    am1 = (a + b - delta) * (a + b + delta) / delta**2
    return am1, alpha


def _log_R(w, lmin, lmax):
    am1, alpha = _alpha_minus_one_sq(w, lmin, lmax)
    return np.log(alpha + np.sqrt(am1)), am1


def _kron_integrand(case, power, lmin, lmax):
    """Integrand of the off-diagonal or mixed kernel; ``power`` is the R exponent."""

    def both(w):
        logR, am1 = _log_R(w, lmin, lmax)
        # R^2 / (R^2 - 1)^2 = 1 / (4 (alpha^2 - 1))
        g = 1.0 / (4.0 * am1)
        return g * g * math.exp(-power * logR)

    def mixed(w):
        logR, am1 = _log_R(w, lmin, lmax)
        g = 1.0 / (4.0 * am1)
        return g * math.exp(-power * logR) / math.hypot(lmin, w)

    return both if case == 2 else mixed


@lru_cache(maxsize=65536)
def _kron_theta(case, dist, lmin, lmax, beta):
    """Coefficient for entries at combined distance ``dist`` (0 < dist)."""
    delta = lmax - lmin
    if delta <= 0.0:
        return 0.0
    if case == 2:
        power = dist / beta - 2.0
        pref = 64.0 / (2.0 * math.pi * delta**2)
    else:
        power = dist / beta - 1.0
        pref = 8.0 / (2.0 * math.pi * delta)
    f = _kron_integrand(case, power, lmin, lmax)
    omega = max(lmax, 1.0)
    total, err = quad(f, 0.0, omega, epsabs=0.0, epsrel=1e-9, limit=400)
    for _ in range(200):
        piece, _ = quad(f, omega, 2.0 * omega, epsabs=0.0, epsrel=1e-9, limit=400)
        total += piece
        omega *= 2.0
        if piece < 1e-3 * total:
            break
    else:
        raise QuadratureError(f"kernel integral did not settle (case={case}, dist={dist})")
    # power-law tail beyond the last cutoff
    f1, f2 = f(omega / 2.0), f(omega)
    if f1 > 0.0 and f2 > 0.0:
        p = math.log2(f1 / f2)
        if p > 1.0:
            total += f2 * omega / (p - 1.0)
    return 2.0 * pref * total


def kron_solution_bound(spec, D, i, j):
    """Decay bound for ``|X[i, j]|`` exploiting the Kronecker sum structure.

    Each nonzero ``D[k, l]`` contributes with a coefficient depending on
    whether ``k == i`` and/or ``l == j``, and on ``|k - i| + |l - j|``.
    The frequency integrals are even in ``omega``; they are computed on
    ``[0, Omega]``, with ``Omega`` doubled until the last slab contributes
    less than 1e-3 of the total, and the result is doubled.
    """
    k, l, v = _nonzeros(D)
    if v.size == 0:
        return 0.0
    lmin, lmax, beta = float(spec.lambda_min), float(spec.lambda_max), int(max(spec.beta_A, 1))
    eq = (k == i).astype(int) + (l == j).astype(int)
    dist = np.abs(k - i) + np.abs(l - j)
    total = 0.0
    both = eq == 2
    total += np.sum(np.abs(v[both])) / (2.0 * lmin)
    # case 1: exactly one index matches; case 2: neither matches
    for case, mask in ((1, eq == 1), (2, eq == 0)):
        if not np.any(mask):
            continue
        dists, inv = np.unique(dist[mask], return_inverse=True)
        weights = np.bincount(inv, weights=np.abs(v[mask]))
        theta = np.array([_kron_theta(case, int(dd), lmin, lmax, beta) for dd in dists])
        total += float(theta @ weights)
    return float(total)


def kron_bound_column(spec, D, j, rows=None):
    """:func:`kron_solution_bound` for every row in ``rows`` of column ``j``."""
    rows = np.arange(D.n) if rows is None else np.asarray(rows)
    return np.array([kron_solution_bound(spec, D, int(i), j) for i in rows])


def haber_bound_column(spec, D, j, rows=None):
    rows = np.arange(D.n) if rows is None else np.asarray(rows)
    return np.array([haber_solution_bound(spec, D, int(i), j) for i in rows])


# ----------------------------------------------------------------------
# resolvent bounds


@dataclass(frozen=True)
class FreundConstants:
    """Prefactor ``C`` and rate ``R`` with ``|M^{-1}[p, q]| <= C R^{-|p-q|/beta}``."""

    C: float
    R: float
    beta: int


def freund_constants(t, xi, spec, consistency_tol=1e-8):
    """Constants of the decay bound for ``(t A - xi I)^{-1}``.

    Raises
    ------
    DegenerateIntervalError
        If the shifted spectral interval has zero length.
    EllipseConsistencyError
        If the parameter ``a`` is not on the ellipse with semi-axes
        ``zeta_R``, ``eta_R`` beyond roundoff.
    """
    lam1 = t * spec.lambda_min - xi
    lam2 = t * spec.lambda_max - xi
    width = abs(lam2 - lam1)
    if width == 0.0:
        raise DegenerateIntervalError("shifted spectral interval has zero length")
    alpha = (abs(lam1) + abs(lam2)) / width
    R = alpha + math.sqrt(max(alpha * alpha - 1.0, 0.0))
    if R <= 1.0:
        raise DegenerateIntervalError("shift lies on the spectral segment; no decay")
    a = (lam2 + lam1) / (lam2 - lam1)
    zeta = 0.5 * (R + 1.0 / R)
    eta = 0.5 * (R - 1.0 / R)
    cos_psi = a.real / zeta if isinstance(a, complex) else a / zeta
    a_im = a.imag if isinstance(a, complex) else 0.0
    sin_psi = a_im / eta
    if abs(cos_psi**2 + sin_psi**2 - 1.0) > consistency_tol * max(1.0, zeta):
        raise EllipseConsistencyError(
            f"a={a} is off the ellipse (cos^2+sin^2={cos_psi**2 + sin_psi**2:.12g})"
        )
    root = math.sqrt(max(zeta * zeta - cos_psi * cos_psi, 0.0))
    B = R / (eta * root * (zeta + root))
    C = 2.0 * R / width * B
    return FreundConstants(C, R, int(max(spec.beta_A, 1)))


def freund_resolvent_bound(t, xi, spec, p, q):
    """Upper bound on ``|(t A - xi I)^{-1}[p, q]|`` for ``p != q``."""
    if p == q:
        raise ValueError("the decay bound holds only off the diagonal (p != q)")
    c = freund_constants(t, xi, spec)
    return c.C * c.R ** (-abs(p - q) / c.beta)


def cutoff_offset(consts, eps_B):
    """Smallest offset ``p >= 2`` whose bound is at most ``eps_B``."""
    if eps_B <= 0.0:
        raise ValueError("eps_B must be positive")
    ratio = consts.C / eps_B
    if ratio <= 0.0:
        return 2
    x = consts.beta * math.log(ratio) / math.log(consts.R)
    p = max(2, math.ceil(x))
    # guard the ceiling against rounding in the logarithms
    while p > 2 and consts.C * consts.R ** (-(p - 1) / consts.beta) <= eps_B:
        p -= 1
    while consts.C * consts.R ** (-p / consts.beta) > eps_B:
        p += 1
    return int(p)


def cutoff_bar_p(t, xi, spec, q, eps_B, n):
    """Last row index (0-based, inclusive) kept for column ``q``.

    The offset does not depend on ``q``; the result is ``min(n - 1, q + pbar)``.
    """
    pbar = cutoff_offset(freund_constants(t, xi, spec), eps_B)
    return min(n - 1, q + pbar)


# ----------------------------------------------------------------------
# exponential decay and tau


def benzi_exp_bound(rho, t, beta_M, k, l):
    """Decay bound for ``|exp(-t M)[k, l]|`` with spectrum of ``M`` in ``[0, 4 rho]``.

    Returns ``inf`` outside the two regimes where the estimate is proven.
    """
    if k == l:
        raise ValueError("bound applies to off-diagonal entries only")
    xi = math.ceil(abs(k - l) / beta_M)
    rt = rho * t
    if rt <= 0.0:
        return math.inf
    if rt >= 1.0 and math.sqrt(4.0 * rt) <= xi <= 2.0 * rt:
        return 10.0 * math.exp(-(xi * xi) / (5.0 * rt))
    if xi >= 2.0 * rt:
        return 10.0 * math.exp(-rt) / rt * math.exp(xi * (1.0 + math.log(rt / xi)))
    return math.inf


def tau_decay_profile(i, t, spec):
    """``f_i(t) = 10 exp(-xi_i^2 / (5 rho t)) exp(-t lambda_min)``, ``xi_i = ceil((i-1)/beta_A)``."""
    rho = (spec.lambda_max - spec.lambda_min) / 4.0
    xi = math.ceil((i - 1) / spec.beta_A)
    return 10.0 * math.exp(-(xi * xi) / (5.0 * rho * t)) * math.exp(-t * spec.lambda_min)


def select_tau(spec, beta_max=500, eps_tau=1e-5):
    """Splitting time at which the entry at offset ``beta_max - 1`` decays to ``eps_tau``.

    Raises
    ------
    TauSelectionError
        If no such time exists for this ``beta_max`` and ``eps_tau``.
    """
    if beta_max < 2:
        raise ValueError("beta_max must be at least 2")
    lmin = spec.lambda_min
    rho = (spec.lambda_max - lmin) / 4.0
    if rho <= 0.0:
        raise TauSelectionError("degenerate spectrum: lambda_max == lambda_min")
    xi_bar = math.ceil((beta_max - 1) / spec.beta_A)
    L = math.log(eps_tau / 10.0)
    disc = 25.0 * rho * rho * L * L - 20.0 * rho * lmin * xi_bar * xi_bar
    if disc < 0.0 or L >= 0.0:
        raise TauSelectionError(
            f"no admissible tau for beta_max={beta_max}, eps_tau={eps_tau:g}: "
            "reduce beta_max or eps_tau"
        )
    tau = (-5.0 * rho * L - math.sqrt(disc)) / (10.0 * rho * lmin)
    if tau <= 0.0:
        raise TauSelectionError("selected tau is not positive")

    def f(t):
        return 10.0 * math.exp(-(xi_bar * xi_bar) / (5.0 * rho * t)) * math.exp(-t * lmin)

    # f is increasing at the smaller root; step up past rounding
    step = 1e-16
    for _ in range(200):
        if f(tau) >= eps_tau:
            break
        tau *= 1.0 + step
        step *= 2.0
    return TauChoice(float(tau), int(xi_bar), float(rho), float(eps_tau), int(beta_max))


def predicted_cg_iterations(kappa, eps_res):
    """Iteration count guaranteeing relative accuracy ``eps_res`` for CG."""
    if kappa < 1.0:
        raise ValueError("kappa must be >= 1")
    if not (0.0 < eps_res <= 1.0):
        raise ValueError("eps_res must lie in (0, 1]")
    num = math.log(1.0 / eps_res + math.sqrt(max(eps_res**-2 - 1.0, 0.0)))
    if num == 0.0:
        return 0
    if kappa == 1.0:
        return 1
    s = 1.0 / math.sqrt(kappa)
    sigma = (1.0 - s) / (1.0 + s)
    return int(math.ceil(num / math.log(1.0 / sigma)))


def lowrank_tail_bound(eigenvalues, tau, rank, norm_D):
    """2-norm error bound for the best rank-``rank`` approximation of ``exp(-tau A) X exp(-tau A)``.

    ``eigenvalues`` are those of the SPD coefficient, in any order. The
    bound is ``sqrt(3) / (2 lmin) * exp(-tau (lmin + l_r)) * norm_D`` where
    ``l_r`` is the ``(rank + 1)``-th smallest eigenvalue.
    """
    lam = np.sort(np.asarray(eigenvalues, dtype=float))
    if lam.size == 0 or lam[0] <= 0.0:
        raise ValueError("eigenvalues must be positive")
    if not 0 <= rank < lam.size:
        raise ValueError(f"rank must lie in [0, {lam.size - 1}]")
    return math.sqrt(3.0) / (2.0 * lam[0]) * math.exp(-tau * (lam[0] + lam[rank])) * norm_D
