"""Banded approximation of the finite-horizon integral.

``X(tau) = int_0^tau exp(-tA) D exp(-tA) dt`` is evaluated by adaptive
Gauss-Lobatto quadrature. At each node the exponential is replaced by a
rational approximation whose resolvents are truncated to a band predicted
by their entry decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._cheb_data import TABLES
from .banded import BandedMatrix, band_add, band_matmul, frob_norm, truncate_small
from .bounds import SpectralInterval, cutoff_offset, freund_constants
from .eigen import lanczos_extreme_eigs
from .exceptions import QuadratureError, ShapeMismatchError
from .factor import complex_ldlt, inverse_lower_band

NU_MIN, NU_MAX = 4, 14


@dataclass(frozen=True)
class RationalChebTable:
    """Partial fractions ``sum_j weights[j] / (x - poles[j])`` approximating ``exp(-x)``.

    Conjugate pairs are stored consecutively, upper half-plane member
    first; a real pole, present for odd ``nu``, comes last.
    """

    nu: int
    poles: np.ndarray
    weights: np.ndarray
    real_pole_index: int | None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for xi, th in zip(self.poles, self.weights):
            out += th / (x - xi)
        return out.real

    @property
    def pair_indices(self):
        """Index of the first member of each conjugate pair."""
        stop = self.nu - 1 if self.real_pole_index is not None else self.nu
        return range(0, stop, 2)


def nu_from_tolerance(eps_quad):
    """Opt-in degree rule ``floor(ln(1/eps_quad)) - 1`` clamped to the table range."""
    nu = math.floor(math.log(1.0 / eps_quad)) - 1
    return int(min(NU_MAX, max(NU_MIN, nu)))


def _sup_error(table, grid=None):
    if grid is None:
        grid = np.concatenate([np.linspace(0.0, 100.0, 20001), np.geomspace(100.0, 1e8, 2000)])
    return float(np.max(np.abs(np.exp(-grid) - table(grid))))


@lru_cache(maxsize=None)
def cheb_table(nu):
    """Validated pole/weight table for degree ``nu`` in ``[4, 14]``."""
    if nu not in TABLES:
        raise ValueError(f"nu must be an integer in [{NU_MIN}, {NU_MAX}], got {nu}")
    poles, weights = (np.array(v, dtype=complex) for v in TABLES[nu])
    real = np.flatnonzero(poles.imag == 0.0)
    real_idx = None
    if nu % 2:
        if real.tolist() != [nu - 1] or poles[-1].real >= 0.0:
            raise ValueError(f"table {nu}: expected one negative real pole in last position")
        real_idx = nu - 1
    elif real.size:
        raise ValueError(f"table {nu}: unexpected real pole")
    for k in range(0, nu - (nu % 2), 2):
        if poles[k + 1] != np.conj(poles[k]) or weights[k + 1] != np.conj(weights[k]):
            raise ValueError(f"table {nu}: entries {k}, {k + 1} are not a conjugate pair")
    table = RationalChebTable(nu, poles, weights, real_idx)
    err = _sup_error(table)
    if err > 10.0 ** (-nu + 1):
        raise ValueError(f"table {nu}: sup error {err:.2e} exceeds 1e{-nu + 1}")
    return table


# ----------------------------------------------------------------------
# resolvents


def _spectral(A, spec):
    if spec is None:
        eig = lanczos_extreme_eigs(A, tol=1e-4)
        return SpectralInterval(eig.lambda_min, eig.lambda_max, A.beta)
    return SpectralInterval(spec.lambda_min, spec.lambda_max, A.beta)


def resolvent_cutoff(A, t, xi, eps_B, spec):
    """Band offset beyond which ``|(tA - xi I)^{-1}|`` entries are below ``eps_B``."""
    if t == 0.0 or A.beta == 0 or spec.lambda_min == spec.lambda_max:
        return 0
    return min(A.n - 1, cutoff_offset(freund_constants(t, xi, spec), eps_B))


def banded_resolvent(A, t, xi, eps_B=1e-5, spec=None):
    """Banded approximation of ``(tA - xi I)^{-1}`` for symmetric ``A``.

    Columns of the inverse are computed from a complex LDL^T factor by
    substitutions truncated at the decay cutoff; the lower band is mirrored
    to give a complex symmetric result.
    """
    A = A.as_symmetric()
    spec = _spectral(A, spec)
    data = (t * A.data).astype(complex)
    data[A.beta] -= xi
    F = complex_ldlt(BandedMatrix(data, symmetric=True))
    pbar = resolvent_cutoff(A, t, xi, eps_B, spec)
    S = inverse_lower_band(F, pbar)
    n = A.n
    out = np.zeros((pbar + 1, n), dtype=complex)
    for r in range(pbar + 1):
        out[pbar - r, r:] = S[r, : n - r]
    return BandedMatrix(out, symmetric=True)


def rational_exp(A, t, table, eps_B=1e-5, eps_quad=1e-5, spec=None):
    """Truncated banded rational approximation of ``exp(-tA)``.

    Entries below ``eps_quad`` in modulus are dropped, and the band shrinks
    to the outermost surviving diagonal.
    """
    A = A.as_symmetric()
    spec = _spectral(A, spec)
    n = A.n
    if t == 0.0:
        val = float(np.real(np.sum(-table.weights / table.poles)))
        return BandedMatrix(np.full((1, n), val), symmetric=True)
    acc = None
    for j in table.pair_indices:
        term = banded_resolvent(A, t, table.poles[j], eps_B, spec)
        piece = BandedMatrix(2.0 * (table.weights[j] * term.data).real, symmetric=True)
        acc = piece if acc is None else band_add(acc, piece)
    if table.real_pole_index is not None:
        j = table.real_pole_index
        term = banded_resolvent(A, t, table.poles[j], eps_B, spec)
        piece = BandedMatrix((table.weights[j] * term.data).real, symmetric=True)
        acc = piece if acc is None else band_add(acc, piece)
    return truncate_small(acc, eps_quad)


# ----------------------------------------------------------------------
# adaptive Gauss-Lobatto

_ALPHA = math.sqrt(2.0 / 3.0)
_BETA = 1.0 / math.sqrt(5.0)
_X1, _X2, _X3 = 0.942882415695480, 0.641853342345781, 0.236383199662150
_KRONROD = (
    0.0158271919734802,
    0.0942738402188500,
    0.155071987336585,
    0.188821573960182,
    0.199773405226859,
    0.224926465333340,
    0.242611071901408,
)


def _lincomb(terms):
    """``sum c * M`` over ``(c, M)`` pairs of banded matrices."""
    out = None
    for c, M in terms:
        if c == 0.0:
            continue
        out = M * c if out is None else band_add(out, M, c)
    return out


def _lobatto_pair(h, fa, fb, fmll, fml, fm, fmr, fmrr):
    """4-point Lobatto and 7-point Kronrod extension estimates."""
    i2 = _lincomb([(h / 6.0, fa), (h / 6.0, fb), (5.0 * h / 6.0, fml), (5.0 * h / 6.0, fmr)])
    k = h / 1470.0
    i1 = _lincomb(
        [
            (77.0 * k, fa),
            (77.0 * k, fb),
            (432.0 * k, fmll),
            (432.0 * k, fmrr),
            (625.0 * k, fml),
            (625.0 * k, fmr),
            (672.0 * k, fm),
        ]
    )
    return i1, i2


@dataclass
class QuadratureInfo:
    evaluations: int = 0
    intervals: int = 0
    max_depth: int = 0
    nodes: list = field(default_factory=list)


def adaptive_lobatto(f, a, b, tol, norm=frob_norm, max_depth=30, info=None):
    """Adaptive Gauss-Lobatto integration of a matrix-valued ``f`` on ``[a, b]``.

    A 13-point Kronrod rule on the whole interval supplies the global
    scale. Each subinterval compares the 4-point Lobatto rule against its
    7-point Kronrod extension; it is accepted when ``norm(i1 - i2)`` is at
    most ``tol`` times the global scale, or when it can no longer be split
    in floating point. Otherwise it is split into six pieces at the
    interior nodes.

    Raises
    ------
    QuadratureError
        If the recursion exceeds ``max_depth`` levels.
    """
    info = QuadratureInfo() if info is None else info
    cache = {}

    def ev(t):
        if t not in cache:
            cache[t] = f(t)
            info.evaluations += 1
            info.nodes.append(t)
        return cache[t]

    m = 0.5 * (a + b)
    h = 0.5 * (b - a)
    if h == 0.0:
        raise QuadratureError("empty integration interval")
    xs = [
        a,
        m - _X1 * h,
        m - _ALPHA * h,
        m - _X2 * h,
        m - _BETA * h,
        m - _X3 * h,
        m,
        m + _X3 * h,
        m + _BETA * h,
        m + _X2 * h,
        m + _ALPHA * h,
        m + _X1 * h,
        b,
    ]
    ys = [ev(x) for x in xs]
    terms = [(h * _KRONROD[k], ys[k]) for k in range(6)]
    terms += [(h * _KRONROD[k], ys[12 - k]) for k in range(6)]
    terms.append((h * _KRONROD[6], ys[6]))
    scale = norm(_lincomb(terms))
    if scale == 0.0:
        return _lincomb(terms), info

    def step(a, b, fa, fb, depth):
        if depth > max_depth:
            raise QuadratureError(f"recursion depth {max_depth} exceeded near t={a:.6g}")
        info.max_depth = max(info.max_depth, depth)
        h = 0.5 * (b - a)
        m = 0.5 * (a + b)
        mll, ml, mr, mrr = m - _ALPHA * h, m - _BETA * h, m + _BETA * h, m + _ALPHA * h
        fmll, fml, fm, fmr, fmrr = ev(mll), ev(ml), ev(m), ev(mr), ev(mrr)
        i1, i2 = _lobatto_pair(h, fa, fb, fmll, fml, fm, fmr, fmrr)
        if norm(band_add(i1, i2, -1.0)) <= tol * scale or mll <= a or b <= mrr:
            info.intervals += 1
            return i1
        parts = [
            step(a, mll, fa, fmll, depth + 1),
            step(mll, ml, fmll, fml, depth + 1),
            step(ml, m, fml, fm, depth + 1),
            step(m, mr, fm, fmr, depth + 1),
            step(mr, mrr, fmr, fmrr, depth + 1),
            step(mrr, b, fmrr, fb, depth + 1),
        ]
        return _lincomb([(1.0, p) for p in parts])

    return step(a, b, ys[0], ys[12], 1), info


# ----------------------------------------------------------------------
# finite-horizon integral


@dataclass
class XBInfo:
    quadrature: QuadratureInfo
    max_beta_exp: int
    nu: int


def compute_XB(
    A,
    D,
    tau,
    nu=6,
    eps_B=1e-5,
    eps_quad=1e-5,
    spec=None,
    B=None,
    spec_B=None,
    return_info=False,
):
    """Banded approximation of ``int_0^tau exp(-tA) D exp(-tB) dt``.

    With ``B`` omitted the Lyapunov case ``B = A`` is used and the result
    is stored symmetric.

    Parameters
    ----------
    A, B : BandedMatrix
        Symmetric positive definite coefficients.
    D : BandedMatrix
        Right-hand side; symmetric in the Lyapunov case.
    tau : float
        Integration horizon.
    nu : int
        Degree of the rational exponential approximation.
    eps_B : float
        Entry threshold for the banded resolvents.
    eps_quad : float
        Quadrature tolerance and exponential truncation threshold.
    spec, spec_B : SpectralInterval, optional
        Extreme eigenvalues; estimated by Lanczos when omitted.
    return_info : bool
        Also return an :class:`XBInfo`.
    """
    if A.n != D.n:
        raise ShapeMismatchError(f"order mismatch: {A.n} vs {D.n}")
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    table = cheb_table(nu)
    A = A.as_symmetric()
    spec = _spectral(A, spec)
    lyap = B is None
    if lyap:
        D = D.as_symmetric()
    else:
        if B.n != D.n:
            raise ShapeMismatchError(f"order mismatch: {B.n} vs {D.n}")
        B = B.as_symmetric()
        spec_B = _spectral(B, spec_B)
        D = D.as_general()
    max_beta = [0]

    def expo(M, sp, t):
        R = rational_exp(M, t, table, eps_B, eps_quad, sp)
        max_beta[0] = max(max_beta[0], R.beta)
        return R

    def integrand(t):
        RA = expo(A, spec, t)
        if lyap:
            return band_matmul(band_matmul(RA, D), RA, symmetric_result=True)
        RB = expo(B, spec_B, t)
        return band_matmul(band_matmul(RA, D), RB)

    if D.outer_nonzero() == 0 and not np.any(D.data):
        XB = BandedMatrix.zeros(A.n, 0, symmetric=lyap)
        info = QuadratureInfo()
    else:
        XB, info = adaptive_lobatto(integrand, 0.0, float(tau), eps_quad)
    if return_info:
        return XB, XBInfo(info, max_beta[0], nu)
    return XB
