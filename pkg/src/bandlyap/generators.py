"""Test problem generators.

Every generator returns a :class:`Problem` with banded ``A`` and ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .banded import BandedMatrix


@dataclass(frozen=True)
class ProblemSpec:
    generator: str
    n: int
    params: dict = field(default_factory=dict)
    seed: int = 0


@dataclass
class Problem:
    spec: ProblemSpec
    A: BandedMatrix
    D: BandedMatrix
    B: BandedMatrix | None = None


def _tridiag(n, lower, diag):
    return BandedMatrix.from_diagonals(n, {0: diag, -1: lower}, symmetric=True)


def kron_example(n_blocks, e=-0.34, a=1.36):
    """Block tridiagonal pair of order ``6 * n_blocks``.

    ``A = M kron I_6 + I_n kron L`` with ``M = tridiag(e, e, e)`` and
    ``L = tridiag(e, a - e, e)``; ``D = Q kron 11^T + 0.8 I`` with
    ``Q = tridiag(0.1, 0.2, 0.1)``. Bandwidths are 6 and 11.
    """
    n = n_blocks
    N = 6 * n
    diag0 = np.full(N, e + (a - e))
    sub1 = np.tile(np.r_[np.full(5, e), 0.0], n)[: N - 1]
    sub6 = np.full(N - 6, e) if N > 6 else np.zeros(0)
    diags = {0: diag0, -1: sub1}
    if N > 6:
        diags[-6] = sub6
    A = BandedMatrix.from_diagonals(N, diags, symmetric=True)

    # D[i, j] = Q[bi, bj] + 0.8 delta_ij with bi = i // 6
    bD = min(11, N - 1)
    data = np.zeros((bD + 1, N))
    rows = np.arange(N)
    for r in range(bD + 1):
        i = rows[r:]
        blk_gap = i // 6 - (i - r) // 6
        vals = np.where(blk_gap == 0, 0.2, np.where(blk_gap == 1, 0.1, 0.0))
        data[bD - r, r:] = vals
    data[bD] += 0.8
    D = BandedMatrix(data, symmetric=True)
    return A, D


def kron_example_spectrum(n_blocks, e=-0.34, a=1.36):
    """Closed-form extreme eigenvalues of the block tridiagonal operator."""
    n = n_blocks
    lmax = (a - e + 2 * abs(e) * np.cos(np.pi / 7)) + (e + 2 * abs(e) * np.cos(np.pi / (n + 1)))
    lmin = (a - e + 2 * abs(e) * np.cos(6 * np.pi / 7)) + (e + 2 * abs(e) * np.cos(n * np.pi / (n + 1)))
    return float(lmin), float(lmax)


def gen_kron_example(n_blocks):
    A, D = kron_example(n_blocks)
    return Problem(ProblemSpec("kron", 6 * n_blocks, {"n_blocks": n_blocks}), A, D)


def gen_1d_operator(n, gamma, seed=0):
    """Variable-coefficient diffusion-reaction operator on ``(0, 1)``.

    Conservative centered differences for ``-(1/gamma)(e^x u')' + gamma u``
    with zero Dirichlet data on ``n`` interior nodes; ``D`` is diagonal with
    entries uniform on ``(0, 1)``.
    """
    h = 1.0 / (n + 1)
    x_half = (np.arange(n + 1) + 0.5) * h
    p = np.exp(x_half)
    diag = (p[:-1] + p[1:]) / (gamma * h * h) + gamma
    off = -p[1:-1] / (gamma * h * h)
    A = _tridiag(n, off, diag)
    rng = np.random.default_rng(seed)
    D = BandedMatrix(rng.uniform(0.0, 1.0, (1, n)), symmetric=True)
    spec = ProblemSpec("diffusion1d", n, {"gamma": gamma}, seed)
    return Problem(spec, A, D)


def gen_pentadiag_operator(n, gamma, seed=0):
    """Fourth-order stencil for ``-u'' + gamma log(10(x+1)) u`` on ``n`` nodes.

    ``D`` is symmetric tridiagonal with uniform random entries scaled to
    unit Frobenius norm.
    """
    x = np.arange(n) / (n - 1)
    chi = np.log(10.0 * (x + 1.0))
    c = (n - 1) ** 2 / 12.0
    A = BandedMatrix.from_diagonals(
        n,
        {0: 30.0 * c + gamma * chi, -1: np.full(n - 1, -16.0 * c), -2: np.full(n - 2, c)},
        symmetric=True,
    )
    rng = np.random.default_rng(seed)
    data = np.zeros((2, n))
    data[1] = rng.uniform(0.0, 1.0, n)
    data[0, 1:] = rng.uniform(0.0, 1.0, n - 1)
    D = BandedMatrix(data, symmetric=True)
    D = D * (1.0 / np.sqrt(2.0 * np.sum(data[0] ** 2) + np.sum(data[1] ** 2)))
    spec = ProblemSpec("pentadiag", n, {"gamma": gamma}, seed)
    return Problem(spec, A, D)


def random_spd_banded(n, beta_A, beta_D, seed=0, kappa_shift=None):
    """Random SPD banded ``A`` and symmetric banded ``D``.

    ``A`` is a random symmetric band plus a diagonal shift making it
    diagonally dominant; ``kappa_shift`` overrides the shift to control
    conditioning (smaller shift, larger condition number).
    """
    rng = np.random.default_rng(seed)
    data = np.zeros((beta_A + 1, n))
    for r in range(1, beta_A + 1):
        data[beta_A - r, r:] = rng.uniform(-1.0, 1.0, n - r)
    # Gershgorin radii of the off-diagonal part, indexed by row
    off = np.abs(BandedMatrix(data, symmetric=True).full_data()).sum(axis=0)
    shift = 0.5 if kappa_shift is None else kappa_shift
    data[beta_A] = off + shift
    A = BandedMatrix(data, symmetric=True)
    ddata = np.zeros((beta_D + 1, n))
    for r in range(beta_D + 1):
        ddata[beta_D - r, r:] = rng.standard_normal(n - r)
    D = BandedMatrix(ddata, symmetric=True)
    spec = ProblemSpec("random_spd", n, {"beta_A": beta_A, "beta_D": beta_D}, seed)
    return Problem(spec, A, D)
