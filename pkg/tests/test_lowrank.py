import warnings

import numpy as np
import pytest

from bandlyap.banded import BandedMatrix
from bandlyap.bounds import select_tau
from bandlyap.exceptions import BandlyapError, NotSPDError
from bandlyap.expm import compute_XB
from bandlyap.generators import random_spd_banded
from bandlyap.lowrank import (
    KrylovState,
    LowRankFactor,
    ResidualTracker,
    TwoSidedFactor,
    arnoldi_G,
    assemble_S,
    cheap_residual,
    expand_basis,
    lowrank_iterate,
    lowrank_iterate_sylvester,
    projected_solve,
    residual_banded_part,
)
from bandlyap.banded import frob_norm
from bandlyap.oracles import dense_expm_sym, dense_lyap_oracle

from conftest import random_band, rel, scaled_laplacian, tridiag


def grown_state(A, D, m, seed=0, RB=None):
    v0 = np.random.default_rng(seed).standard_normal(A.n)
    st = KrylovState(A, D, v0, RB=RB, capacity=4)
    for _ in range(m):
        expand_basis(st)
    return st


def dense_residual(A, X, D):
    return np.linalg.norm(A @ X + X @ A - D)


@pytest.fixture(scope="module")
def spd100():
    p = random_spd_banded(100, 2, 1, seed=7)
    return p.A, p.D


# ----------------------------------------------------------------------
# factors


def test_factor_representation(rng):
    S = rng.standard_normal((20, 3))
    F = LowRankFactor(S, np.array([1.0, -1.0, 1.0]))
    M = S @ np.diag([1, -1, 1]) @ S.T
    np.testing.assert_allclose(F.to_dense(), M, atol=1e-13)
    v = rng.standard_normal(20)
    np.testing.assert_allclose(F.apply(v), M @ v, atol=1e-12)
    assert F.entry(4, 7) == pytest.approx(M[4, 7])
    assert F.rank == 3
    assert LowRankFactor.empty(20).rank == 0
    assert not np.any(LowRankFactor.empty(5).to_dense())


def test_two_sided_factor(rng):
    U, V = rng.standard_normal((10, 2)), rng.standard_normal((10, 2))
    F = TwoSidedFactor(U, np.array([2.0, 0.5]), V)
    M = U @ np.diag([2.0, 0.5]) @ V.T
    np.testing.assert_allclose(F.to_dense(), M, atol=1e-13)
    np.testing.assert_allclose(F.apply(np.eye(10)), M, atol=1e-13)


# ----------------------------------------------------------------------
# basis


def test_identity_breaks_down_immediately():
    I = BandedMatrix.identity(10)
    st = grown_state(I, I, 1)
    assert st.breakdown
    assert st.m == 1
    with pytest.raises(BandlyapError):
        expand_basis(st)


def test_basis_orthonormal_and_arnoldi_relation(spd100):
    A, D = spd100
    st = grown_state(A, D, 10)
    V = st.V
    assert np.linalg.norm(V.T @ V - np.eye(11)) <= 1e-10
    Ainv = np.linalg.inv(A.to_dense())
    assert np.linalg.norm(Ainv @ V[:, :10] - V @ st.H) <= 1e-10
    np.testing.assert_allclose(st.K, V.T @ A.to_dense() @ V, atol=1e-11)
    np.testing.assert_allclose(st.Dm, V.T @ D.to_dense() @ V, atol=1e-11)


def test_storage_grows_past_capacity(spd100):
    A, D = spd100
    st = grown_state(A, D, 20)
    assert st.size == 21
    assert np.linalg.norm(st.V.T @ st.V - np.eye(21)) <= 1e-10


def test_full_space_is_breakdown():
    A = tridiag(6, diag=3.0)
    st = grown_state(A, BandedMatrix.identity(6), 5)
    assert not st.breakdown
    expand_basis(st)
    assert st.breakdown and st.m == 6


def test_zero_start_vector_rejected():
    with pytest.raises(ValueError):
        KrylovState(tridiag(4, diag=3.0), BandedMatrix.identity(4), np.zeros(4))


# ----------------------------------------------------------------------
# projected equation


def test_projected_solve_small_cases():
    _, _, Z = projected_solve(np.diag([1.0, 2.0]), np.eye(2))
    np.testing.assert_allclose(np.diag(Z), [0.5, 0.25])
    Dm = np.array([[2.0, 1.0], [1.0, 4.0]])
    Pi, _, Z = projected_solve(np.eye(2), Dm)
    np.testing.assert_allclose(Pi @ Z @ Pi.T, Dm / 2, atol=1e-15)


def test_projected_solve_galerkin_residual(rng):
    M = rng.standard_normal((8, 8))
    K = M @ M.T + 8 * np.eye(8)
    Dm = rng.standard_normal((8, 8))
    Dm = Dm + Dm.T
    Pi, _, Z = projected_solve(K, Dm)
    Zp = Pi @ Z @ Pi.T
    assert np.linalg.norm(K @ Zp + Zp @ K - Dm) <= 1e-11
    np.testing.assert_allclose(Z, Z.T)


def test_projected_solve_rejects_indefinite():
    with pytest.raises(NotSPDError):
        projected_solve(np.diag([1.0, -2.0]), np.eye(2))


# ----------------------------------------------------------------------
# factor assembly


def test_assemble_psd_has_positive_signature(spd100):
    A, _ = spd100
    D = BandedMatrix.identity(100)
    st = grown_state(A, D, 8)
    Pi, Psi, Z = projected_solve(*st.projections(8)[:2])
    F, Delta = assemble_S(st.V[:, :8], Pi, Psi, Z, 0.5)
    assert np.all(F.sig == 1.0)
    np.testing.assert_allclose(F.S, st.V[:, :8] @ Delta)


def test_assemble_reproduces_dense_product(spd100, rng):
    A, _ = spd100
    D = random_band(rng, 100, 2, symmetric=True)
    st = grown_state(A, D, 12)
    V = st.V[:, :12]
    Pi, Psi, Z = projected_solve(*st.projections(12)[:2])
    tau = 0.3
    F, _ = assemble_S(V, Pi, Psi, Z, tau)
    E = Pi * np.exp(-tau * Psi)
    ref = V @ E @ Z @ E.T @ V.T
    assert np.linalg.norm(F.to_dense() - ref) <= 1e-12 * np.linalg.norm(ref)
    assert np.any(F.sig < 0)


def test_assemble_large_tau_drops_everything(spd100):
    A, D = spd100
    st = grown_state(A, D, 5)
    Pi, Psi, Z = projected_solve(*st.projections(5)[:2])
    F, Delta = assemble_S(st.V[:, :5], Pi, Psi, Z, 1e6)
    assert F.rank == 0 and Delta.shape[1] == 0


# ----------------------------------------------------------------------
# Arnoldi relation and cheap residual


def test_arnoldi_G_identity(spd100):
    A, D = spd100
    st = grown_state(A, D, 12)
    vhat, G = arnoldi_G(st, 12)
    lhs = A.to_dense() @ st.V[:, :12]
    rhs = np.column_stack([st.V[:, :12], vhat]) @ G
    assert np.linalg.norm(lhs - rhs) <= 1e-9 * np.linalg.norm(A.to_dense(), 2)
    assert G[12, 11] == pytest.approx(0.0, abs=1e-300) or np.linalg.norm(vhat) == pytest.approx(1.0)


def test_arnoldi_G_at_breakdown():
    A = BandedMatrix.identity(8, 3.0)
    st = grown_state(A, BandedMatrix.identity(8), 1)
    vhat, G = arnoldi_G(st, 1)
    assert not np.any(vhat)
    np.testing.assert_allclose(G, [[3.0], [0.0]])


def test_arnoldi_G_order_check(spd100):
    A, D = spd100
    st = grown_state(A, D, 3)
    with pytest.raises(ValueError):
        arnoldi_G(st, 4)


@pytest.mark.parametrize("seed", range(3))
def test_cheap_residual_matches_dense(seed):
    p = random_spd_banded(80, 2, 1, seed=seed)
    r = np.random.default_rng(seed)
    A, D = p.A, p.D
    XB = random_band(r, 80, 3, symmetric=True) * 0.01
    RB = residual_banded_part(A, XB, D)
    st = grown_state(A, D, 15, seed=seed, RB=RB)
    tracker = ResidualTracker(frob_norm(RB), 1.0)
    for m in (5, 10, 15):
        Pi, Psi, Z = projected_solve(*st.projections(m)[:2])
        F, Delta = assemble_S(st.V[:, :m], Pi, Psi, Z, 0.2)
        vhat, G = arnoldi_G(st, m)
        val, clamped = cheap_residual(tracker, st, G, Delta, F.sig, vhat, m)
        ref = dense_residual(A.to_dense(), XB.to_dense() + F.to_dense(), D.to_dense())
        assert not clamped
        assert val == pytest.approx(ref, rel=1e-8)


def test_cheap_residual_trivial_cases(spd100):
    A, D = spd100
    st = grown_state(A, D, 6)
    tracker = ResidualTracker(2.5, 1.0)
    vhat, G = arnoldi_G(st, 6)
    val, _ = cheap_residual(tracker, st, G, np.zeros((6, 0)), np.zeros(0), vhat, 6)
    assert val == 2.5
    # no banded residual: only the projected term remains
    Pi, Psi, Z = projected_solve(*st.projections(6)[:2])
    F, Delta = assemble_S(st.V[:, :6], Pi, Psi, Z, 0.1)
    val, _ = cheap_residual(ResidualTracker(0.0, 1.0), st, G, Delta, F.sig, vhat, 6)
    Ad, L = A.to_dense(), F.to_dense()
    assert val == pytest.approx(np.linalg.norm(Ad @ L + L @ Ad), rel=1e-8)


def test_cheap_residual_clamps_with_warning(spd100):
    A, D = spd100
    RB = D * -1.0
    st = grown_state(A, D, 4, RB=RB)
    Pi, Psi, Z = projected_solve(*st.projections(4)[:2])
    F, Delta = assemble_S(st.V[:, :4], Pi, Psi, Z, 0.0)
    vhat, G = arnoldi_G(st, 4)
    # understated gamma forces a negative square
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        val, clamped = cheap_residual(ResidualTracker(0.0, 1.0), st, G, Delta * 0.5, F.sig, vhat, 4)
    assert clamped and val == 0.0
    assert any(issubclass(x.category, RuntimeWarning) for x in w)


# ----------------------------------------------------------------------
# iteration


def test_iterate_trivial_zero_problem():
    A = tridiag(20, diag=3.0)
    F, rep = lowrank_iterate(A, BandedMatrix.zeros(20, 0, symmetric=True), BandedMatrix.zeros(20, 0, symmetric=True), 0.5)
    assert F.rank == 0 and rep.iterations == 0 and rep.reason == "converged"


def test_iterate_on_scaled_laplacian():
    A, spec = scaled_laplacian(200)
    D = BandedMatrix.identity(200)
    tau = select_tau(spec, beta_max=40).tau
    XB = compute_XB(A, D, tau, spec=spec)
    F, rep = lowrank_iterate(A, D, XB, tau, eps_res=1e-3)
    assert rep.reason == "converged"
    X = XB.to_dense() + F.to_dense()
    res = dense_residual(A.to_dense(), X, D.to_dense()) / np.linalg.norm(D.to_dense())
    assert res <= 1e-3
    assert res == pytest.approx(rep.relres, rel=1e-6)
    hist = [h for _, h in rep.residual_history]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(hist, hist[1:]))


def test_iterate_low_rank_part_approximates_propagated_solution():
    A, spec = scaled_laplacian(100)
    D = BandedMatrix.identity(100)
    tau = select_tau(spec, beta_max=30).tau
    XB = compute_XB(A, D, tau, spec=spec)
    F, _ = lowrank_iterate(A, D, XB, tau, eps_res=1e-6, eps_it=1e-12)
    E = dense_expm_sym(A.to_dense(), tau)
    ref = E @ dense_lyap_oracle(A.to_dense(), D.to_dense()) @ E
    assert rel(F.to_dense(), ref) <= 1e-4


def test_iterate_stagnates_on_perturbed_banded_part(rng):
    A, spec = scaled_laplacian(150)
    D = BandedMatrix.identity(150)
    tau = select_tau(spec, beta_max=40).tau
    XB = compute_XB(A, D, tau, spec=spec)
    noise = random_band(rng, 150, 1, symmetric=True)
    XB = XB + noise * (1e-2 * frob_norm(XB) / frob_norm(noise))
    _, rep = lowrank_iterate(A, D, XB, tau, eps_res=1e-8, eps_it=1e-3, m_max=150)
    assert rep.reason == "stagnation"
    assert rep.iterations < 150


def test_iterate_max_iterations_flag(spd100):
    A, D = spd100
    _, rep = lowrank_iterate(A, D, None, 0.0, eps_res=1e-14, eps_it=0.0, m_max=7, d=3)
    assert rep.reason == "max_iter"
    assert rep.iterations == 7
    assert [m for m, _ in rep.residual_history] == [3, 6, 7]


def test_iterate_reproducible_with_seed(spd100):
    A, D = spd100
    a = lowrank_iterate(A, D, None, 0.0, eps_res=1e-6, seed=3)
    b = lowrank_iterate(A, D, None, 0.0, eps_res=1e-6, seed=3)
    np.testing.assert_array_equal(a[0].S, b[0].S)


# ----------------------------------------------------------------------
# Sylvester


def test_sylvester_reduces_to_lyapunov():
    A, spec = scaled_laplacian(120)
    D = BandedMatrix.identity(120)
    tau = select_tau(spec, beta_max=30).tau
    XB = compute_XB(A, D, tau, spec=spec)
    Fl, rl = lowrank_iterate(A, D, XB, tau, eps_res=1e-6, seed=1)
    Fs, rs = lowrank_iterate_sylvester(A, A, D, XB, tau, eps_res=1e-6, seed=1)
    assert rl.iterations == rs.iterations
    assert np.linalg.norm(Fl.to_dense() - Fs.to_dense()) <= 1e-10 * np.linalg.norm(Fl.to_dense())
    assert rs.relres == pytest.approx(rl.relres, abs=1e-9)


def test_sylvester_diagonal_coefficients():
    a = np.linspace(1.0, 4.0, 12)
    b = np.linspace(2.0, 3.0, 12)
    A = BandedMatrix(a[None, :], symmetric=True)
    B = BandedMatrix(b[None, :], symmetric=True)
    D = BandedMatrix.identity(12)
    F, rep = lowrank_iterate_sylvester(A, B, D, None, 0.0, eps_res=1e-10, v0=np.ones(12), w0=np.ones(12), d=1)
    ref = np.diag(1.0 / (a + b))
    assert rel(F.to_dense(), ref) <= 1e-8


def test_sylvester_random_pair_against_dense():
    pa = random_spd_banded(80, 2, 1, seed=21)
    pb = random_spd_banded(80, 1, 1, seed=22)
    D = pa.D
    F, rep = lowrank_iterate_sylvester(pa.A, pb.A, D, None, 0.0, eps_res=1e-6, m_max=80)
    Ad, Bd, Dd = pa.A.to_dense(), pb.A.to_dense(), D.to_dense()
    X = F.to_dense()
    res = np.linalg.norm(Ad @ X + X @ Bd - Dd) / np.linalg.norm(Dd)
    assert res <= 1e-6 or rep.reason != "converged"
    assert res == pytest.approx(rep.relres, rel=1e-5, abs=1e-12)
