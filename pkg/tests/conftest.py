import numpy as np
import pytest

from bandlyap.banded import BandedMatrix
from bandlyap.bounds import SpectralInterval


def tridiag(n, lower=-1.0, diag=2.0):
    return BandedMatrix.from_diagonals(n, {0: np.full(n, diag), -1: np.full(n - 1, lower)}, symmetric=True)


def scaled_laplacian(n):
    """``tridiag(-1, 2, -1) / lambda_min`` with its exact spectral interval."""
    k = np.arange(1, n + 1)
    lam = 2.0 - 2.0 * np.cos(k * np.pi / (n + 1))
    A = tridiag(n) * (1.0 / lam[0])
    return A, SpectralInterval(1.0, lam[-1] / lam[0], 1)


def random_band(rng, n, beta, symmetric=False, complex_=False):
    rows = beta + 1 if symmetric else 2 * beta + 1
    data = rng.standard_normal((rows, n))
    if complex_:
        data = data + 1j * rng.standard_normal((rows, n))
    M = BandedMatrix(data, symmetric=symmetric)
    return BandedMatrix.from_dense(M.to_dense(), beta=beta, symmetric=symmetric)


def rel(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def laplacian200():
    return scaled_laplacian(200)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LOG", None)
    if lines:
        terminalreporter.section("acceptance summary")
        for line in sorted(lines):
            terminalreporter.write_line(line)
