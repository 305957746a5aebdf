import numpy as np
import pytest


def oracle_pair(A, u, B=None):
    """Smallest eigenpair of C^T C, C = [Bu, -Au], by a dense 2x2 eigensolve."""
    A = np.asarray(A, dtype=float)
    u = np.asarray(u, dtype=float)
    Bu = u if B is None else np.asarray(B, dtype=float) @ u
    C = np.column_stack([Bu, -(A @ u)])
    w, V = np.linalg.eigh(C.T @ C)
    v = V[:, 0]
    return v[0] / v[1], w[0]


def oracle_svd_alpha(A, u, B=None):
    """Ratio of the smallest right singular vector of C."""
    A = np.asarray(A, dtype=float)
    u = np.asarray(u, dtype=float)
    Bu = u if B is None else np.asarray(B, dtype=float) @ u
    C = np.column_stack([Bu, -(A @ u)])
    _, s, Vt = np.linalg.svd(C)
    return Vt[-1, 0] / Vt[-1, 1], s[-1] ** 2


def oracle_charpoly_mu(p, q, r):
    """Smaller root of det([[p, -q], [-q, r]] - t I) via numpy's polynomial roots."""
    roots = np.roots([1.0, -(p + r), p * r - q * q])
    return float(np.min(roots.real))


def random_symmetric(rng, n, spd=False):
    M = rng.standard_normal((n, n))
    if spd:
        return M @ M.T + 0.1 * np.eye(n)
    return 0.5 * (M + M.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
