import numpy as np
import pytest

from framekit import FramePair, OvfPair, PFramePair, Tolerance


def rng_for(seed):
    return np.random.default_rng(seed)


def random_matrix(rng, rows, cols, field="real"):
    M = rng.standard_normal((rows, cols))
    if field == "complex":
        M = M + 1j * rng.standard_normal((rows, cols))
    return M


def random_spd(rng, m, field="real", lo=0.5, hi=2.5):
    """Hermitian matrix with eigenvalues in [lo, hi]."""
    Q, _ = np.linalg.qr(random_matrix(rng, m, m, field))
    d = rng.uniform(lo, hi, m)
    return (Q * d) @ Q.conj().T


def orthonormal_rows(rng, m, n, field="real"):
    """m x n matrix F with F F^* = I (requires n >= m)."""
    Q, _ = np.linalg.qr(random_matrix(rng, n, m, field))
    return Q.conj().T


def random_frame(rng, m, n, field="real", lo=0.5, hi=2.5):
    """Frame pair with Hermitian pd frame operator; needs n >= m."""
    F = orthonormal_rows(rng, m, n, field)
    U = random_matrix(rng, m, m, field) + 3.0 * np.eye(m)
    W = random_spd(rng, m, field, lo, hi)
    V = W @ np.linalg.inv(U).conj().T
    return FramePair(U @ F, V @ F, field, Tolerance())


def random_parseval(rng, m, n, field="real", self_dual=False):
    F = orthonormal_rows(rng, m, n, field)
    if self_dual:
        return FramePair(F, F, field, Tolerance())
    U = random_matrix(rng, m, m, field) + 3.0 * np.eye(m)
    V = np.linalg.inv(U).conj().T
    return FramePair(U @ F, V @ F, field, Tolerance())


def random_ovf(rng, m, d, n, field="real", lo=0.5, hi=2.5):
    """OVF pair with Hermitian pd frame operator; needs n*d >= m."""
    thetaA = random_matrix(rng, n * d, m, field)
    W = random_spd(rng, m, field, lo, hi)
    thetaPsi = thetaA @ np.linalg.inv(thetaA.conj().T @ thetaA) @ W
    A = tuple(thetaA[j * d:(j + 1) * d] for j in range(n))
    Psi = tuple(thetaPsi[j * d:(j + 1) * d] for j in range(n))
    return OvfPair(A, Psi, field, Tolerance())


def random_parseval_ovf(rng, m, d, n, field="real"):
    """Self-dual Parseval OVF pair (theta_A = theta_Psi with orthonormal columns)."""
    Q, _ = np.linalg.qr(random_matrix(rng, n * d, m, field))
    blocks = tuple(Q[j * d:(j + 1) * d] for j in range(n))
    return OvfPair(blocks, blocks, field, Tolerance())


def random_parseval_pframe(rng, m, n, p, field="real"):
    F = random_matrix(rng, n, m, field) + np.vstack([3.0 * np.eye(m)] * 1 + [np.zeros((n - m, m))])
    T = np.linalg.pinv(F)
    return PFramePair(F, T, p, field, Tolerance())


def mercedes_benz(scale=1.0):
    angles = [0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0]
    X = scale * np.array([[np.cos(a) for a in angles], [np.sin(a) for a in angles]])
    return FramePair(X, X, "real", Tolerance())


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
