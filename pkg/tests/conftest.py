import numpy as np
import pytest

from qlss import GeneratorSpec, QlspInstance, generate_nonhermitian, generate_pd


def jacobi_eigenvalues(h, tol=1e-13, max_sweeps=60):
    """Independent cyclic-Jacobi eigensolver for Hermitian matrices.

    Used as an oracle against LAPACK-backed decompositions; shares no code
    with the library path.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = a - np.diag(np.diagonal(a))
        if np.abs(off).max() < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                phi = np.angle(apq)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * np.exp(1j * phi)
                rot[q, p] = -s * np.exp(-1j * phi)
                a = rot.conj().T @ a @ rot
    return np.sort(np.diagonal(a).real)


def hermitian_indefinite_instance(n: int, kappa: float) -> QlspInstance:
    """Hermitian matrix with eigenvalues of alternating sign filling
    [1/kappa, 1] in magnitude; reachable only through user-supplied input,
    so tests construct it directly."""
    from qlss.linalg import qr_orthonormalize
    from qlss.problems import HERMITIAN_INDEFINITE, ring_stencil

    u = qr_orthonormalize(ring_stencil(n, 1.0).astype(complex), min_diag=0.0)
    h = (1.0 - 1.0 / kappa) / (n - 1)
    lam = (1.0 / kappa + h * np.arange(n)) * (-1.0) ** np.arange(1, n + 1)
    a = (u * lam) @ u.conj().T
    a = 0.5 * (a + a.conj().T)
    b = u.sum(axis=1)
    return QlspInstance(a=a, b=b / np.linalg.norm(b), kappa=float(kappa),
                        matrix_class=HERMITIAN_INDEFINITE, n_dim=n)


@pytest.fixture(scope="session")
def pd_n4_k10():
    return generate_pd(GeneratorSpec(n_dim=4, kappa=10.0))


@pytest.fixture(scope="session")
def pd_n8_k10():
    return generate_pd(GeneratorSpec(n_dim=8, kappa=10.0))


@pytest.fixture(scope="session")
def nonh_n8_k10():
    return generate_nonhermitian(
        GeneratorSpec(n_dim=8, kappa=10.0, family="nonhermitian_laplacian"))
