"""Dense complex linear algebra: Hermitian eigendecomposition, sign-fixed QR,
unitary exponential application, and direct linear solves.

Matrices are plain complex ndarrays; states are 1-D unit-norm complex
ndarrays. Everything here is a pure function of its inputs, so values can be
shared freely across threads.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import DimensionMismatch, NotHermitian, NotSquare, RankDeficient, Singular

HERMITIAN_TOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise NotSquare(f"expected a 2-D array, got ndim={m.ndim}")
    return m


def as_state(v) -> np.ndarray:
    """Coerce input to a 1-D complex128 array."""
    s = np.asarray(v, dtype=np.complex128)
    if s.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D array, got ndim={s.ndim}")
    return s


def require_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"matrix is {m.shape[0]}x{m.shape[1]}")
    return m


def hermitian_defect(a) -> float:
    """Largest entrywise deviation of a from its conjugate transpose."""
    m = as_matrix(a)
    return float(np.abs(m - m.conj().T).max()) if m.size else 0.0


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    return m.shape[0] == m.shape[1] and hermitian_defect(m) <= tol


def spectral_norm(a) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_matrix(a), 2))


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Hermitian eigendecomposition H = V diag(w) V† with w ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def hermitian_eigendecompose(h, tol: float = HERMITIAN_TOL) -> EigenDecomposition:
    """Eigendecompose a Hermitian matrix.

    Returns ascending eigenvalues and orthonormal eigenvector columns.
    Raises NotSquare / NotHermitian when the input fails its checks.
    """
    m = require_square(h)
    defect = hermitian_defect(m)
    if defect > tol:
        raise NotHermitian(f"Hermitian defect {defect:.3e} exceeds {tol:.1e}")
    w, v = np.linalg.eigh(m)
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def qr_orthonormalize(m, min_diag: float | None = 1e-12) -> np.ndarray:
    """Orthonormal factor Q of m = QR with the R diagonal made real positive.

    The sign convention pins Q uniquely for full-rank input, so repeated calls
    are bit-identical. Columns whose R diagonal is smaller than ``min_diag``
    trip RankDeficient; pass ``min_diag=0`` (or None) to accept rank-deficient
    input, in which case Householder columns for the deficient directions are
    kept as produced (still deterministic, still orthonormal).
    """
    a = require_square(m)
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    ad = np.abs(d)
    if min_diag:
        bad = np.nonzero(ad < min_diag)[0]
        if bad.size:
            raise RankDeficient(
                f"|R[{bad[0]},{bad[0]}]| = {ad[bad[0]]:.3e} below {min_diag:.1e}"
            )
    phase = np.where(ad > 0.0, d / np.where(ad > 0.0, ad, 1.0), 1.0)
    return q * phase.conj()[None, :]


def apply_exp(eig: EigenDecomposition, tau: float, psi) -> np.ndarray:
    """Apply exp(-i*tau*H) to psi through the eigendecomposition of H.

    Exactly unitary up to rounding, so the output norm matches the input
    norm to machine precision regardless of tau.
    """
    v = as_state(psi)
    if eig.dim != v.shape[0]:
        raise DimensionMismatch(f"operator dim {eig.dim} != state dim {v.shape[0]}")
    coeff = eig.eigenvectors.conj().T @ v
    coeff *= np.exp(-1j * tau * eig.eigenvalues)
    return eig.eigenvectors @ coeff


def solve_linear(a, b, pivot_tol: float = 1e-13) -> np.ndarray:
    """Normalized solution A^-1 b / ||A^-1 b|| of a dense linear system.

    Uses LU with partial pivoting; raises Singular when a pivot magnitude
    falls below ``pivot_tol``.
    """
    m = require_square(a)
    rhs = as_state(b)
    if m.shape[0] != rhs.shape[0]:
        raise DimensionMismatch(f"matrix dim {m.shape[0]} != vector dim {rhs.shape[0]}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # zero-pivot warning; handled below
        lu, piv = lu_factor(m, check_finite=False)
    pivots = np.abs(np.diagonal(lu))
    if pivots.min(initial=np.inf) < pivot_tol:
        raise Singular(f"pivot {pivots.min():.3e} below {pivot_tol:.1e}")
    x = lu_solve((lu, piv), rhs, check_finite=False)
    return x / np.linalg.norm(x)
