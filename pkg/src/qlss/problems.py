"""Benchmark QLSP instances: deterministic dense generators and file I/O.

A QLSP instance is a matrix A with unit spectral norm, a unit right-hand-side
state b, and the condition number kappa of A. The generated families follow
the periodic-Laplacian construction: an orthogonal basis U from the QR of the
ring stencil, a prescribed singular spectrum spread uniformly over
[1/kappa, 1], and b as the normalized sum of the basis columns.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, NormalizationError, ParseError, SingularMatrix
from .linalg import as_matrix, as_state, hermitian_defect, qr_orthonormalize

HERMITIAN_PD = "hermitian_pd"
HERMITIAN_INDEFINITE = "hermitian_indefinite"
GENERAL = "general"
MATRIX_CLASSES = (HERMITIAN_PD, HERMITIAN_INDEFINITE, GENERAL)

PD_LAPLACIAN = "pd_laplacian"
NONHERMITIAN_LAPLACIAN = "nonhermitian_laplacian"
FAMILIES = (PD_LAPLACIAN, NONHERMITIAN_LAPLACIAN)

FORMAT_HEADER = "qlsp v1"


@dataclass(frozen=True, eq=False)
class QlspInstance:
    """A linear-system instance: ||a||_2 = 1, ||b||_2 = 1, cond(a) = kappa."""

    a: np.ndarray
    b: np.ndarray
    kappa: float
    matrix_class: str
    n_dim: int


@dataclass(frozen=True)
class GeneratorSpec:
    n_dim: int
    kappa: float
    family: str = PD_LAPLACIAN


def ring_stencil(n: int, diag: float) -> np.ndarray:
    """n x n periodic tridiagonal stencil: ``diag`` on the diagonal, -0.5 on
    the super/sub diagonals and in the wrap-around corners."""
    m = np.zeros((n, n))
    np.fill_diagonal(m, diag)
    for i in range(n):
        m[i, (i + 1) % n] = -0.5
        m[i, (i - 1) % n] = -0.5
    return m


def _validate(spec: GeneratorSpec, family: str) -> None:
    if spec.family != family:
        raise InvalidSpec(f"expected family {family!r}, got {spec.family!r}")
    if spec.n_dim < 2:
        raise InvalidSpec(f"n_dim must be >= 2, got {spec.n_dim}")
    if not spec.kappa > 1.0:
        raise InvalidSpec(f"kappa must be > 1, got {spec.kappa}")


def _spectrum(n: int, kappa: float) -> np.ndarray:
    # lambda_k = 1/kappa + (k-1) h, h = (1 - 1/kappa)/(N-1): uniform on [1/kappa, 1]
    h = (1.0 - 1.0 / kappa) / (n - 1)
    return 1.0 / kappa + h * np.arange(n)


def _column_sum_state(u: np.ndarray) -> np.ndarray:
    b = u.sum(axis=1)
    return b / np.linalg.norm(b)


def generate_pd(spec: GeneratorSpec) -> QlspInstance:
    """Hermitian positive definite instance A = U diag(lambda) U†.

    U is the sign-fixed QR factor of the ring stencil with unit diagonal.
    That stencil has zero row sums (it annihilates the all-ones vector), so
    the rank check is disabled for this one factorization; Householder QR
    still yields a deterministic orthonormal U.
    """
    _validate(spec, PD_LAPLACIAN)
    n, kappa = spec.n_dim, spec.kappa
    u = qr_orthonormalize(ring_stencil(n, 1.0).astype(np.complex128), min_diag=0.0)
    lam = _spectrum(n, kappa)
    a = (u * lam) @ u.conj().T
    a = 0.5 * (a + a.conj().T)
    return QlspInstance(a=a, b=_column_sum_state(u), kappa=float(kappa),
                        matrix_class=HERMITIAN_PD, n_dim=n)


def generate_nonhermitian(spec: GeneratorSpec) -> QlspInstance:
    """Non-Hermitian instance A = U diag(lambda) V† with alternating signs.

    U comes from the unit-diagonal ring stencil, V from the stencil with
    diagonal 2 (nonsingular); lambda_k = (-1)^k (1/kappa + (k-1) h), so the
    singular values still fill [1/kappa, 1] while the sign flips break
    Hermiticity. b is the same column-sum state as the PD family.
    """
    _validate(spec, NONHERMITIAN_LAPLACIAN)
    n, kappa = spec.n_dim, spec.kappa
    u = qr_orthonormalize(ring_stencil(n, 1.0).astype(np.complex128), min_diag=0.0)
    v = qr_orthonormalize(ring_stencil(n, 2.0).astype(np.complex128), min_diag=0.0)
    lam = _spectrum(n, kappa) * (-1.0) ** np.arange(1, n + 1)
    a = (u * lam) @ v.conj().T
    return QlspInstance(a=a, b=_column_sum_state(u), kappa=float(kappa),
                        matrix_class=GENERAL, n_dim=n)


def generate(spec: GeneratorSpec) -> QlspInstance:
    """Dispatch on spec.family."""
    if spec.family == PD_LAPLACIAN:
        return generate_pd(spec)
    if spec.family == NONHERMITIAN_LAPLACIAN:
        return generate_nonhermitian(spec)
    raise InvalidSpec(f"unknown family {spec.family!r}")


def _fmt(x: float) -> str:
    return format(x, ".17g")


def save_instance(inst: QlspInstance, path) -> None:
    """Write an instance in the plain-text v1 format (17 significant digits)."""
    lines = [FORMAT_HEADER, f"N {inst.n_dim}", f"class {inst.matrix_class}"]
    for row in inst.a:
        lines.append(" ".join(f"{_fmt(z.real)} {_fmt(z.imag)}" for z in row))
    lines.append(" ".join(f"{_fmt(z.real)} {_fmt(z.imag)}" for z in inst.b))
    text = "\n".join(lines) + "\n"
    if isinstance(path, io.TextIOBase):
        path.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_complex_row(line: str, n: int, what: str) -> np.ndarray:
    parts = line.split()
    if len(parts) != 2 * n:
        raise ParseError(f"{what}: expected {2 * n} decimals, got {len(parts)}")
    try:
        vals = np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ParseError(f"{what}: {exc}") from exc
    return vals[0::2] + 1j * vals[1::2]


def load_instance(path, allow_rescale: bool = False) -> QlspInstance:
    """Load and validate an instance file.

    The condition number is always recomputed from the singular values of the
    stored matrix (the file format carries none). ||A||_2 must be 1 within
    1e-6 unless ``allow_rescale`` divides A by its norm; b is renormalized.
    """
    if isinstance(path, io.TextIOBase):
        text = path.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 4:
        raise ParseError("file too short")
    if lines[0].strip() != FORMAT_HEADER:
        raise ParseError(f"bad header {lines[0]!r}, expected {FORMAT_HEADER!r}")
    fields = lines[1].split()
    if len(fields) != 2 or fields[0] != "N":
        raise ParseError(f"bad dimension line {lines[1]!r}")
    try:
        n = int(fields[1])
    except ValueError as exc:
        raise ParseError(f"bad dimension {fields[1]!r}") from exc
    if n < 1:
        raise ParseError(f"dimension must be positive, got {n}")
    fields = lines[2].split()
    if len(fields) != 2 or fields[0] != "class" or fields[1] not in MATRIX_CLASSES:
        raise ParseError(f"bad class line {lines[2]!r}")
    matrix_class = fields[1]
    if len(lines) != 3 + n + 1:
        raise ParseError(f"expected {3 + n + 1} lines, got {len(lines)}")

    a = np.array([_parse_complex_row(lines[3 + i], n, f"A row {i}") for i in range(n)])
    b = _parse_complex_row(lines[3 + n], n, "b")
    bnorm = np.linalg.norm(b)
    if bnorm < 1e-12:
        raise ParseError("b is numerically zero")
    b = b / bnorm

    sv = np.linalg.svd(as_matrix(a), compute_uv=False)
    if sv[0] < 1e-300 or sv[-1] / sv[0] < 1e-13:
        raise SingularMatrix(f"smallest singular value ratio {sv[-1] / max(sv[0], 1e-300):.3e}")
    if abs(sv[0] - 1.0) > 1e-6:
        if not allow_rescale:
            raise NormalizationError(
                f"||A||_2 = {sv[0]:.9g}; pass allow_rescale to normalize")
        a = a / sv[0]
        sv = sv / sv[0]
    kappa = float(sv[0] / sv[-1])

    if matrix_class in (HERMITIAN_PD, HERMITIAN_INDEFINITE):
        if hermitian_defect(a) > 1e-10:
            raise ParseError(f"class {matrix_class} but Hermitian defect "
                             f"{hermitian_defect(a):.3e}")
        if matrix_class == HERMITIAN_PD:
            w = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
            if w[0] <= 0:
                raise ParseError(f"class hermitian_pd but min eigenvalue {w[0]:.3e}")
    return QlspInstance(a=a, b=as_state(b), kappa=kappa,
                        matrix_class=matrix_class, n_dim=n)
