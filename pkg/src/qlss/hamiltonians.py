"""Hamiltonian pairs (H0, H1), embedded states, and spectral-gap models.

Three embeddings cover the matrix classes:

* Hermitian positive definite: dimension 2N, one ancilla. H0 flips the
  ancilla against the projector Q_b = I - |b><b|; H1 replaces the projector
  block with A Q_b. The zero eigenspace is two-dimensional everywhere along
  the interpolation: the adiabatic path state plus a "dark" state that both
  endpoint Hamiltonians annihilate and that the dynamics never populates.
* Hermitian (indefinite allowed): dimension 4N, two ancillas, built around
  the projector onto the complement of |+, b>.
* General invertible: the matrix is dilated into the Hermitian block form
  [[0, A], [A†, 0]] (same condition number, symmetric +/- spectrum) and then
  fed through the Hermitian embedding, for 8N total dimension.

The gap of the interpolated Hamiltonian is bounded below by
prefactor * (1 - f + f/kappa) with prefactor 1 for the positive definite
case and 1/sqrt(2) otherwise.

Ancilla ordering: ancilla qubits are the most significant tensor factors, so
an embedded state |0, b> is the concatenation (b, 0).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NotHermitian, OutOfRange, WrongClass
from .linalg import as_matrix, as_state, hermitian_defect, solve_linear
from .problems import GENERAL, HERMITIAN_INDEFINITE, HERMITIAN_PD, QlspInstance

_PLUS = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)
_MINUS = np.array([1.0, -1.0], dtype=np.complex128) / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class HamiltonianEmbedding:
    """Interpolation endpoints plus the distinguished embedded states."""

    h0: np.ndarray
    h1: np.ndarray
    dim: int
    initial_state: np.ndarray
    target_state: np.ndarray
    dark_state: np.ndarray
    gap_prefactor: float
    kappa: float
    ancilla_qubits: int


@dataclass(frozen=True)
class GapModel:
    kappa: float
    prefactor: float


def gap_model(emb: HamiltonianEmbedding) -> GapModel:
    return GapModel(kappa=emb.kappa, prefactor=emb.gap_prefactor)


def gap_lower_bound(model: GapModel, f: float) -> float:
    """prefactor * (1 - f + f/kappa): positive and decreasing on [0, 1]."""
    if not 0.0 <= f <= 1.0:
        raise OutOfRange(f"f = {f} outside [0, 1]")
    return model.prefactor * (1.0 - f + f / model.kappa)


def interpolate(emb: HamiltonianEmbedding, f: float) -> np.ndarray:
    """(1 - f) H0 + f H1."""
    if not 0.0 <= f <= 1.0:
        raise OutOfRange(f"f = {f} outside [0, 1]")
    return (1.0 - f) * emb.h0 + f * emb.h1


def _offdiag_block(m: np.ndarray) -> np.ndarray:
    """[[0, m], [m†, 0]]: Hermitian by construction."""
    n = m.shape[0]
    z = np.zeros((n, n), dtype=np.complex128)
    return np.block([[z, m], [m.conj().T, z]])


def build_pd_embedding(inst: QlspInstance) -> HamiltonianEmbedding:
    """2N-dimensional embedding for a Hermitian positive definite instance."""
    if inst.matrix_class != HERMITIAN_PD:
        raise WrongClass(f"expected {HERMITIAN_PD}, got {inst.matrix_class}")
    n = inst.n_dim
    b = as_state(inst.b)
    qb = np.eye(n, dtype=np.complex128) - np.outer(b, b.conj())
    h0 = _offdiag_block(qb)
    h1 = _offdiag_block(inst.a @ qb)
    x = solve_linear(inst.a, b)
    zero = np.zeros(n, dtype=np.complex128)
    return HamiltonianEmbedding(
        h0=h0, h1=h1, dim=2 * n,
        initial_state=np.concatenate([b, zero]),
        target_state=np.concatenate([x, zero]),
        dark_state=np.concatenate([zero, b]),
        gap_prefactor=1.0, kappa=inst.kappa, ancilla_qubits=1)


def build_indefinite_embedding(a_herm, b, kappa: float) -> HamiltonianEmbedding:
    """4N-dimensional embedding for a Hermitian (possibly indefinite) matrix.

    The initial state is |0, -, b>, the dark state |1, +, b>, and the target
    |0, +, x> with x the normalized solution.
    """
    a = as_matrix(a_herm)
    if hermitian_defect(a) > 1e-10:
        raise NotHermitian(f"Hermitian defect {hermitian_defect(a):.3e}")
    rhs = as_state(b)
    n = rhs.shape[0]
    plus_b = np.kron(_PLUS, rhs)
    q = np.eye(2 * n, dtype=np.complex128) - np.outer(plus_b, plus_b.conj())
    sz = np.diag([1.0, -1.0]).astype(np.complex128)
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    h0 = _offdiag_block(np.kron(sz, np.eye(n, dtype=np.complex128)) @ q)
    h1 = _offdiag_block(np.kron(sx, a) @ q)
    x = solve_linear(a, rhs)
    zero = np.zeros(2 * n, dtype=np.complex128)
    return HamiltonianEmbedding(
        h0=h0, h1=h1, dim=4 * n,
        initial_state=np.concatenate([np.kron(_MINUS, rhs), zero]),
        target_state=np.concatenate([np.kron(_PLUS, x), zero]),
        dark_state=np.concatenate([zero, plus_b]),
        gap_prefactor=1.0 / np.sqrt(2.0), kappa=float(kappa), ancilla_qubits=2)


def build_general_embedding(inst: QlspInstance) -> HamiltonianEmbedding:
    """8N-dimensional embedding for a general invertible matrix.

    Dilates A to the Hermitian [[0, A], [A†, 0]] (condition number preserved,
    spectrum +/- the singular values of A) with right-hand side |+, b>, then
    reuses the Hermitian embedding. The target is the normalized solution of
    the dilated system, which encodes both A^-1 b and (A†)^-1 b blocks.
    """
    a = as_matrix(inst.a)
    b = as_state(inst.b)
    dilation = _offdiag_block(a)
    frak_b = np.kron(_PLUS, b)
    emb = build_indefinite_embedding(dilation, frak_b, inst.kappa)
    return replace(emb, ancilla_qubits=3)


def build_embedding(inst: QlspInstance) -> HamiltonianEmbedding:
    """Dispatch on the instance matrix class."""
    if inst.matrix_class == HERMITIAN_PD:
        return build_pd_embedding(inst)
    if inst.matrix_class == HERMITIAN_INDEFINITE:
        return build_indefinite_embedding(inst.a, inst.b, inst.kappa)
    if inst.matrix_class == GENERAL:
        return build_general_embedding(inst)
    raise WrongClass(f"unknown matrix class {inst.matrix_class!r}")
