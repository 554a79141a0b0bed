"""Trotterized integration of the scheduled adiabatic dynamics.

One evolution step at scaled time s_m applies
exp(-i T h (1-f(s_m)) H0) after exp(-i T h f(s_m) H1), with h = 1/M and
s_m = m h. Each factor is applied exactly through the (one-time)
eigendecompositions of H0 and H1, so a step costs two dense matrix-vector
products in the shared eigenbasis-change matrix regardless of runtime.

The step count is tied to the runtime by a fixed physical step cap:
M = ceil(T / 0.2), so the error of the first-order splitting stays
commensurate across runtimes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidPlan
from .hamiltonians import HamiltonianEmbedding
from .linalg import as_state, hermitian_eigendecompose
from .schedules import Schedule

TROTTER_STEP = 0.2
NORM_DRIFT_TOL = 1e-10
TRACE_POINTS = 1000


@dataclass(frozen=True, eq=False)
class EvolutionPlan:
    """Runtime, step count, schedule, and trace flag for one evolution."""

    runtime_T: float
    step_count_M: int
    schedule: Schedule
    record_trace: bool = False

    @property
    def step_h(self) -> float:
        return 1.0 / self.step_count_M


def plan_for_runtime(runtime_T: float, schedule: Schedule,
                     record_trace: bool = False,
                     max_step: float = TROTTER_STEP) -> EvolutionPlan:
    """Plan with the smallest step count keeping the physical step at or
    below ``max_step`` (default 0.2)."""
    if not runtime_T > 0.0:
        raise InvalidPlan(f"runtime must be positive, got {runtime_T}")
    if not 0.0 < max_step <= TROTTER_STEP + 1e-12:
        raise InvalidPlan(f"max_step {max_step} outside (0, {TROTTER_STEP}]")
    ratio = runtime_T / max_step
    m = int(round(ratio)) if abs(ratio - round(ratio)) < 1e-9 else int(np.ceil(ratio))
    m = max(m, 1)
    return EvolutionPlan(runtime_T=float(runtime_T), step_count_M=m,
                         schedule=schedule, record_trace=record_trace)


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    """Final state plus diagnostics.

    ``trace`` is None or an array of (s, fidelity, dark_overlap) rows sampled
    every max(1, floor(M/1000)) steps.
    """

    final_state: np.ndarray
    fidelity: float
    density_error: float
    dark_overlap_max: float
    trace: np.ndarray | None = None
    norm_drift_max: float = 0.0


def fidelity(psi, target) -> float:
    """|<psi|target>|^2 for unit-norm states."""
    a = as_state(psi)
    b = as_state(target)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"state dims {a.shape[0]} != {b.shape[0]}")
    for name, v in (("psi", a), ("target", b)):
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-8:
            raise ValueError(f"{name} norm {nrm} deviates from 1 by more than 1e-8")
    return float(abs(np.vdot(a, b)) ** 2)


def density_error(psi, target) -> float:
    """2-norm distance between the two pure density matrices.

    For unit states this equals sqrt(1 - fidelity): the nonzero spectrum of
    |psi><psi| - |t><t| is +/- that square root.
    """
    return float(np.sqrt(max(0.0, 1.0 - fidelity(psi, target))))


class TrotterPropagator:
    """Reusable evolution engine for one embedding.

    Diagonalizes H0 and H1 once; every Trotter factor is then a diagonal
    phase in the corresponding eigenbasis, and a step needs only the two
    basis-change products. Construct once, call :meth:`evolve` for as many
    plans as needed (each call is independent and deterministic).
    """

    _CHUNK = 4096

    def __init__(self, emb: HamiltonianEmbedding):
        self.emb = emb
        eig0 = hermitian_eigendecompose(emb.h0)
        eig1 = hermitian_eigendecompose(emb.h1)
        self._lam0 = eig0.eigenvalues
        self._lam1 = eig1.eigenvalues
        self._v0 = eig0.eigenvectors
        v0h = self._v0.conj().T
        self._to0 = v0h @ eig1.eigenvectors          # basis-1 coeffs -> basis-0
        self._to1 = self._to0.conj().T               # basis-0 coeffs -> basis-1
        self._init0 = v0h @ emb.initial_state
        self._targ0c = (v0h @ emb.target_state).conj()
        self._dark0c = (v0h @ emb.dark_state).conj()

    def evolve(self, plan: EvolutionPlan, renormalize: bool = True) -> EvolutionResult:
        if plan.runtime_T * plan.step_h > TROTTER_STEP + 1e-12:
            raise InvalidPlan(
                f"physical step {plan.runtime_T * plan.step_h:.6g} exceeds {TROTTER_STEP}")
        m_total = plan.step_count_M
        tau = plan.runtime_T / m_total
        fvals = plan.schedule.samples(m_total)
        stride = max(1, m_total // TRACE_POINTS)
        trace = [] if plan.record_trace else None

        c = self._init0.copy()
        lam0, lam1 = self._lam0, self._lam1
        to0, to1 = self._to0, self._to1
        dark0c, targ0c = self._dark0c, self._targ0c
        dark_max = 0.0
        drift_max = 0.0
        for start in range(0, m_total, self._CHUNK):
            fs = fvals[start:start + self._CHUNK]
            ph1 = np.exp(np.outer(fs, (-1j * tau) * lam1))
            ph0 = np.exp(np.outer(1.0 - fs, (-1j * tau) * lam0))
            for i in range(fs.shape[0]):
                c = to1 @ c
                c *= ph1[i]
                c = to0 @ c
                c *= ph0[i]
                overlap = abs(dark0c @ c)
                if overlap > dark_max:
                    dark_max = overlap
                drift = abs(float(np.vdot(c, c).real) ** 0.5 - 1.0)
                if drift > drift_max:
                    drift_max = drift
                if renormalize and drift > NORM_DRIFT_TOL:
                    c /= np.linalg.norm(c)
                step = start + i + 1
                if trace is not None and (step % stride == 0 or step == m_total):
                    trace.append((step / m_total, abs(targ0c @ c) ** 2, overlap))

        fid = float(abs(targ0c @ c) ** 2)
        return EvolutionResult(
            final_state=self._v0 @ c,
            fidelity=fid,
            density_error=float(np.sqrt(max(0.0, 1.0 - fid))),
            dark_overlap_max=float(dark_max),
            trace=np.array(trace) if trace is not None else None,
            norm_drift_max=float(drift_max))


def evolve(emb: HamiltonianEmbedding, plan: EvolutionPlan,
           renormalize: bool = True) -> EvolutionResult:
    """One-shot evolution; builds a fresh propagator for the embedding."""
    if emb.h0.shape[0] != emb.dim:
        raise DimensionMismatch(f"embedding dim {emb.dim} != h0 dim {emb.h0.shape[0]}")
    return TrotterPropagator(emb).evolve(plan, renormalize=renormalize)


def write_trace_csv(path, trace: np.ndarray) -> None:
    """Dump a fidelity trace as ``s,fidelity,dark_overlap`` rows."""
    lines = ["s,fidelity,dark_overlap"]
    for s, fid, dark in trace:
        lines.append(f"{s!r},{fid!r},{dark!r}")
    text = "\n".join(lines) + "\n"
    if isinstance(path, io.TextIOBase):
        path.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
