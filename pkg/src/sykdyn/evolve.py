"""Time evolution by exact diagonalization or matrix-free Lanczos stepping.

Exact diagonalization handles dense Hamiltonians (and small operator
sums); the Krylov path never materializes the Hamiltonian and is the
large-N route.  Both preserve norms to the documented tolerances and give
bitwise-identical trajectories for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NumericSanityError,
    PropagationError,
    ResourceCapError,
)
from .models import OperatorSum
from .states import StateVector

DENSE_DIM_CAP = 1 << 15
EXACT_EIG_MAX_QUBITS = 12  # auto method switch: <= 2^12 exact, beyond Krylov

KRYLOV_DIM = 30
STEP_TOLERANCE = 1e-10
MAX_SUBSTEPS = 1_000_000


def apply_operator(h: OperatorSum, psi: StateVector) -> StateVector:
    """H|psi> via per-term bitmask rules; result is generally unnormalized."""
    if h.n_qubits != psi.n_qubits:
        raise DimensionMismatchError("operator and state disagree on qubit count")
    return StateVector(psi.n_qubits, h.apply(psi.amplitudes), sector=psi.sector)


@dataclass
class Propagator:
    """Cached evolution context: 'exact-eig' with an eigendecomposition, or
    'krylov' with Lanczos parameters."""

    method: str
    dim: int
    evals: np.ndarray | None = None
    evecs: np.ndarray | None = None
    op: OperatorSum | None = None
    krylov_dim: int = KRYLOV_DIM
    step_tolerance: float = STEP_TOLERANCE

    def evolve_batch(self, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
        """exp(-iHt)|psi0> for every t, returned as a (dim, len(times)) stack."""
        psi0 = np.asarray(psi0, dtype=np.complex128)
        if psi0.shape != (self.dim,):
            raise DimensionMismatchError(f"state length {psi0.shape} != {self.dim}")
        if self.method == "exact-eig":
            coeffs = self.evecs.conj().T @ psi0
            phases = np.exp(-1j * np.outer(self.evals, times))
            out = self.evecs @ (coeffs[:, None] * phases)
            # t = 0 is the identity; skip the eigenbasis round-trip noise
            out[:, np.asarray(times) == 0.0] = psi0[:, None]
            return out
        cols = np.empty((self.dim, len(times)), dtype=np.complex128)
        v = psi0
        t_prev = 0.0
        for k, t in enumerate(times):
            v = _krylov_step_to(self.op, v, t - t_prev, self.krylov_dim, self.step_tolerance)
            t_prev = t
            cols[:, k] = v
        return cols

    def evolve_single(self, psi0: np.ndarray, t: float) -> np.ndarray:
        if self.method == "exact-eig":
            coeffs = self.evecs.conj().T @ np.asarray(psi0, dtype=np.complex128)
            return self.evecs @ (np.exp(-1j * self.evals * t) * coeffs)
        return _krylov_step_to(self.op, psi0, t, self.krylov_dim, self.step_tolerance)


def make_propagator(
    h: OperatorSum | np.ndarray,
    method: str = "auto",
    dense_cap: int = DENSE_DIM_CAP,
    krylov_dim: int = KRYLOV_DIM,
    step_tolerance: float = STEP_TOLERANCE,
) -> Propagator:
    """Pick and prepare an evolution method for the given Hamiltonian.

    Dense arrays always get exact diagonalization.  Operator sums use it up
    to 2^12 and fall back to Krylov beyond, unless overridden.
    """
    if isinstance(h, np.ndarray):
        if h.shape[0] > dense_cap:
            raise ResourceCapError(f"dense dimension {h.shape[0]} exceeds cap {dense_cap}")
        if method == "krylov":
            raise NumericSanityError("krylov method needs an OperatorSum, not a dense matrix")
        evals, evecs = _checked_eigh(h)
        return Propagator("exact-eig", h.shape[0], evals=evals, evecs=evecs)
    if method == "auto":
        method = "exact-eig" if h.dim <= (1 << EXACT_EIG_MAX_QUBITS) else "krylov"
    if method == "exact-eig":
        if h.dim > dense_cap:
            raise ResourceCapError(f"dim {h.dim} exceeds dense cap {dense_cap}")
        evals, evecs = _checked_eigh(h.to_dense(cap=h.n_qubits))
        return Propagator("exact-eig", h.dim, evals=evals, evecs=evecs)
    if method != "krylov":
        raise NumericSanityError(f"unknown method {method!r}")
    return Propagator("krylov", h.dim, op=h, krylov_dim=krylov_dim, step_tolerance=step_tolerance)


def _checked_eigh(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    herm_defect = np.abs(h - h.conj().T).max()
    scale = max(np.abs(h).max(), 1e-300)
    if herm_defect > 1e-10 * scale:
        raise NumericSanityError(f"matrix not Hermitian (defect {herm_defect:.2e})")
    try:
        return np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericSanityError(f"eigendecomposition failed: {exc}") from exc


def evolve_exact(h: np.ndarray, psi0: StateVector, times) -> list[StateVector]:
    """exp(-iHt)|psi0> by full diagonalization of a dense Hermitian H."""
    prop = make_propagator(np.asarray(h))
    cols = prop.evolve_batch(psi0.amplitudes, np.asarray(times, dtype=float))
    return [StateVector(psi0.n_qubits, cols[:, k].copy(), sector=psi0.sector)
            for k in range(cols.shape[1])]


def evolve_krylov(
    h: OperatorSum,
    psi0: StateVector,
    times,
    krylov_dim: int = KRYLOV_DIM,
    step_tolerance: float = STEP_TOLERANCE,
) -> list[StateVector]:
    """Lanczos short-step propagation through the sorted time grid."""
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise NumericSanityError("times must be sorted ascending")
    prop = make_propagator(h, method="krylov", krylov_dim=krylov_dim,
                           step_tolerance=step_tolerance)
    cols = prop.evolve_batch(psi0.amplitudes, times)
    out = []
    for k in range(cols.shape[1]):
        v = cols[:, k]
        drift = abs(np.linalg.norm(v) - 1.0)
        if drift > 1e-8:
            raise PropagationError(f"norm drift {drift:.2e} at t={times[k]}")
        out.append(StateVector(psi0.n_qubits, v.copy(), sector=psi0.sector))
    return out


def _lanczos_basis(op: OperatorSum, v0: np.ndarray, m: int):
    """Lanczos tridiagonalization with full reorthogonalization.

    Returns (V, alphas, betas, beta_next) where V rows are the basis,
    betas are the internal couplings and beta_next the residual coupling
    out of the Krylov space (0 on invariant-subspace breakdown).
    """
    dim = v0.shape[0]
    v_basis = np.empty((m, dim), dtype=np.complex128)
    alphas = np.zeros(m)
    betas = np.zeros(m)
    v_basis[0] = v0
    w = op.apply(v0)
    alphas[0] = np.vdot(v_basis[0], w).real
    w = w - alphas[0] * v_basis[0]
    used = 1
    for j in range(1, m):
        betas[j] = np.linalg.norm(w)
        if betas[j] < 1e-13:
            return v_basis[:used], alphas[:used], betas[1:used], 0.0
        v_basis[j] = w / betas[j]
        # one classical Gram-Schmidt pass keeps the basis orthogonal
        overlaps = v_basis[: j + 1].conj() @ v_basis[j]
        overlaps[j] -= 1.0
        v_basis[j] -= overlaps @ v_basis[: j + 1]
        v_basis[j] /= np.linalg.norm(v_basis[j])
        w = op.apply(v_basis[j])
        alphas[j] = np.vdot(v_basis[j], w).real
        w = w - alphas[j] * v_basis[j] - betas[j] * v_basis[j - 1]
        used = j + 1
    return v_basis[:used], alphas[:used], betas[1:used], float(np.linalg.norm(w))


def _krylov_step_to(op: OperatorSum, v: np.ndarray, dt: float, m: int, tol: float) -> np.ndarray:
    """Advance exp(-iH dt)|v> with adaptive substepping.

    Substep error is the classical Lanczos residual estimate
    beta_next * |last component of expm(-iT dt) e1|; the substep is halved
    until the estimate passes.
    """
    if dt == 0.0:
        return v.copy()
    remaining = dt
    substeps = 0
    while abs(remaining) > 1e-15 * abs(dt):
        step = remaining
        nrm = np.linalg.norm(v)
        basis, alphas, betas, beta_next = _lanczos_basis(op, v / nrm, m)
        theta, w_small = scipy.linalg.eigh_tridiagonal(alphas, betas)
        e1_coords = w_small[0, :]
        while True:
            substeps += 1
            if substeps > MAX_SUBSTEPS:
                raise PropagationError(
                    f"no convergence after {MAX_SUBSTEPS} substeps "
                    f"(dt={dt}, krylov_dim={m}, tol={tol})"
                )
            small = w_small @ (np.exp(-1j * theta * step) * e1_coords)
            err = beta_next * abs(small[-1])
            if err <= tol:
                break
            if abs(step) < 1e-12 * abs(dt):
                raise PropagationError(
                    f"substep collapsed below 1e-12*dt with error {err:.2e} "
                    f"(dt={dt}, krylov_dim={m}, tol={tol})"
                )
            step /= 2.0
        v = nrm * (small @ basis)
        remaining -= step
    return v


def heisenberg_operator_apply(
    prop: Propagator, o: OperatorSum, psi: StateVector, t: float
) -> StateVector:
    """exp(+iHt) O exp(-iHt) |psi> via two propagations and one apply."""
    fwd = prop.evolve_single(psi.amplitudes, t)
    mid = o.apply(fwd)
    back = prop.evolve_single(mid, -t)
    return StateVector(psi.n_qubits, back, sector=psi.sector)
