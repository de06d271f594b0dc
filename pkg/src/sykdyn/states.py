"""Initial states, bipartitions, partial trace and von Neumann entropy.

Qubit 1 is the leftmost tensor factor (most significant index bit), so
reshaping an amplitude vector to (2^k, 2^(n-k)) splits leading qubits from
trailing ones.  The pipelines keep the leading block and trace the
trailing qubits by default.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidSpecError,
    NumericSanityError,
    ResourceCapError,
)
from .models import FULL, SECTORS, sector_indices

REDUCED_QUBIT_CAP = 12
EIG_CLIP = 1e-12


@dataclass(frozen=True)
class Bipartition:
    """Ordered kept-qubit subset; the complement is traced out."""

    n_qubits: int
    kept: tuple[int, ...]

    def __post_init__(self):
        if not self.kept:
            raise InvalidSpecError("kept set must be nonempty")
        if sorted(set(self.kept)) != list(self.kept):
            raise InvalidSpecError("kept qubits must be sorted and unique")
        if self.kept[0] < 1 or self.kept[-1] > self.n_qubits:
            raise InvalidSpecError("kept qubits outside [1, n_qubits]")
        if len(self.kept) >= self.n_qubits:
            raise InvalidSpecError("kept set must be a proper subset")

    @classmethod
    def leading(cls, n_qubits: int, n_kept: int) -> "Bipartition":
        return cls(n_qubits, tuple(range(1, n_kept + 1)))

    @classmethod
    def from_traced_count(cls, n_qubits: int, n_traced: int) -> "Bipartition":
        """Keep the leading block, trace the trailing n_traced qubits."""
        return cls.leading(n_qubits, n_qubits - n_traced)

    @classmethod
    def half(cls, n_qubits: int) -> "Bipartition":
        return cls.leading(n_qubits, n_qubits // 2)

    @classmethod
    def from_fraction(cls, n_qubits: int, fraction: float) -> "Bipartition":
        """Subsystem fraction l -> kept = round(l*n), swapped so kept <= traced."""
        k = round(fraction * n_qubits)
        k = min(max(k, 1), n_qubits - 1)
        if k > n_qubits - k:
            k = n_qubits - k
        return cls.leading(n_qubits, k)

    @property
    def traced(self) -> tuple[int, ...]:
        kept = set(self.kept)
        return tuple(q for q in range(1, self.n_qubits + 1) if q not in kept)

    @property
    def dims(self) -> tuple[int, int]:
        """(kept dimension, traced dimension)."""
        return 1 << len(self.kept), 1 << (self.n_qubits - len(self.kept))

    @property
    def schmidt_dims(self) -> tuple[int, int]:
        """(smaller, larger) subsystem dimensions, for bound formulas."""
        a, b = self.dims
        return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray
    sector: str = FULL

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise InvalidSpecError(f"sector must be one of {SECTORS}")
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise DimensionMismatchError(
                f"amplitude length {self.amplitudes.shape} != 2^{self.n_qubits}"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def product_state(n_qubits: int) -> StateVector:
    """(|0> + |1>)/sqrt(2) on every qubit: uniform amplitude 2^(-n/2)."""
    if n_qubits < 1:
        raise InvalidSpecError("need at least one qubit")
    dim = 1 << n_qubits
    return StateVector(n_qubits, np.full(dim, dim**-0.5, dtype=np.complex128))


def max_entangled_state(bp: Bipartition) -> StateVector:
    """Uniform-Schmidt state across the cut: S = ln(min(dims)) exactly.

    For equal halves this is (1/sqrt(n)) sum_i |i>|i>; for unequal cuts the
    smaller side is maximally entangled with the first basis states of the
    larger one.
    """
    dim_k, dim_t = bp.dims
    rank = min(dim_k, dim_t)
    mat = np.zeros((dim_k, dim_t), dtype=np.complex128)
    mat[np.arange(rank), np.arange(rank)] = rank**-0.5
    amps = _unshuffle(mat.reshape(-1), bp)
    return StateVector(bp.n_qubits, amps)


def _axis_order(bp: Bipartition) -> list[int]:
    return [q - 1 for q in bp.kept] + [q - 1 for q in bp.traced]


def _shuffle(amplitudes: np.ndarray, bp: Bipartition) -> np.ndarray:
    """Amplitudes -> (kept_dim, traced_dim) matrix with kept axes leading."""
    t = amplitudes.reshape([2] * bp.n_qubits)
    return t.transpose(_axis_order(bp)).reshape(bp.dims)

def _unshuffle(flat: np.ndarray, bp: Bipartition) -> np.ndarray:
    order = _axis_order(bp)
    inverse = np.argsort(order)
    return flat.reshape([2] * bp.n_qubits).transpose(inverse).reshape(-1)


def reduced_density(psi: StateVector, bp: Bipartition, cap: int = REDUCED_QUBIT_CAP) -> np.ndarray:
    """Partial trace over bp.traced; PSD Hermitian matrix on the kept side."""
    if bp.n_qubits != psi.n_qubits:
        raise DimensionMismatchError("bipartition and state disagree on qubit count")
    if len(bp.kept) > cap:
        raise ResourceCapError(f"kept side capped at {cap} qubits, got {len(bp.kept)}")
    mat = _shuffle(psi.amplitudes, bp)
    rho = mat @ mat.conj().T
    return rho


def von_neumann(rho: np.ndarray, clip: float = EIG_CLIP) -> float:
    """-Tr(rho ln rho) in nats, with 0 ln 0 = 0."""
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-8:
        raise NumericSanityError(f"density matrix trace {tr} deviates from 1")
    evals = np.linalg.eigvalsh(rho)
    evals = np.where(evals < clip, 0.0, evals)
    nz = evals[evals > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def entanglement_entropy(psi: StateVector, bp: Bipartition) -> float:
    """Entropy across the cut via the Schmidt spectrum (no density matrix)."""
    s = np.linalg.svd(_shuffle(psi.amplitudes, bp), compute_uv=False)
    p = s * s
    p = p[p > EIG_CLIP]
    return float(-np.sum(p * np.log(p)))


def batched_entropy(columns: np.ndarray, bp: Bipartition) -> np.ndarray:
    """Entanglement entropy of each column of a (dim, T) state stack."""
    n = bp.n_qubits
    if columns.shape[0] != 1 << n:
        raise DimensionMismatchError("column length mismatch")
    t = columns.T.reshape([-1] + [2] * n)
    t = t.transpose([0] + [a + 1 for a in _axis_order(bp)]).reshape((-1,) + bp.dims)
    svals = np.linalg.svd(t, compute_uv=False)
    p = svals * svals
    p = np.where(p > EIG_CLIP, p, 1.0)  # ln 1 = 0 removes clipped weights
    return -np.sum(p * np.log(p), axis=1)


def project_to_sector(psi: StateVector, sector: str) -> StateVector:
    """Restrict support to a parity sector and renormalize."""
    if sector == FULL:
        return psi
    idx = sector_indices(psi.n_qubits, sector)
    amps = np.zeros_like(psi.amplitudes)
    amps[idx] = psi.amplitudes[idx]
    nrm = np.linalg.norm(amps)
    if nrm < 1e-15:
        raise NumericSanityError(f"state has no weight in the {sector} sector")
    return StateVector(psi.n_qubits, amps / nrm, sector=sector)


def embed_block(block_vec: np.ndarray, indices: np.ndarray, n_qubits: int, sector: str) -> StateVector:
    """Lift a sector-block coefficient vector to the full Hilbert space."""
    if len(block_vec) != len(indices):
        raise DimensionMismatchError("block vector and index map disagree")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[indices] = block_vec
    return StateVector(n_qubits, amps, sector=sector)
