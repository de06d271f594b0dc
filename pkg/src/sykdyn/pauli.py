"""Bitmask algebra for signed Pauli strings and Jordan-Wigner Majorana operators.

A string on n qubits is stored as two n-bit masks plus a phase in
{1, i, -1, -i}.  Qubit j (1-based, the j-th factor of the tensor product,
most significant index bit) owns mask bit (n - j), so masks can be applied
to basis-state indices with plain integer ops.  The represented matrix is

    phase * prod_j X_j^{x_j} Z_j^{z_j}

i.e. a site with both bits set carries X.Z = -i.Y, and a literal Y factor
is encoded with a compensating +i in the phase.  All phase arithmetic is
exact: products of {+-1, +-i} never leave that set in IEEE floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatchError, InvalidSpecError, ResourceCapError

_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

DENSE_QUBIT_CAP = 14

MAJORANA_COEFF = 1.0 / math.sqrt(2.0)  # makes {psi_i, psi_j} = delta_ij exactly


def popcount(arr: np.ndarray) -> np.ndarray:
    """Per-element set-bit count for an integer array."""
    return np.bitwise_count(arr)


def parity_signs(arr: np.ndarray) -> np.ndarray:
    """(-1)**popcount as a float array; used for Z-mask sign flips."""
    return 1.0 - 2.0 * (np.bitwise_count(arr).astype(np.float64) % 2.0)


@dataclass(frozen=True)
class PauliString:
    n_qubits: int
    x_mask: int
    z_mask: int
    phase: complex = 1 + 0j

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidSpecError(f"n_qubits must be >= 1, got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise InvalidSpecError("mask wider than n_qubits")
        if self.phase not in _PHASES:
            raise InvalidSpecError(f"phase must be a fourth root of unity, got {self.phase}")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_label(cls, label: str, phase: complex = 1 + 0j) -> "PauliString":
        """Build from a left-to-right letter string, e.g. ``"XIZY"``.

        Y letters are encoded exactly (the +i per Y goes into the phase), so
        ``from_label(s).to_dense()`` equals the literal Kronecker product of
        the letters times ``phase``.
        """
        n = len(label)
        x = z = 0
        ph = complex(phase)
        for j, c in enumerate(label.upper()):
            bit = 1 << (n - 1 - j)
            if c == "I":
                continue
            elif c == "X":
                x |= bit
            elif c == "Z":
                z |= bit
            elif c == "Y":
                x |= bit
                z |= bit
                ph *= 1j
            else:
                raise InvalidSpecError(f"unknown Pauli letter {c!r}")
        return cls(n, x, z, ph)

    @property
    def y_count(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    @property
    def weight(self) -> int:
        """Number of non-identity sites."""
        return (self.x_mask | self.z_mask).bit_count()

    @property
    def is_hermitian(self) -> bool:
        # dagger flips the phase's sign once per Y site (since (XZ)^dag = -XZ)
        return self.phase.conjugate() * (-1) ** self.y_count == self.phase

    def label(self) -> str:
        letters = []
        for j in range(self.n_qubits):
            bit = 1 << (self.n_qubits - 1 - j)
            xb, zb = bool(self.x_mask & bit), bool(self.z_mask & bit)
            letters.append("IXZY"[xb + 2 * zb] if not (xb and zb) else "Y")
        return "".join(letters)

    def __repr__(self):
        # display the coefficient of the literal letter string (Y sites fold
        # their internal +i back out)
        shown = self.phase * (-1j) ** (self.y_count % 4)
        pretty = {1 + 0j: "+", 1j: "+i*", -1 + 0j: "-", -1j: "-i*"}[shown]
        return f"PauliString({pretty}{self.label()})"

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatchError("qubit counts differ")
        anti = (self.x_mask & other.z_mask).bit_count() + (self.z_mask & other.x_mask).bit_count()
        return anti % 2 == 0

    def dagger(self) -> "PauliString":
        return replace(self, phase=self.phase.conjugate() * (-1) ** self.y_count)

    def to_dense(self, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
        """Dense matrix of the represented operator (small n only)."""
        if self.n_qubits > cap:
            raise ResourceCapError(f"to_dense capped at {cap} qubits, got {self.n_qubits}")
        dim = 1 << self.n_qubits
        idx = np.arange(dim, dtype=np.int64)
        m = np.zeros((dim, dim), dtype=np.complex128)
        m[idx ^ self.x_mask, idx] = self.phase * parity_signs(idx & self.z_mask)
        return m

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-free action on a state vector (or a stack of columns)."""
        dim = 1 << self.n_qubits
        if vec.shape[0] != dim:
            raise DimensionMismatchError(f"vector length {vec.shape[0]} != 2^{self.n_qubits}")
        src = np.arange(dim, dtype=np.int64) ^ self.x_mask
        signs = self.phase * parity_signs(src & self.z_mask)
        return signs[(...,) + (None,) * (vec.ndim - 1)] * vec[src]


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Exact product a.b of two strings, phase tracked symplectically."""
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError(
            f"cannot multiply strings on {a.n_qubits} and {b.n_qubits} qubits"
        )
    # Z^za past X^xb picks up (-1) per overlapping site
    sign = -1 if (a.z_mask & b.x_mask).bit_count() % 2 else 1
    return PauliString(
        a.n_qubits,
        a.x_mask ^ b.x_mask,
        a.z_mask ^ b.z_mask,
        a.phase * b.phase * sign,
    )


def _qubit_bit(n_qubits: int, j: int) -> int:
    return 1 << (n_qubits - j)


@lru_cache(maxsize=None)
def majorana_string(i: int, n_majorana: int) -> tuple[float, PauliString]:
    """Jordan-Wigner Majorana operator psi_i on N/2 qubits.

    psi_{2k-1} = c * Z_1..Z_{k-1} X_k, psi_{2k} = c * Z_1..Z_{k-1} Y_k with
    c = 1/sqrt(2), so that {psi_i, psi_j} = delta_ij * identity exactly.
    Returns (coefficient, string).
    """
    if n_majorana % 2 or n_majorana < 2:
        raise InvalidSpecError(f"Majorana count must be even and >= 2, got {n_majorana}")
    if not 1 <= i <= n_majorana:
        raise InvalidSpecError(f"Majorana index {i} outside [1, {n_majorana}]")
    n = n_majorana // 2
    k = (i + 1) // 2
    z = 0
    for q in range(1, k):
        z |= _qubit_bit(n, q)
    x = _qubit_bit(n, k)
    if i % 2 == 1:
        return MAJORANA_COEFF, PauliString(n, x, z)
    # even index: Y on qubit k, i.e. both bits plus a +i phase
    return MAJORANA_COEFF, PauliString(n, x, z | x, 1j)


def spin_operator(a: int, n_spins: int) -> PauliString:
    """Single-site sigma_x (a = 2j-1) or sigma_y (a = 2j) on spin j."""
    if n_spins < 1:
        raise InvalidSpecError(f"n_spins must be >= 1, got {n_spins}")
    if not 1 <= a <= 2 * n_spins:
        raise InvalidSpecError(f"operator index {a} outside [1, {2 * n_spins}]")
    j = (a + 1) // 2
    bit = _qubit_bit(n_spins, j)
    if a % 2 == 1:
        return PauliString(n_spins, bit, 0)
    return PauliString(n_spins, bit, bit, 1j)
