"""Random SYK-variant Hamiltonians as Pauli-string sums, plus parity blocks.

Variants and their coupling laws:

* ``syk`` / ``sparse-syk``: quadruples i<j<k<l of N Majoranas, each kept
  with probability p, Gaussian couplings, prefactor sqrt(6/(p N^3)).
* ``binary-syk``: exactly kappa quadruples, couplings +-1 split evenly
  (majority sign of an odd kappa decided by a fair coin), p = kappa/C(N,4).
* ``spin-syk``: quadruples of the 2n single-site x/y spin operators, a
  factor i^eta restoring hermiticity, and a global 1/4 so the eigenvalue
  variance matches the Majorana variants at N = 2 n_spins.

All builders are pure functions of (spec, seed); identical inputs yield
identical term lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidSpecError,
    ResourceCapError,
    SymmetryViolationError,
)
from .pauli import (
    MAJORANA_COEFF,
    PauliString,
    majorana_string,
    parity_signs,
    pauli_mul,
    popcount,
    spin_operator,
)

MAJORANA_VARIANTS = ("syk", "sparse-syk", "binary-syk")
SPIN_VARIANTS = ("spin-syk",)
VARIANTS = MAJORANA_VARIANTS + SPIN_VARIANTS

SPIN_GLOBAL_SCALE = 0.25

EVEN, ODD, FULL = "even", "odd", "full"
SECTORS = (EVEN, ODD, FULL)


@dataclass(frozen=True)
class ModelSpec:
    """One random-Hamiltonian draw: variant, size, sparseness, seed.

    ``n`` counts Majorana fermions for the SYK family and spins for
    spin-syk.  ``p`` is the Bernoulli retention probability; ``kappa`` the
    exact nonzero-coupling count (binary-syk only).
    """

    variant: str
    n: int
    p: float = 1.0
    kappa: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidSpecError(f"unknown variant {self.variant!r}; pick from {VARIANTS}")
        if self.variant in MAJORANA_VARIANTS:
            if self.n % 2 or self.n < 4:
                raise InvalidSpecError(f"Majorana count must be even and >= 4, got {self.n}")
        elif self.n < 2:
            raise InvalidSpecError(f"spin-syk needs >= 2 spins, got {self.n}")
        if self.variant == "binary-syk":
            if self.kappa is None:
                raise InvalidSpecError("binary-syk requires kappa")
            if not 1 <= self.kappa <= math.comb(self.n, 4):
                raise InvalidSpecError(
                    f"kappa={self.kappa} outside [1, C({self.n},4)={math.comb(self.n, 4)}]"
                )
        elif not 0.0 < self.p <= 1.0:
            raise InvalidSpecError(f"retention probability p={self.p} outside (0, 1]")

    @property
    def n_qubits(self) -> int:
        return self.n if self.variant in SPIN_VARIANTS else self.n // 2

    @property
    def n_operators(self) -> int:
        """Number of elementary anticommuting operators (Majoranas or 2*spins)."""
        return 2 * self.n if self.variant in SPIN_VARIANTS else self.n

    @property
    def retention(self) -> float:
        if self.variant == "binary-syk":
            return self.kappa / math.comb(self.n, 4)
        return self.p


class OperatorSum:
    """Immutable coefficient-weighted sum of Hermitian Pauli strings.

    Duplicate (x_mask, z_mask) pairs are merged on construction; every
    stored term has a real coefficient and a phase in {+1, +i} chosen so
    the term is self-adjoint.
    """

    __slots__ = ("n_qubits", "terms", "_xs", "_zs", "_weights")

    def __init__(self, n_qubits: int, terms: Iterable[tuple[float, PauliString]] = ()):
        self.n_qubits = n_qubits
        merged: dict[tuple[int, int], complex] = {}
        for coeff, s in terms:
            if s.n_qubits != n_qubits:
                raise DimensionMismatchError(
                    f"term on {s.n_qubits} qubits in a {n_qubits}-qubit sum"
                )
            key = (s.x_mask, s.z_mask)
            merged[key] = merged.get(key, 0j) + coeff * s.phase
        out = []
        for (x, z), w in merged.items():
            odd_y = (x & z).bit_count() % 2
            # Hermiticity forces w imaginary for odd Y count, real otherwise
            bad = abs(w.real) if odd_y else abs(w.imag)
            if bad > 1e-12 * max(1.0, abs(w)):
                raise InvalidSpecError("non-Hermitian term in OperatorSum")
            if odd_y:
                coeff, phase = w.imag, 1j
            else:
                coeff, phase = w.real, 1 + 0j
            if coeff != 0.0:
                out.append((float(coeff), PauliString(n_qubits, x, z, phase)))
        self.terms = tuple(out)
        self._xs = np.array([s.x_mask for _, s in self.terms], dtype=np.int64)
        self._zs = np.array([s.z_mask for _, s in self.terms], dtype=np.int64)
        self._weights = np.array([c * s.phase for c, s in self.terms], dtype=np.complex128)

    @property
    def term_count(self) -> int:
        return len(self.terms)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """H @ vec without materializing H; vec may be (dim,) or (dim, k)."""
        if vec.shape[0] != self.dim:
            raise DimensionMismatchError(f"vector length {vec.shape[0]} != {self.dim}")
        idx = np.arange(self.dim, dtype=np.int64)
        out = np.zeros(vec.shape, dtype=np.complex128)
        tail = (None,) * (vec.ndim - 1)
        for x, z, w in zip(self._xs, self._zs, self._weights):
            src = idx ^ x
            out += (w * parity_signs(src & z))[(...,) + tail] * vec[src]
        return out

    def to_dense(self, cap: int = 14) -> np.ndarray:
        if self.n_qubits > cap:
            raise ResourceCapError(f"dense build capped at {cap} qubits, got {self.n_qubits}")
        dim = self.dim
        idx = np.arange(dim, dtype=np.int64)
        h = np.zeros((dim, dim), dtype=np.complex128)
        for x, z, w in zip(self._xs, self._zs, self._weights):
            h[idx ^ x, idx] += w * parity_signs(idx & z)
        return h

    def __repr__(self):
        return f"OperatorSum(n_qubits={self.n_qubits}, terms={self.term_count})"


class HamiltonianStats(NamedTuple):
    term_count: int
    trace_h2_over_dim: float
    max_coeff: float


def hamiltonian_stats(h: OperatorSum) -> HamiltonianStats:
    """Exact Tr(H^2)/dim from Pauli orthogonality (= sum of coeff^2)."""
    coeffs = np.array([c for c, _ in h.terms])
    if coeffs.size == 0:
        return HamiltonianStats(0, 0.0, 0.0)
    return HamiltonianStats(
        h.term_count, float(np.sum(coeffs**2)), float(np.max(np.abs(coeffs)))
    )


def sigma2_syk(n_majorana: int) -> float:
    """Eigenvalue variance 6 C(N,4) / (2^4 N^3) shared by all variants."""
    return 6.0 * math.comb(n_majorana, 4) / (2**4 * n_majorana**3)


def target_variance(spec: ModelSpec) -> float:
    """Eigenvalue variance the built Hamiltonian is normalized to."""
    return sigma2_syk(spec.n_operators)


def _quadruples(n_ops: int) -> list[tuple[int, int, int, int]]:
    return list(combinations(range(1, n_ops + 1), 4))


def majorana_product(indices, n_majorana) -> tuple[float, PauliString]:
    """Product of Majorana operators as (coefficient, string).

    The 2^(-k/2) coefficient is computed in the exponent domain so that an
    even number of factors gives an exactly representable power of two
    (e.g. a quadruple's 1/4, a pair's 1/2).
    """
    k = len(indices)
    _, s = majorana_string(indices[0], n_majorana)
    for i in indices[1:]:
        s = pauli_mul(s, majorana_string(i, n_majorana)[1])
    coeff = 2.0 ** -(k // 2) * (MAJORANA_COEFF if k % 2 else 1.0)
    return coeff, s


def build_syk(spec: ModelSpec, rng: np.random.Generator | None = None) -> OperatorSum:
    """Dense (p = 1) or sparse SYK_4 Hamiltonian with Gaussian couplings."""
    if spec.variant not in ("syk", "sparse-syk"):
        raise InvalidSpecError(f"build_syk got variant {spec.variant!r}")
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    n = spec.n
    quads = _quadruples(n)
    keep = rng.random(len(quads)) < spec.p
    js = rng.standard_normal(int(keep.sum()))
    prefactor = math.sqrt(6.0 / (spec.p * n**3))
    terms = []
    for quad, j in zip((q for q, k in zip(quads, keep) if k), js):
        c, s = majorana_product(quad, n)
        terms.append((prefactor * j * c, s))
    return OperatorSum(n // 2, terms)


def build_binary_syk(spec: ModelSpec, rng: np.random.Generator | None = None) -> OperatorSum:
    """Exactly kappa couplings of value +-1 on a uniform quadruple subset.

    Even kappa splits the signs evenly; odd kappa gives (kappa+1)/2 to a
    majority sign chosen by a fair coin.  The +-1 multiset is shuffled over
    the (sorted) chosen quadruples.
    """
    if spec.variant != "binary-syk":
        raise InvalidSpecError(f"build_binary_syk got variant {spec.variant!r}")
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    n, kappa = spec.n, spec.kappa
    quads = _quadruples(n)
    chosen = np.sort(rng.choice(len(quads), size=kappa, replace=False))
    n_plus = kappa // 2
    if kappa % 2:
        n_plus += int(rng.random() < 0.5)
    signs = rng.permutation(np.concatenate([np.ones(n_plus), -np.ones(kappa - n_plus)]))
    p = kappa / len(quads)
    prefactor = math.sqrt(6.0 / (p * n**3))
    terms = []
    for qi, sign in zip(chosen, signs):
        c, s = majorana_product(quads[qi], n)
        terms.append((prefactor * sign * c, s))
    return OperatorSum(n // 2, terms)


def eta_factor(quad: tuple[int, int, int, int]) -> int:
    """Number of spins contributing both their x and y operator to the quadruple."""
    ops = set(quad)
    return sum(1 for a in quad if a % 2 == 1 and a + 1 in ops)


def build_spin_syk(spec: ModelSpec, rng: np.random.Generator | None = None) -> OperatorSum:
    """Spin-SYK: Majoranas replaced by single-site sigma_x/sigma_y operators."""
    if spec.variant != "spin-syk":
        raise InvalidSpecError(f"build_spin_syk got variant {spec.variant!r}")
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    n_spins = spec.n
    n_ops = 2 * n_spins
    quads = _quadruples(n_ops)
    keep = rng.random(len(quads)) < spec.p
    js = rng.standard_normal(int(keep.sum()))
    prefactor = SPIN_GLOBAL_SCALE * math.sqrt(6.0 / (spec.p * n_ops**3))
    terms = []
    for quad, j in zip((q for q, k in zip(quads, keep) if k), js):
        s = spin_operator(quad[0], n_spins)
        for a in quad[1:]:
            s = pauli_mul(s, spin_operator(a, n_spins))
        s = PauliString(s.n_qubits, s.x_mask, s.z_mask, s.phase * 1j ** eta_factor(quad))
        terms.append((prefactor * j, s))
    return OperatorSum(n_spins, terms)


def build_hamiltonian(spec: ModelSpec, rng: np.random.Generator | None = None) -> OperatorSum:
    if spec.variant == "binary-syk":
        return build_binary_syk(spec, rng)
    if spec.variant == "spin-syk":
        return build_spin_syk(spec, rng)
    return build_syk(spec, rng)


def parity_operator(n_majorana: int) -> PauliString:
    """Fermion parity prod_j Z_j (diagonal in the chosen Jordan-Wigner frame)."""
    if n_majorana % 2:
        raise InvalidSpecError("Majorana count must be even")
    n = n_majorana // 2
    return PauliString(n, 0, (1 << n) - 1)


def sector_indices(n_qubits: int, sector: str) -> np.ndarray:
    """Basis indices of a parity sector (even/odd Hamming weight of the index)."""
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    if sector == FULL:
        return idx
    want = 0 if sector == EVEN else 1
    return idx[popcount(idx) % 2 == want]


def project_parity(h: OperatorSum, sector: str, cap: int = 14) -> tuple[np.ndarray, np.ndarray]:
    """Dense block of H on a parity sector, plus the sector's basis index map.

    Every term must commute with the parity operator (even X weight);
    otherwise a SymmetryViolationError is raised.
    """
    if sector not in SECTORS:
        raise InvalidSpecError(f"sector must be one of {SECTORS}")
    for coeff, s in h.terms:
        if s.x_mask.bit_count() % 2:
            raise SymmetryViolationError(f"term {s!r} anticommutes with parity")
    if sector == FULL:
        return h.to_dense(cap=cap), sector_indices(h.n_qubits, FULL)
    return operator_sector_block(h, sector, sector, cap=cap), sector_indices(h.n_qubits, sector)


def operator_sector_block(
    op: OperatorSum, row_sector: str, col_sector: str, cap: int = 14
) -> np.ndarray:
    """Dense <row_sector| op |col_sector> block in the sector bases.

    Used both for parity-diagonal Hamiltonian blocks (row == col) and for
    the off-diagonal blocks of parity-odd probes such as a single Majorana.
    """
    if op.n_qubits > cap:
        raise ResourceCapError(f"sector block capped at {cap} qubits")
    rows = sector_indices(op.n_qubits, row_sector)
    cols = sector_indices(op.n_qubits, col_sector)
    pos = np.full(op.dim, -1, dtype=np.int64)
    pos[rows] = np.arange(len(rows))
    block = np.zeros((len(rows), len(cols)), dtype=np.complex128)
    col_range = np.arange(len(cols))
    for x, z, w in zip(op._xs, op._zs, op._weights):
        dest = cols ^ x
        dest_pos = pos[dest]
        if np.any(dest_pos < 0):
            raise SymmetryViolationError(
                "term maps the column sector outside the row sector"
            )
        block[dest_pos, col_range] += w * parity_signs(cols & z)
    return block
