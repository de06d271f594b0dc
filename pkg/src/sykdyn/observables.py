"""Trajectory observables: entanglement entropy S(t) and autocorrelation C(t).

Single-realization pipelines live here; the runner stacks them into
ensemble TrajectoryRecords.  Hamiltonian sources are either an
OperatorSum (model) or a dense Hermitian matrix (random-matrix baseline);
both feed the same propagation and measurement code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidSpecError
from .evolve import Propagator, make_propagator
from .models import (
    EVEN,
    FULL,
    ODD,
    ModelSpec,
    OperatorSum,
    build_hamiltonian,
    operator_sector_block,
    project_parity,
    sector_indices,
    target_variance,
)
from .pauli import majorana_string, spin_operator
from .rmt import EnsembleSpec, matched_sample
from .states import (
    Bipartition,
    StateVector,
    batched_entropy,
    max_entangled_state,
    product_state,
    project_to_sector,
)


@dataclass(frozen=True)
class Probe:
    """Autocorrelation probe: a unit-coefficient string plus the exact
    square of its physical coefficient.

    Keeping the square separate lets C(0) come out exactly (a Majorana's
    1/sqrt(2) does not square to 0.5 in floats, but 0.5 is stored as is).
    """

    op: OperatorSum
    square_scale: float
    label: str

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.op.apply(vec)


def majorana_probe(i: int, n_majorana: int) -> Probe:
    """psi_i; C(0) = <psi_i^2> = 1/2."""
    _, s = majorana_string(i, n_majorana)
    return Probe(OperatorSum(n_majorana // 2, [(1.0, s)]), 0.5, f"majorana-{i}")


def spin_probe(a: int, n_spins: int) -> Probe:
    """sigma_{j,x/y}; C(0) = 1."""
    return Probe(OperatorSum(n_spins, [(1.0, spin_operator(a, n_spins))]), 1.0, f"spin-{a}")


@dataclass
class TrajectoryRecord:
    """Ensemble of trajectories plus aggregates and provenance."""

    observable: str
    times: np.ndarray
    per_realization: np.ndarray  # (realizations, len(times)); complex for autocorr
    mean: np.ndarray = field(init=False)
    std_error: np.ndarray = field(init=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.per_realization.ndim != 2 or self.per_realization.shape[1] != len(self.times):
            raise DimensionMismatchError("per_realization must be (realizations, times)")
        if np.any(np.diff(self.times) <= 0):
            raise InvalidSpecError("times must be strictly increasing")
        self.mean, self.std_error = _aggregate(self.per_realization)

    @property
    def realizations(self) -> int:
        return self.per_realization.shape[0]


def _aggregate(per_real: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = per_real.mean(axis=0)
    r = per_real.shape[0]
    if r < 2:
        return mean, np.zeros_like(mean)
    if np.iscomplexobj(per_real):
        se = (per_real.real.std(axis=0, ddof=1) + 1j * per_real.imag.std(axis=0, ddof=1))
        return mean, se / math.sqrt(r)
    return mean, per_real.std(axis=0, ddof=1) / math.sqrt(r)


def initial_state(kind: str, bp: Bipartition) -> StateVector:
    if kind == "product":
        return product_state(bp.n_qubits)
    if kind == "max-entangled":
        return max_entangled_state(bp)
    raise InvalidSpecError(f"unknown initial state {kind!r}")


def ee_trajectory(
    h: OperatorSum | np.ndarray,
    psi0: StateVector,
    bp: Bipartition,
    times: np.ndarray,
    method: str = "auto",
) -> np.ndarray:
    """S(t) across the cut for one Hamiltonian realization."""
    prop = make_propagator(h, method=method)
    cols = prop.evolve_batch(psi0.amplitudes, np.asarray(times, dtype=float))
    return batched_entropy(cols, bp)


def ee_trajectory_sector(
    h: OperatorSum,
    psi0: StateVector,
    bp: Bipartition,
    times: np.ndarray,
    sector: str = ODD,
) -> np.ndarray:
    """S(t) evolving only the chosen parity block of H.

    The initial state is projected onto the sector (and renormalized),
    evolved inside the 2^(n-1)-dimensional block, then embedded back for
    the entropy measurement.
    """
    block, idx = project_parity(h, sector, cap=h.n_qubits)
    projected = project_to_sector(psi0, sector)
    prop = make_propagator(block)
    cols_block = prop.evolve_batch(projected.amplitudes[idx], np.asarray(times, dtype=float))
    cols = np.zeros((h.dim, cols_block.shape[1]), dtype=np.complex128)
    cols[idx] = cols_block
    return batched_entropy(cols, bp)


def autocorrelation(
    h: OperatorSum | np.ndarray,
    psi0: StateVector,
    probe: Probe,
    times: np.ndarray,
    method: str = "auto",
) -> np.ndarray:
    """C(t) = <psi0| e^{iHt} O e^{-iHt} O |psi0> on the time grid.

    Evolves |psi0> and O|psi0> side by side and applies O once per grid
    point, so the Heisenberg operator is never materialized.  The probe's
    coefficient enters once, squared exactly.
    """
    times = np.asarray(times, dtype=float)
    prop = make_propagator(h, method=method)
    phi0 = probe.apply(psi0.amplitudes)
    left = prop.evolve_batch(psi0.amplitudes, times)
    right = prop.evolve_batch(phi0, times)
    return probe.square_scale * np.sum(left.conj() * probe.apply(right), axis=0)


def autocorrelation_sector(
    h: OperatorSum,
    psi0: StateVector,
    probe: Probe,
    times: np.ndarray,
    sector: str = ODD,
) -> np.ndarray:
    """Sector-resolved C(t) for a parity-odd probe such as a Majorana.

    The probe maps the chosen sector to the opposite one, so the state is
    projected onto `sector`, the two parity blocks of H drive the two
    propagations, and the probe enters through its off-diagonal blocks.
    Block dimensions are 2^(n-1), matching parity-resolved baselines.
    """
    other = EVEN if sector == ODD else ODD
    times = np.asarray(times, dtype=float)
    h_sec, idx_sec = project_parity(h, sector, cap=h.n_qubits)
    h_oth, idx_oth = project_parity(h, other, cap=h.n_qubits)
    probe_to_other = operator_sector_block(probe.op, other, sector, cap=h.n_qubits)
    probe_back = operator_sector_block(probe.op, sector, other, cap=h.n_qubits)
    psi_sec = project_to_sector(psi0, sector).amplitudes[idx_sec]
    phi_oth = probe_to_other @ psi_sec
    left = make_propagator(h_sec).evolve_batch(psi_sec, times)
    right = make_propagator(h_oth).evolve_batch(phi_oth, times)
    return probe.square_scale * np.sum(left.conj() * (probe_back @ right), axis=0)


def model_hamiltonian(spec: ModelSpec, seed: int) -> OperatorSum:
    """Build one realization with the given coupling seed."""
    return build_hamiltonian(
        ModelSpec(spec.variant, spec.n, p=spec.p, kappa=spec.kappa, seed=seed)
    )


def baseline_hamiltonian(
    spec: EnsembleSpec, target_sigma2: float, seed: int, sector_dims: bool = False
) -> np.ndarray:
    """One variance-matched random-matrix draw.

    With sector_dims=True, two independent draws of the given dimension are
    embedded as the even/odd parity blocks of a doubled Hilbert space, so a
    parity-odd probe can act between them.
    """
    rng = np.random.default_rng(seed)
    if not sector_dims:
        return matched_sample(EnsembleSpec(spec.kind, spec.dim, seed), target_sigma2, rng)
    n_qubits = int(round(math.log2(spec.dim))) + 1
    if 1 << (n_qubits - 1) != spec.dim:
        raise InvalidSpecError("sector-matched baseline needs a power-of-two dimension")
    full = np.zeros((1 << n_qubits, 1 << n_qubits), dtype=np.complex128)
    for sector in (EVEN, ODD):
        idx = sector_indices(n_qubits, sector)
        block = matched_sample(EnsembleSpec(spec.kind, spec.dim, 0), target_sigma2, rng)
        full[np.ix_(idx, idx)] = block
    return full


def rmt_baseline(
    spec: EnsembleSpec,
    matched_model: ModelSpec,
    psi0: StateVector,
    times: np.ndarray,
    bp: Bipartition | None = None,
    probe: Probe | None = None,
    seed: int = 0,
) -> np.ndarray:
    """Run one baseline realization through the identical observable pipeline.

    Exactly one of ``bp`` (entropy) / ``probe`` (autocorrelation) selects
    the observable; the matrix is rescaled to the matched model's
    eigenvalue variance first.
    """
    if (bp is None) == (probe is None):
        raise InvalidSpecError("pass exactly one of bp or probe")
    h = baseline_hamiltonian(spec, target_variance(matched_model), seed)
    if bp is not None:
        return ee_trajectory(h, psi0, bp, times)
    return autocorrelation(h, psi0, probe, times)
