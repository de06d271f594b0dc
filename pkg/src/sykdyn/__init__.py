"""SYK-family entanglement production and autocorrelation dynamics toolkit."""

__version__ = "0.1.0"

from .analysis import (
    FitResult,
    MPParams,
    eigenstate_ee_survey,
    fit_exp_decay,
    fit_linear_slope,
    mp_entropy_numeric,
    page_bound_asymptotic,
    page_exact,
)
from .models import (
    ModelSpec,
    OperatorSum,
    build_binary_syk,
    build_hamiltonian,
    build_spin_syk,
    build_syk,
    hamiltonian_stats,
    parity_operator,
    project_parity,
)
from .observables import TrajectoryRecord, autocorrelation, ee_trajectory, rmt_baseline
from .pauli import PauliString, majorana_string, pauli_mul, spin_operator
from .rmt import EnsembleSpec, rescale_to_variance, sample_gaussian, sigma_target
from .states import (
    Bipartition,
    StateVector,
    entanglement_entropy,
    max_entangled_state,
    product_state,
    reduced_density,
    von_neumann,
)

__all__ = [
    "Bipartition",
    "EnsembleSpec",
    "FitResult",
    "MPParams",
    "ModelSpec",
    "OperatorSum",
    "PauliString",
    "StateVector",
    "TrajectoryRecord",
    "autocorrelation",
    "build_binary_syk",
    "build_hamiltonian",
    "build_spin_syk",
    "build_syk",
    "ee_trajectory",
    "eigenstate_ee_survey",
    "entanglement_entropy",
    "fit_exp_decay",
    "fit_linear_slope",
    "hamiltonian_stats",
    "majorana_string",
    "max_entangled_state",
    "mp_entropy_numeric",
    "page_bound_asymptotic",
    "page_exact",
    "parity_operator",
    "pauli_mul",
    "product_state",
    "project_parity",
    "reduced_density",
    "rescale_to_variance",
    "rmt_baseline",
    "sample_gaussian",
    "sigma_target",
    "spin_operator",
    "von_neumann",
]
