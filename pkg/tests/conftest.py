"""Shared fixtures: dense Pauli oracles and the acceptance summary table."""

import numpy as np
import pytest

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_label(label: str) -> np.ndarray:
    """Literal Kronecker product of single-qubit Pauli letters (oracle)."""
    out = np.array([[1.0 + 0j]])
    for c in label.upper():
        out = np.kron(out, PAULI_1Q[c])
    return out


def random_state(n_qubits: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(1 << n_qubits) + 1j * rng.standard_normal(1 << n_qubits)
    return v / np.linalg.norm(v)


ACCEPTANCE_RESULTS = []


def record_acceptance(number: str, title: str, passed: bool, detail: str = ""):
    ACCEPTANCE_RESULTS.append((number, title, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: r[0]):
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:>3}: {status}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
