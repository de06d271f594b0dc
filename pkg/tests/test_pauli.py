import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sykdyn.errors import DimensionMismatchError, InvalidSpecError, ResourceCapError
from sykdyn.pauli import PauliString, majorana_string, pauli_mul, spin_operator

from conftest import kron_label, random_state

PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


@st.composite
def pauli_strings(draw, n_qubits=None):
    n = draw(st.integers(1, 6)) if n_qubits is None else n_qubits
    x = draw(st.integers(0, (1 << n) - 1))
    z = draw(st.integers(0, (1 << n) - 1))
    phase = draw(st.sampled_from(PHASES))
    return PauliString(n, x, z, phase)


@st.composite
def string_pairs(draw):
    n = draw(st.integers(1, 6))
    return draw(pauli_strings(n)), draw(pauli_strings(n))


def test_from_label_matches_kron_oracle():
    labels = [a + b for a in "IXYZ" for b in "IXYZ"] + ["X", "Y", "Z", "XYZ", "YYXZ"]
    for label in labels:
        s = PauliString.from_label(label)
        assert np.array_equal(s.to_dense(), kron_label(label)), label


def test_label_round_trip():
    for label in ("IXYZ", "ZZZZ", "YIIX"):
        assert PauliString.from_label(label).label() == label


def test_single_qubit_products_exhaustive():
    for a in "IXYZ":
        for b in "IXYZ":
            sa, sb = PauliString.from_label(a), PauliString.from_label(b)
            assert np.array_equal(
                pauli_mul(sa, sb).to_dense(), kron_label(a) @ kron_label(b)
            ), (a, b)


def test_mul_examples():
    x, y, z = (PauliString.from_label(c) for c in "XYZ")
    xy = pauli_mul(x, y)
    assert np.array_equal(xy.to_dense(), 1j * z.to_dense())
    xx = pauli_mul(x, x)
    assert np.array_equal(xx.to_dense(), np.eye(2))
    assert xx.phase == 1

    # (Z x X) . (X x I): dense multiplication fixes the phase as +i
    a, b = PauliString.from_label("ZX"), PauliString.from_label("XI")
    prod = pauli_mul(a, b)
    expected = kron_label("ZX") @ kron_label("XI")
    assert np.array_equal(prod.to_dense(), expected)
    assert np.array_equal(expected, 1j * kron_label("YX"))


def test_mul_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        pauli_mul(PauliString.from_label("X"), PauliString.from_label("XX"))


@settings(max_examples=60, deadline=None)
@given(string_pairs())
def test_mul_matches_dense(pair):
    a, b = pair
    assert np.array_equal(pauli_mul(a, b).to_dense(), a.to_dense() @ b.to_dense())


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    pauli_strings(n), pauli_strings(n), pauli_strings(n))))
def test_mul_associative(triple):
    a, b, c = triple
    left = pauli_mul(pauli_mul(a, b), c)
    right = pauli_mul(a, pauli_mul(b, c))
    assert left == right


@settings(max_examples=60, deadline=None)
@given(string_pairs())
def test_phase_closure(pair):
    assert pauli_mul(*pair).phase in PHASES


@settings(max_examples=60, deadline=None)
@given(pauli_strings())
def test_hermiticity_rule(s):
    dense = s.to_dense()
    assert s.is_hermitian == np.array_equal(dense, dense.conj().T)


@settings(max_examples=40, deadline=None)
@given(pauli_strings(4), st.integers(0, 2**31 - 1))
def test_apply_matches_dense_matvec(s, seed):
    v = random_state(4, seed)
    assert np.abs(s.apply(v) - s.to_dense() @ v).max() < 1e-12


def test_majorana_examples_n4():
    expected = {1: "XI", 2: "YI", 3: "ZX", 4: "ZY"}
    for i, label in expected.items():
        coeff, s = majorana_string(i, 4)
        assert coeff == pytest.approx(1 / math.sqrt(2), abs=0)
        assert np.array_equal(s.to_dense(), kron_label(label)), i


@pytest.mark.parametrize("n_majorana", [2, 4, 6, 8])
def test_majorana_anticommutators_exact(n_majorana):
    # pair coefficient handled in the exponent domain: (1/sqrt2)^2 -> exactly 1/2
    dim = 1 << (n_majorana // 2)
    eye = np.eye(dim)
    for i in range(1, n_majorana + 1):
        for j in range(i, n_majorana + 1):
            si, sj = majorana_string(i, n_majorana)[1], majorana_string(j, n_majorana)[1]
            acomm = 0.5 * (pauli_mul(si, sj).to_dense() + pauli_mul(sj, si).to_dense())
            want = eye if i == j else 0.0 * eye
            assert np.array_equal(acomm, want), (i, j)


def test_majorana_dense_brute_force():
    ms = [majorana_string(i, 6) for i in range(1, 7)]
    dense = [c * s.to_dense() for c, s in ms]
    for i in range(6):
        for j in range(6):
            acomm = dense[i] @ dense[j] + dense[j] @ dense[i]
            want = (1.0 if i == j else 0.0) * np.eye(8)
            assert np.abs(acomm - want).max() < 1e-15


def test_majorana_invalid():
    with pytest.raises(InvalidSpecError):
        majorana_string(0, 4)
    with pytest.raises(InvalidSpecError):
        majorana_string(5, 4)
    with pytest.raises(InvalidSpecError):
        majorana_string(1, 5)


def test_spin_operator_examples():
    assert np.array_equal(spin_operator(1, 2).to_dense(), kron_label("XI"))
    assert np.array_equal(spin_operator(4, 2).to_dense(), kron_label("IY"))
    assert np.array_equal(spin_operator(2, 3).to_dense(), kron_label("YII"))


def test_spin_operator_commutation():
    for n_spins in (2, 3, 4):
        ops = [spin_operator(a, n_spins) for a in range(1, 2 * n_spins + 1)]
        dense = [o.to_dense() for o in ops]
        for a in range(len(ops)):
            for b in range(len(ops)):
                same_spin = a // 2 == b // 2
                comm = dense[a] @ dense[b] - dense[b] @ dense[a]
                acomm = dense[a] @ dense[b] + dense[b] @ dense[a]
                if a == b:
                    assert np.array_equal(acomm, 2 * np.eye(1 << n_spins))
                elif same_spin:
                    assert np.abs(acomm).max() == 0.0
                else:
                    assert np.abs(comm).max() == 0.0


def test_spin_operator_invalid():
    with pytest.raises(InvalidSpecError):
        spin_operator(0, 2)
    with pytest.raises(InvalidSpecError):
        spin_operator(5, 2)


def test_to_dense_examples():
    assert np.array_equal(PauliString.from_label("X").to_dense(),
                          np.array([[0, 1], [1, 0]], dtype=complex))
    iz = PauliString(1, 0, 1, 1j)
    assert np.array_equal(iz.to_dense(), np.array([[1j, 0], [0, -1j]]))
    zx = PauliString.from_label("ZX")
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 1] = expected[1, 0] = 1
    expected[2, 3] = expected[3, 2] = -1
    assert np.array_equal(zx.to_dense(), expected)


def test_to_dense_cap():
    with pytest.raises(ResourceCapError):
        PauliString.identity(15).to_dense()
    PauliString.identity(15).to_dense(cap=15)  # cap is configurable


def test_phase_validation():
    with pytest.raises(InvalidSpecError):
        PauliString(1, 0, 0, 0.5 + 0.5j)
    with pytest.raises(InvalidSpecError):
        PauliString(2, 0b100, 0, 1)
