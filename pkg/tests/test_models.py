import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sykdyn.errors import InvalidSpecError, SymmetryViolationError
from sykdyn.models import (
    ModelSpec,
    OperatorSum,
    build_binary_syk,
    build_hamiltonian,
    build_spin_syk,
    build_syk,
    eta_factor,
    hamiltonian_stats,
    majorana_product,
    parity_operator,
    project_parity,
    sector_indices,
    sigma2_syk,
    target_variance,
)
from sykdyn.pauli import PauliString

from conftest import kron_label

ALL_SPECS = [
    ModelSpec("syk", 8),
    ModelSpec("sparse-syk", 8, p=0.5),
    ModelSpec("binary-syk", 8, kappa=33),
    ModelSpec("spin-syk", 4),
]


def dense_oracle_syk(n, seed, p=1.0):
    """Independent dense construction from Kronecker-product Majoranas."""
    mats = []
    for i in range(1, n + 1):
        k = (i + 1) // 2
        label = "Z" * (k - 1) + ("X" if i % 2 else "Y") + "I" * (n // 2 - k)
        mats.append(kron_label(label) / math.sqrt(2))
    rng = np.random.default_rng(seed)
    quads = list(combinations(range(n), 4))
    keep = rng.random(len(quads)) < p
    js = rng.standard_normal(int(keep.sum()))
    pref = math.sqrt(6.0 / (p * n**3))
    h = np.zeros((1 << (n // 2),) * 2, dtype=complex)
    it = iter(js)
    for quad, kept in zip(quads, keep):
        if kept:
            i, j, k, l = quad
            h += pref * next(it) * (mats[i] @ mats[j] @ mats[k] @ mats[l])
    return h


def test_dense_term_count():
    h = build_syk(ModelSpec("syk", 8, seed=0))
    assert h.term_count == math.comb(8, 4) == 70


def test_syk_matches_dense_oracle():
    for seed in (0, 1, 7):
        h = build_syk(ModelSpec("syk", 8, seed=seed))
        assert np.abs(h.to_dense() - dense_oracle_syk(8, seed)).max() < 1e-13


def test_sparse_syk_matches_dense_oracle():
    h = build_syk(ModelSpec("sparse-syk", 8, p=0.4, seed=3))
    assert np.abs(h.to_dense() - dense_oracle_syk(8, 3, p=0.4)).max() < 1e-13


def test_syk_coefficient_magnitudes():
    # |coeff| = sqrt(6/N^3) * |J| / 4 with the quadruple's 2^-2 exact
    spec = ModelSpec("syk", 8, seed=11)
    h = build_syk(spec)
    rng = np.random.default_rng(11)
    rng.random(math.comb(8, 4))
    js = rng.standard_normal(math.comb(8, 4))
    pref = math.sqrt(6.0 / 8**3)
    got = np.sort(np.abs([c for c, _ in h.terms]))
    want = np.sort(np.abs(pref * js * 0.25))
    assert np.abs(got - want).max() == 0.0


def test_sparse_retention_statistics():
    n_draws, p = 1000, 0.3
    n_quads = math.comb(8, 4)
    counts = [
        build_syk(ModelSpec("sparse-syk", 8, p=p, seed=s)).term_count
        for s in range(n_draws)
    ]
    mean = np.mean(counts)
    se = math.sqrt(n_quads * p * (1 - p) / n_draws)
    assert abs(mean - p * n_quads) < 3 * se


def test_sparse_retention_n24_regime():
    counts = [
        build_syk(ModelSpec("sparse-syk", 24, p=0.004, seed=s)).term_count
        for s in range(400)
    ]
    expected = 0.004 * math.comb(24, 4)  # 42.504
    se = math.sqrt(math.comb(24, 4) * 0.004 * 0.996 / 400)
    assert abs(np.mean(counts) - expected) < 3 * se


def test_binary_c24_is_dense():
    assert math.comb(24, 4) == 10626
    spec = ModelSpec("binary-syk", 24, kappa=10626)
    assert spec.retention == 1.0


def test_binary_exact_count_and_signs():
    pref = math.sqrt(6.0 / ((22 / math.comb(24, 4)) * 24**3)) * 0.25
    h = build_binary_syk(ModelSpec("binary-syk", 24, kappa=22, seed=5))
    assert h.term_count == 22
    signs = np.sign([c for c, _ in h.terms])
    assert np.sum(signs > 0) == 11 and np.sum(signs < 0) == 11
    assert np.abs(np.abs([c for c, _ in h.terms]) - pref).max() < 1e-15


def test_binary_sign_rule_even_and_odd():
    # even kappa: exact half split in every draw; odd: majority split +-1
    odd_majorities = []
    for s in range(2000):
        h4 = build_binary_syk(ModelSpec("binary-syk", 8, kappa=4, seed=s))
        signs4 = np.sign([c for c, _ in h4.terms])
        assert np.sum(signs4) == 0
        h5 = build_binary_syk(ModelSpec("binary-syk", 8, kappa=5, seed=s))
        signs5 = np.sign([c for c, _ in h5.terms])
        assert h5.term_count == 5
        assert np.sum(signs5) in (-1, 1)
        odd_majorities.append(np.sum(signs5))
    # fair coin for the odd-kappa majority sign
    n_plus = sum(1 for m in odd_majorities if m > 0)
    se = math.sqrt(len(odd_majorities) * 0.25)
    assert abs(n_plus - len(odd_majorities) / 2) < 3 * se


def test_binary_kappa_validation():
    with pytest.raises(InvalidSpecError):
        ModelSpec("binary-syk", 8, kappa=71)
    with pytest.raises(InvalidSpecError):
        ModelSpec("binary-syk", 8)


def test_eta_examples():
    assert eta_factor((1, 2, 3, 5)) == 1
    assert eta_factor((1, 3, 5, 7)) == 0
    assert eta_factor((1, 2, 3, 4)) == 2


def test_spin_term_hermitian_dense():
    # the i^eta factor restores hermiticity for quadruples with eta = 2
    from sykdyn.pauli import pauli_mul, spin_operator

    s = spin_operator(1, 4)
    for a in (2, 3, 4):
        s = pauli_mul(s, spin_operator(a, 4))
    term = (1j ** 2) * s.to_dense()
    assert np.array_equal(term, term.conj().T)


def test_spin_syk_hermitian_exact():
    h = build_spin_syk(ModelSpec("spin-syk", 4, seed=9))
    dense = h.to_dense()
    assert np.array_equal(dense, dense.conj().T)


def test_parity_operator_examples():
    p4 = parity_operator(4)
    assert np.array_equal(p4.to_dense(), kron_label("ZZ"))
    dense = parity_operator(8).to_dense()
    assert np.array_equal(dense @ dense, np.eye(16))


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.variant)
def test_parity_commutes_exactly(spec):
    h = build_hamiltonian(spec).to_dense()
    p = parity_operator(8).to_dense()
    assert np.abs(h @ p - p @ h).max() == 0.0


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.variant)
def test_project_parity_spectrum_union(spec):
    h = build_hamiltonian(spec)
    even, idx_e = project_parity(h, "even")
    odd, idx_o = project_parity(h, "odd")
    assert even.shape == odd.shape == (8, 8)
    assert len(set(idx_e) | set(idx_o)) == 16
    union = np.sort(np.concatenate([np.linalg.eigvalsh(even), np.linalg.eigvalsh(odd)]))
    full = np.linalg.eigvalsh(h.to_dense())
    assert np.abs(union - full).max() < 1e-10


def test_project_parity_identity():
    ident = OperatorSum(3, [(2.5, PauliString.identity(3))])
    block, idx = project_parity(ident, "even")
    assert np.array_equal(block, 2.5 * np.eye(4))
    full, idx_full = project_parity(ident, "full")
    assert np.array_equal(full, 2.5 * np.eye(8))
    assert len(idx_full) == 8


def test_project_parity_rejects_odd_terms():
    bad = OperatorSum(2, [(1.0, PauliString.from_label("XI"))])
    with pytest.raises(SymmetryViolationError):
        project_parity(bad, "even")


def test_sector_indices_split():
    idx_e = sector_indices(4, "even")
    idx_o = sector_indices(4, "odd")
    assert len(idx_e) == len(idx_o) == 8
    assert all(bin(i).count("1") % 2 == 0 for i in idx_e)


def test_stats_trivial_cases():
    empty = OperatorSum(3, [])
    assert hamiltonian_stats(empty) == (0, 0.0, 0.0)
    single = OperatorSum(3, [(0.7, PauliString.from_label("XYZ"))])
    st_ = hamiltonian_stats(single)
    assert st_.term_count == 1
    assert st_.trace_h2_over_dim == pytest.approx(0.49, abs=1e-15)
    assert st_.max_coeff == 0.7


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.variant)
def test_stats_match_dense_trace(spec):
    h = build_hamiltonian(spec)
    dense = h.to_dense()
    tr2 = float(np.real(np.trace(dense @ dense))) / h.dim
    assert hamiltonian_stats(h).trace_h2_over_dim == pytest.approx(tr2, rel=1e-12)


def test_sigma2_closed_form():
    assert sigma2_syk(8) == pytest.approx(6 * 70 / (16 * 512), abs=0)
    assert sigma2_syk(8) == pytest.approx(420 / 8192, abs=0)


@pytest.mark.parametrize(
    "variant,n,kwargs",
    [
        ("syk", 8, {}),
        ("sparse-syk", 8, {"p": 0.5}),
        ("spin-syk", 4, {}),
    ],
)
def test_variance_ensemble_mean(variant, n, kwargs):
    draws = 1200
    vals = np.array([
        hamiltonian_stats(build_hamiltonian(ModelSpec(variant, n, seed=s, **kwargs))).trace_h2_over_dim
        for s in range(draws)
    ])
    target = sigma2_syk(8)
    se = vals.std(ddof=1) / math.sqrt(draws)
    assert abs(vals.mean() - target) < 3 * se


def test_binary_variance_exact_every_draw():
    target = sigma2_syk(8)
    for s in range(20):
        st_ = hamiltonian_stats(build_binary_syk(ModelSpec("binary-syk", 8, kappa=70, seed=s)))
        assert st_.trace_h2_over_dim == pytest.approx(target, rel=1e-14)


def test_target_variance_spin_mapping():
    assert target_variance(ModelSpec("spin-syk", 8)) == sigma2_syk(16)
    assert target_variance(ModelSpec("syk", 16)) == sigma2_syk(16)


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(["syk", "sparse-syk", "binary-syk", "spin-syk"]),
    st.integers(0, 10_000),
)
def test_hermitian_reconstruction_property(variant, seed):
    if variant == "spin-syk":
        spec = ModelSpec(variant, 3, seed=seed)
    elif variant == "binary-syk":
        spec = ModelSpec(variant, 6, kappa=7, seed=seed)
    else:
        spec = ModelSpec(variant, 6, p=0.8, seed=seed)
    dense = build_hamiltonian(spec).to_dense()
    assert np.array_equal(dense, dense.conj().T)


def test_builders_deterministic():
    a = build_hamiltonian(ModelSpec("syk", 8, seed=123))
    b = build_hamiltonian(ModelSpec("syk", 8, seed=123))
    assert a.terms == b.terms


def test_majorana_product_pair_coefficient_exact():
    coeff, _ = majorana_product((1, 2), 8)
    assert coeff == 0.5
    coeff4, _ = majorana_product((1, 2, 3, 4), 8)
    assert coeff4 == 0.25


def test_operator_sum_merges_duplicates():
    s = PauliString.from_label("XZ")
    op = OperatorSum(2, [(1.0, s), (2.0, s)])
    assert op.term_count == 1
    assert op.terms[0][0] == pytest.approx(3.0)


def test_model_spec_validation():
    with pytest.raises(InvalidSpecError):
        ModelSpec("syk", 7)
    with pytest.raises(InvalidSpecError):
        ModelSpec("syk", 8, p=0.0)
    with pytest.raises(InvalidSpecError):
        ModelSpec("nope", 8)
    with pytest.raises(InvalidSpecError):
        ModelSpec("syk", 2)
