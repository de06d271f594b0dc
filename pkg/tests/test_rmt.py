import math

import numpy as np
import pytest

from sykdyn.errors import InvalidSpecError
from sykdyn.models import sigma2_syk
from sykdyn.rmt import (
    EnsembleSpec,
    matched_sample,
    rescale_to_variance,
    sample_gaussian,
    sigma_target,
)


def _trace2_over_dim(h):
    return float(np.sum(np.abs(h) ** 2)) / h.shape[0]


@pytest.mark.parametrize("kind,dim,draws", [
    ("goe", 64, 1000), ("goe", 256, 1000),
    ("gue", 64, 1000), ("gue", 256, 1000),
])
def test_trace_h2_matches_sigma_target(kind, dim, draws):
    rng = np.random.default_rng(20)
    spec = EnsembleSpec(kind, dim)
    vals = np.array([_trace2_over_dim(sample_gaussian(spec, rng)) for _ in range(draws)])
    se = vals.std(ddof=1) / math.sqrt(draws)
    assert abs(vals.mean() - sigma_target(kind, dim)) < 3 * se


def test_gse_trace_h2():
    rng = np.random.default_rng(21)
    spec = EnsembleSpec("gse", 64)
    vals = np.array([_trace2_over_dim(sample_gaussian(spec, rng)) for _ in range(400)])
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean() - sigma_target("gse", 64)) < 3 * se


def test_gse_kramers_degeneracy():
    h = sample_gaussian(EnsembleSpec("gse", 4, seed=2))
    evals = np.linalg.eigvalsh(h)
    assert abs(evals[0] - evals[1]) < 1e-12
    assert abs(evals[2] - evals[3]) < 1e-12
    bigger = sample_gaussian(EnsembleSpec("gse", 32, seed=3))
    ev = np.linalg.eigvalsh(bigger)
    assert np.abs(ev[::2] - ev[1::2]).max() < 1e-10


@pytest.mark.parametrize("kind", ["goe", "gue", "gse"])
def test_samples_hermitian_exact(kind):
    h = sample_gaussian(EnsembleSpec(kind, 32, seed=5))
    assert np.array_equal(h, h.conj().T)
    if kind == "goe":
        assert np.isrealobj(h) or np.abs(h.imag).max() == 0.0


def test_gse_odd_dim_rejected():
    with pytest.raises(InvalidSpecError):
        EnsembleSpec("gse", 5)


def test_sigma_target_examples():
    assert sigma_target("goe", 2) == 1.5
    assert sigma_target("gue", 2**12) == 4096.0
    assert sigma_target("syk", 8) == pytest.approx(420 / 8192, abs=0)
    assert sigma_target("spin-syk", 8) == sigma2_syk(16)


def test_sigma_target_unknown():
    with pytest.raises(InvalidSpecError):
        sigma_target("bogus", 4)


def test_rescale_identity_and_scaling():
    h = sample_gaussian(EnsembleSpec("goe", 16, seed=1))
    assert np.array_equal(rescale_to_variance(h, 2.0, 2.0), h)
    scaled = rescale_to_variance(h, 1.0, 9.0)
    assert _trace2_over_dim(scaled) == pytest.approx(9 * _trace2_over_dim(h), rel=1e-12)


def test_rescale_rejects_nonpositive():
    h = np.eye(2)
    with pytest.raises(ValueError):
        rescale_to_variance(h, 0.0, 1.0)
    with pytest.raises(ValueError):
        rescale_to_variance(h, 1.0, -2.0)


def test_matched_gue_eigenvalue_variance():
    # dim 2^8 baseline carries the N=16 model's eigenvalue variance
    target = sigma2_syk(16)
    rng = np.random.default_rng(40)
    spec = EnsembleSpec("gue", 256)
    vals = []
    for _ in range(50):
        h = matched_sample(spec, target, rng)
        evals = np.linalg.eigvalsh(h)
        vals.append(np.mean(evals**2))
    vals = np.array(vals)
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean() - target) < 3 * se
