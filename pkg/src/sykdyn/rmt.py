"""Gaussian random-matrix sampling and variance matching.

Normalizations follow the standard conventions: GOE has unit variance on
the diagonal and 1/2 off it, GUE has Re/Im variance 1/2 off-diagonal, so

    E Tr(H_GOE^2) = D(D+1)/2,   E Tr(H_GUE^2) = D^2,   E Tr(H_GSE^2) = D(D-1).

Matching a baseline to a model is done by rescaling with the ratio of the
target eigenvalue variance to the ensemble's own, which keeps every time
axis directly comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError
from .models import sigma2_syk

ENSEMBLES = ("goe", "gue", "gse")


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    dim: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ENSEMBLES:
            raise InvalidSpecError(f"unknown ensemble {self.kind!r}; pick from {ENSEMBLES}")
        if self.dim < 2:
            raise InvalidSpecError(f"dim must be >= 2, got {self.dim}")
        if self.kind == "gse" and self.dim % 2:
            raise InvalidSpecError("GSE requires even dimension")


def _goe(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((dim, dim))
    return (a + a.T) / 2.0


def _gue(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    return (a + a.conj().T) / math.sqrt(2)


def _gse(dim: int, rng: np.random.Generator) -> np.ndarray:
    # self-dual form [[W, Y], [-Y*, W*]] with W Hermitian, Y antisymmetric;
    # spectrum is doubly (Kramers) degenerate
    m = dim // 2
    w = _gue(m, rng)
    y0 = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    y = (y0 - y0.T) / math.sqrt(2)
    return np.block([[w, y], [-y.conj(), w.conj()]])


def sample_gaussian(spec: EnsembleSpec, rng: np.random.Generator | None = None) -> np.ndarray:
    """Draw one Hermitian matrix from the named ensemble."""
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    return {"goe": _goe, "gue": _gue, "gse": _gse}[spec.kind](spec.dim, rng)


def sigma_target(variant: str, n: int) -> float:
    """Eigenvalue variance E[Tr H^2]/D of an ensemble or model.

    For 'goe'/'gue'/'gse', ``n`` is the matrix dimension; for the SYK
    family it is the Majorana count; for 'spin-syk' the spin count.
    """
    if variant == "goe":
        return (n + 1) / 2.0
    if variant == "gue":
        return float(n)
    if variant == "gse":
        return float(n - 1)
    if variant in ("syk", "sparse-syk", "binary-syk"):
        return sigma2_syk(n)
    if variant == "spin-syk":
        return sigma2_syk(2 * n)
    raise InvalidSpecError(f"unknown variant {variant!r}")


def rescale_to_variance(
    m: np.ndarray, current_sigma2: float, target_sigma2: float
) -> np.ndarray:
    """sqrt(target/current) * m; eigenvalues scale by the same factor."""
    if current_sigma2 <= 0 or target_sigma2 <= 0:
        raise ValueError("variances must be positive")
    return math.sqrt(target_sigma2 / current_sigma2) * m


def matched_sample(
    spec: EnsembleSpec, target_sigma2: float, rng: np.random.Generator | None = None
) -> np.ndarray:
    """Ensemble draw rescaled so its eigenvalue variance matches a model's."""
    h = sample_gaussian(spec, rng)
    return rescale_to_variance(h, sigma_target(spec.kind, spec.dim), target_sigma2)
