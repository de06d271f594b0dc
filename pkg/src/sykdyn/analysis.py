"""Theoretical entropy bounds, curve fits, eigenstate surveys and sparseness sweeps.

The Marchenko-Pastur entropy integral is evaluated with the substitution
eps = eps_min + (eps_max - eps_min) sin^2(theta), which removes the
square-root endpoint singularities; the density prefactor is N^2 Q/(2 pi)
so that the density integrates to the eigenvalue count N and eps-weighted
to the unit trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import curve_fit
from scipy.special import digamma

from .errors import FitDomainError, InvalidSpecError, NumericSanityError
from .rmt import EnsembleSpec, sample_gaussian
from .states import Bipartition, batched_entropy


# ---------------------------------------------------------------- bounds

def page_bound_asymptotic(dim_small: int, dim_large: int) -> float:
    """ln(N) - N/(2M), the large-dimension average entanglement entropy."""
    if not 1 <= dim_small <= dim_large:
        raise ValueError(f"need 1 <= N <= M, got N={dim_small}, M={dim_large}")
    return math.log(dim_small) - dim_small / (2.0 * dim_large)


def page_exact(dim_small: int, dim_large: int) -> float:
    """Finite-size average entropy: sum_{k=M+1}^{NM} 1/k - (N-1)/(2M)."""
    if not 1 <= dim_small <= dim_large:
        raise ValueError(f"need 1 <= N <= M, got N={dim_small}, M={dim_large}")
    n, m = dim_small, dim_large
    harmonic = float(digamma(n * m + 1) - digamma(m + 1))
    return harmonic - (n - 1) / (2.0 * m)


@dataclass(frozen=True)
class MPParams:
    """Marchenko-Pastur parameters for a reduced density matrix of an
    N x M random pure state (N <= M, Q = M/N)."""

    dim_small: int
    dim_large: int

    def __post_init__(self):
        if not 1 <= self.dim_small <= self.dim_large:
            raise ValueError("need 1 <= N <= M")

    @property
    def q(self) -> float:
        return self.dim_large / self.dim_small

    @property
    def eps_min(self) -> float:
        return (1.0 - 1.0 / math.sqrt(self.q)) ** 2 / self.dim_small

    @property
    def eps_max(self) -> float:
        return (1.0 + 1.0 / math.sqrt(self.q)) ** 2 / self.dim_small

    @property
    def prefactor(self) -> float:
        return self.dim_small**2 * self.q / (2.0 * math.pi)


def mp_density(eps: np.ndarray, params: MPParams) -> np.ndarray:
    """Eigenvalue density f(eps); integrates to N over the support."""
    eps = np.asarray(eps, dtype=float)
    inside = (eps >= params.eps_min) & (eps <= params.eps_max) & (eps > 0)
    out = np.zeros_like(eps)
    e = eps[inside]
    out[inside] = params.prefactor * np.sqrt(
        (params.eps_max - e) * (e - params.eps_min)
    ) / e
    return out


def _mp_quad(params: MPParams, g) -> float:
    """integral f(eps) g(eps) deps via the sin^2 substitution."""
    a, b = params.eps_min, params.eps_max
    span = b - a

    def integrand(theta):
        s, c = math.sin(theta), math.cos(theta)
        e = a + span * s * s
        return params.prefactor * span * s * c / e * g(e) * span * 2 * s * c

    val, err = quad(integrand, 0.0, math.pi / 2.0, limit=200)
    if err > 1e-8 * max(1.0, abs(val)):
        raise NumericSanityError(f"MP quadrature error estimate {err:.2e} too large")
    return val


def mp_norm(params: MPParams) -> float:
    return _mp_quad(params, lambda e: 1.0)


def mp_trace(params: MPParams) -> float:
    return _mp_quad(params, lambda e: e)


def mp_entropy_numeric(params: MPParams) -> float:
    """-(integral f(eps) eps ln(eps) deps); equals ln(N) - 1/(2Q)."""
    return -_mp_quad(params, lambda e: e * math.log(e))


def sqrt_log_integral_numeric(a: float, b: float) -> float:
    """integral_a^b sqrt((x-a)(b-x)) ln(x) dx by quadrature."""
    span = b - a

    def integrand(theta):
        s, c = math.sin(theta), math.cos(theta)
        x = a + span * s * s
        return span * s * c * math.log(x) * span * 2 * s * c

    val, _ = quad(integrand, 0.0, math.pi / 2.0, limit=200)
    return val


def sqrt_log_integral_closed(a: float, b: float) -> float:
    """Closed form of the same integral (hypergeometric-limit evaluation)."""
    if a < 0 or b <= a:
        raise ValueError("need 0 <= a < b")
    if a == 0.0:
        return (math.pi / 16.0) * b * b * (1.0 + 2.0 * math.log(b / 4.0))
    r = math.sqrt(b / a)
    return (math.pi / 16.0) * (
        -4 * a * a * r
        + a * a
        + 6 * a * b
        - 4 * a * b * r
        - 4 * math.log(2.0) * (a - b) ** 2
        + 2 * (a - b) ** 2 * math.log((math.sqrt(a) + math.sqrt(b)) ** 2)
        + b * b
    )


# ------------------------------------------------------------------ fits

@dataclass(frozen=True)
class FitResult:
    params: dict
    sigmas: dict
    window: tuple
    residual_norm: float
    method: str


def _window_mask(times: np.ndarray, window) -> np.ndarray:
    lo, hi = window
    return (times >= lo) & (times <= hi)


def auto_linear_window(times: np.ndarray, mean: np.ndarray, saturation: float,
                       t_lo: float = 0.5) -> tuple[float, float]:
    """[t_lo, t*] with t* the first time the mean exceeds 90% of saturation."""
    above = np.nonzero(mean > 0.9 * saturation)[0]
    t_hi = float(times[above[0]]) if len(above) else float(times[-1])
    return (t_lo, max(t_hi, t_lo))


def fit_linear_slope(record, window=None, saturation: float | None = None,
                     n_boot: int = 200, seed: int = 0) -> FitResult:
    """Least-squares line through the ensemble-mean trajectory.

    Uncertainties come from bootstrap resampling of realizations, since
    realization scatter dominates the grid-point noise.
    """
    times = record.times
    mean = record.mean.real
    if window is None:
        if saturation is None:
            raise FitDomainError("need an explicit window or a saturation target")
        window = auto_linear_window(times, mean, saturation)
    mask = _window_mask(times, window)
    if mask.sum() < 5:
        raise FitDomainError(f"window {window} holds {int(mask.sum())} points, need >= 5")
    t, y = times[mask], mean[mask]
    slope, intercept = np.polyfit(t, y, 1)
    resid = float(np.linalg.norm(y - (slope * t + intercept)))
    rng = np.random.default_rng(seed)
    data = record.per_realization.real
    boots = np.empty((n_boot, 2))
    for b in range(n_boot):
        rows = rng.integers(0, data.shape[0], size=data.shape[0])
        boots[b] = np.polyfit(t, data[rows].mean(axis=0)[mask], 1)
    return FitResult(
        params={"slope": float(slope), "intercept": float(intercept)},
        sigmas={"slope": float(boots[:, 0].std(ddof=1)),
                "intercept": float(boots[:, 1].std(ddof=1))},
        window=tuple(window),
        residual_norm=resid,
        method="linear-least-squares+bootstrap",
    )


def fit_exp_decay(record, window, n_boot: int = 200, seed: int = 0) -> FitResult:
    """Nonlinear fit of a*exp(-b t) to the real part of the trajectory."""
    times = record.times
    mean = record.mean.real
    mask = _window_mask(times, window)
    if mask.sum() < 5:
        raise FitDomainError(f"window {window} holds {int(mask.sum())} points, need >= 5")
    t, y = times[mask], mean[mask]
    if np.any(y <= 0):
        raise FitDomainError("non-positive data in the fit window")

    def model(tt, a, b):
        return a * np.exp(-b * tt)

    p0 = (float(y[0]), max(1.0, float(np.log(y[0] / y[-1]) / (t[-1] - t[0]))))
    popt, _ = curve_fit(model, t, y, p0=p0, maxfev=10000)
    resid = float(np.linalg.norm(y - model(t, *popt)))
    rng = np.random.default_rng(seed)
    data = record.per_realization.real
    boots = []
    for _ in range(n_boot):
        rows = rng.integers(0, data.shape[0], size=data.shape[0])
        ym = data[rows].mean(axis=0)[mask]
        if np.any(ym <= 0):
            continue
        try:
            boots.append(curve_fit(model, t, ym, p0=popt, maxfev=10000)[0])
        except RuntimeError:
            continue
    boots = np.array(boots) if boots else np.full((1, 2), np.nan)
    return FitResult(
        params={"a": float(popt[0]), "b": float(popt[1])},
        sigmas={"a": float(np.nanstd(boots[:, 0], ddof=1)) if len(boots) > 1 else float("inf"),
                "b": float(np.nanstd(boots[:, 1], ddof=1)) if len(boots) > 1 else float("inf")},
        window=tuple(window),
        residual_norm=resid,
        method="exp-least-squares+bootstrap",
    )


# ---------------------------------------------------------------- survey

@dataclass(frozen=True)
class SurveyResult:
    per_index_mean: np.ndarray
    grand_mean: float
    fraction: float
    realizations: int
    ensemble: str
    dim: int


def eigenstate_ee_survey(
    spec: EnsembleSpec,
    fraction: float,
    realizations: int,
    master_seed: int = 0,
    seed_fn=None,
) -> SurveyResult:
    """Mean eigenvector entanglement entropy, indexed by eigenvalue order.

    Each realization diagonalizes one ensemble draw and computes the
    entropy of every eigenvector across the fraction-l cut.
    """
    n_qubits = int(round(math.log2(spec.dim)))
    if 1 << n_qubits != spec.dim:
        raise InvalidSpecError("survey needs a power-of-two dimension")
    bp = Bipartition.from_fraction(n_qubits, fraction)
    acc = np.zeros(spec.dim)
    for r in range(realizations):
        seed = seed_fn(r) if seed_fn else master_seed + r
        h = sample_gaussian(EnsembleSpec(spec.kind, spec.dim, seed))
        _, vecs = np.linalg.eigh(h)
        acc += batched_entropy(vecs, bp)
    per_index = acc / realizations
    return SurveyResult(
        per_index_mean=per_index,
        grand_mean=float(per_index.mean()),
        fraction=fraction,
        realizations=realizations,
        ensemble=spec.kind,
        dim=spec.dim,
    )


# ----------------------------------------------------------------- sweep

@dataclass(frozen=True)
class SweepVerdict:
    value: float
    saturates: bool
    mean_window: float
    se_window: float
    target: float
    gap: float


@dataclass(frozen=True)
class SweepResult:
    param: str
    verdicts: tuple
    critical_value: float | None
    bracket: tuple | None
    monotone: bool


def saturation_verdict(
    record, target: float, window: tuple = (25.0, 30.0), extra_tol: float = 0.05
) -> SweepVerdict:
    """Did the ensemble-mean entropy come within 3 SE + extra_tol of target?

    One-sided: overshooting the target still counts as saturated.
    """
    mask = _window_mask(record.times, window)
    if not mask.any():
        raise FitDomainError(f"window {window} outside the time grid")
    per_real = record.per_realization.real[:, mask].mean(axis=1)
    mean_w = float(per_real.mean())
    se_w = float(per_real.std(ddof=1) / math.sqrt(len(per_real))) if len(per_real) > 1 else 0.0
    gap = target - mean_w
    return SweepVerdict(
        value=float("nan"),
        saturates=bool(gap <= 3.0 * se_w + extra_tol),
        mean_window=mean_w,
        se_window=se_w,
        target=target,
        gap=float(gap),
    )


def sweep_critical_point(values, verdicts) -> tuple[float | None, tuple | None, bool]:
    """Largest failing value plus its bracketing pair; flags non-monotonicity."""
    flags = [v.saturates for v in verdicts]
    monotone = all(flags[i] <= flags[i + 1] for i in range(len(flags) - 1))
    failing = [v for v, ok in zip(values, flags) if not ok]
    if not failing:
        return None, None, monotone
    critical = max(failing)
    larger = [v for v in values if v > critical]
    bracket = (critical, min(larger)) if larger else (critical, None)
    return critical, bracket, monotone
