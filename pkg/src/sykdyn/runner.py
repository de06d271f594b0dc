"""Run configuration, deterministic seeding, ensemble orchestration, output.

A run is described by a versioned YAML document (see configs/ for the
committed figure recipes).  Realization seeds derive from the master seed
through a fixed splitmix64-style mix, so any recipe re-run with the same
master seed reproduces its outputs byte for byte in single-threaded mode.
Numeric output is serialized with shortest-round-trip precision (repr),
so files read back to the exact in-memory doubles.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .analysis import (
    MPParams,
    eigenstate_ee_survey,
    mp_entropy_numeric,
    page_bound_asymptotic,
    page_exact,
    saturation_verdict,
    sweep_critical_point,
)
from .errors import ConfigError, DimensionMismatchError
from .models import FULL, ModelSpec, build_hamiltonian, hamiltonian_stats
from .observables import (
    Probe,
    TrajectoryRecord,
    autocorrelation,
    autocorrelation_sector,
    baseline_hamiltonian,
    ee_trajectory,
    ee_trajectory_sector,
    initial_state,
    majorana_probe,
    spin_probe,
)
from .rmt import ENSEMBLES, EnsembleSpec
from .models import VARIANTS, target_variance
from .states import Bipartition, project_to_sector

SCHEMA_VERSION = 1

_MIX_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def mix64(master_seed: int, k: int) -> int:
    """Fixed splitmix64 seed derivation; stable across versions."""
    z = (master_seed + (k + 1) * _MIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def curve_seed(master_seed: int, curve_index: int) -> int:
    return mix64(master_seed, curve_index)


def realization_seed(master_seed: int, curve_index: int, r: int) -> int:
    return mix64(curve_seed(master_seed, curve_index), r)


# ------------------------------------------------------------- config

@dataclass(frozen=True)
class TimeGrid:
    start: float = 0.0
    stop: float = 30.0
    num: int = 301

    def array(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


@dataclass(frozen=True)
class CurveSpec:
    """One curve of a figure: a model or a variance-matched ensemble."""

    label: str
    model: ModelSpec | None = None
    ensemble: EnsembleSpec | None = None
    match: ModelSpec | None = None
    realizations: int | None = None
    bipartition: dict | None = None
    probe: dict | None = None
    state: str | None = None

    @property
    def is_ensemble(self) -> bool:
        return self.ensemble is not None


@dataclass(frozen=True)
class RunConfig:
    pipeline: str
    curves: tuple[CurveSpec, ...] = ()
    times: TimeGrid = TimeGrid()
    realizations: int = 50
    master_seed: int = 0
    jobs: int = 1
    output: str = "out/run"
    state: str = "product"
    sector: str = FULL
    bipartition: dict = field(default_factory=lambda: {"fraction": 0.5})
    probe: dict = field(default_factory=lambda: {"kind": "auto", "index": 1})
    sweep: dict | None = None
    survey: dict | None = None
    bounds: dict | None = None
    raw: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_yaml(cls, path) -> "RunConfig":
        with open(path) as fh:
            doc = yaml.safe_load(fh)
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: config must be a mapping")
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigError(f"schema_version must be {SCHEMA_VERSION}, got {version!r}")
        pipeline = doc.get("pipeline")
        if pipeline not in ("ee", "autocorr", "survey", "sweep", "bounds"):
            raise ConfigError(f"unknown pipeline {pipeline!r}")
        try:
            times = TimeGrid(**doc.get("times", {}))
            curves = tuple(
                _parse_curve(c, i) for i, c in enumerate(doc.get("curves", []))
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        if pipeline == "sweep" and "model" not in doc:
            raise ConfigError("sweep pipeline needs a base 'model'")
        if pipeline == "sweep":
            curves = ()
        cfg = cls(
            pipeline=pipeline,
            curves=curves,
            times=times,
            realizations=int(doc.get("realizations", 50)),
            master_seed=int(doc.get("master_seed", 0)),
            jobs=int(doc.get("jobs", 1)),
            output=str(doc.get("output", "out/run")),
            state=str(doc.get("state", "product")),
            sector=str(doc.get("sector", FULL)),
            bipartition=dict(doc.get("bipartition", {"fraction": 0.5})),
            probe=dict(doc.get("probe", {"kind": "auto", "index": 1})),
            sweep=doc.get("sweep"),
            survey=doc.get("survey"),
            bounds=doc.get("bounds"),
            raw=doc,
        )
        _validate(cfg, doc)
        return cfg

    def canonical(self) -> dict:
        """Config as written (the hash covers every field the user set)."""
        return self.raw

    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _parse_model(d: dict) -> ModelSpec:
    if "variant" not in d:
        raise ConfigError(f"model needs a 'variant': {d}")
    if d["variant"] not in VARIANTS:
        raise ConfigError(f"unknown variant {d['variant']!r}")
    return ModelSpec(
        variant=d["variant"],
        n=int(d["n"]),
        p=float(d.get("p", 1.0)),
        kappa=int(d["kappa"]) if "kappa" in d else None,
        seed=int(d.get("seed", 0)),
    )


def _parse_curve(d: dict, index: int) -> CurveSpec:
    if "model" not in d:
        raise ConfigError(f"curve {index} needs a 'model'")
    m = d["model"]
    label = str(d.get("label", f"curve{index}"))
    common = dict(
        realizations=int(d["realizations"]) if "realizations" in d else None,
        bipartition=d.get("bipartition"),
        probe=d.get("probe"),
        state=d.get("state"),
    )
    if "kind" in m:
        if m["kind"] not in ENSEMBLES:
            raise ConfigError(f"unknown ensemble kind {m['kind']!r}")
        match = _parse_model(m["match"]) if "match" in m else None
        return CurveSpec(
            label=label,
            ensemble=EnsembleSpec(m["kind"], int(m["dim"])),
            match=match,
            **common,
        )
    return CurveSpec(label=label, model=_parse_model(m), **common)


def _validate(cfg: RunConfig, doc: dict) -> None:
    if cfg.pipeline in ("ee", "autocorr") and not cfg.curves:
        raise ConfigError(f"{cfg.pipeline} pipeline needs at least one curve")
    if cfg.pipeline == "survey" and not cfg.curves:
        raise ConfigError("survey pipeline needs ensemble curves")
    if cfg.pipeline == "bounds" and not (cfg.bounds and cfg.bounds.get("pairs")):
        raise ConfigError("bounds pipeline needs bounds.pairs")
    if cfg.realizations < 1:
        raise ConfigError("realizations must be >= 1")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    if cfg.sector not in ("full", "even", "odd"):
        raise ConfigError(f"unknown sector {cfg.sector!r}")
    if cfg.state not in ("product", "max-entangled"):
        raise ConfigError(f"unknown state {cfg.state!r}")
    for curve in cfg.curves:
        if curve.state is not None and curve.state not in ("product", "max-entangled"):
            raise ConfigError(f"curve {curve.label!r}: unknown state {curve.state!r}")
    if cfg.pipeline == "sweep":
        sw = cfg.sweep or {}
        if sw.get("param") not in ("p", "kappa"):
            raise ConfigError("sweep.param must be 'p' or 'kappa'")
        if not sw.get("values"):
            raise ConfigError("sweep.values must be a nonempty list")


# ----------------------------------------------------- curve resolution

def _curve_qubits(cfg: RunConfig, curve: CurveSpec) -> int:
    if curve.model is not None:
        return curve.model.n_qubits
    n = int(round(math.log2(curve.ensemble.dim)))
    if 1 << n != curve.ensemble.dim:
        raise ConfigError(f"ensemble dim {curve.ensemble.dim} is not a power of two")
    if cfg.pipeline == "autocorr" and cfg.sector != FULL:
        return n + 1  # two sector blocks embedded in a doubled space
    return n


def _curve_bipartition(cfg: RunConfig, curve: CurveSpec) -> Bipartition:
    spec = curve.bipartition or cfg.bipartition
    n = _curve_qubits(cfg, curve)
    if "fraction" in spec:
        return Bipartition.from_fraction(n, float(spec["fraction"]))
    if "traced_qubits" in spec:
        return Bipartition.from_traced_count(n, int(spec["traced_qubits"]))
    if "kept_qubits" in spec:
        return Bipartition.leading(n, int(spec["kept_qubits"]))
    raise ConfigError(f"bipartition needs fraction/traced_qubits/kept_qubits: {spec}")


def _curve_probe(cfg: RunConfig, curve: CurveSpec) -> Probe:
    spec = curve.probe or cfg.probe
    kind = spec.get("kind", "auto")
    index = int(spec.get("index", 1))
    model = curve.model or curve.match
    if model is None:
        raise ConfigError(f"curve {curve.label!r}: autocorrelation baseline needs a match model")
    if kind == "auto":
        kind = "spin" if model.variant == "spin-syk" else "majorana"
    if kind == "majorana":
        return majorana_probe(index, model.n_operators)
    if kind == "spin":
        return spin_probe(index, model.n)
    raise ConfigError(f"unknown probe kind {kind!r}")


def _curve_realizations(cfg: RunConfig, curve: CurveSpec) -> int:
    return curve.realizations if curve.realizations is not None else cfg.realizations


def _one_trajectory(cfg: RunConfig, curve_index: int, r: int) -> np.ndarray:
    """Single realization worker; pure function of (config, indices)."""
    curve = cfg.curves[curve_index]
    seed = realization_seed(cfg.master_seed, curve_index, r)
    times = cfg.times.array()
    bp = _curve_bipartition(cfg, curve)
    psi0 = initial_state(curve.state or cfg.state, bp)
    if curve.model is not None:
        spec = curve.model
        h = build_hamiltonian(
            ModelSpec(spec.variant, spec.n, p=spec.p, kappa=spec.kappa, seed=seed)
        )
        if cfg.pipeline == "ee":
            if cfg.sector == FULL:
                return ee_trajectory(h, psi0, bp, times)
            return ee_trajectory_sector(h, psi0, bp, times, cfg.sector)
        probe = _curve_probe(cfg, curve)
        if cfg.sector == FULL:
            return autocorrelation(h, psi0, probe, times)
        return autocorrelation_sector(h, psi0, probe, times, cfg.sector)
    # ensemble baseline
    if curve.match is None:
        raise ConfigError(f"curve {curve.label!r}: baseline needs a 'match' model")
    target = target_variance(curve.match)
    sector_blocks = cfg.pipeline == "autocorr" and cfg.sector != FULL
    h = baseline_hamiltonian(curve.ensemble, target, seed, sector_dims=sector_blocks)
    if cfg.pipeline == "ee":
        return ee_trajectory(h, psi0, bp, times)
    probe = _curve_probe(cfg, curve)
    if sector_blocks:
        psi0 = project_to_sector(psi0, cfg.sector)
    return autocorrelation(h, psi0, probe, times)


def _ensemble_record(cfg: RunConfig, curve_index: int) -> TrajectoryRecord:
    curve = cfg.curves[curve_index]
    n_real = _curve_realizations(cfg, curve)
    seeds = [realization_seed(cfg.master_seed, curve_index, r) for r in range(n_real)]
    if cfg.jobs == 1:
        rows = [_one_trajectory(cfg, curve_index, r) for r in range(n_real)]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_one_trajectory, [cfg] * n_real,
                                 [curve_index] * n_real, range(n_real)))
    per_real = np.array(rows)
    meta = {
        "label": curve.label,
        "observable": cfg.pipeline,
        "state": curve.state or cfg.state,
        "sector": cfg.sector,
        "kept_qubits": list(_curve_bipartition(cfg, curve).kept)
        if cfg.pipeline == "ee" else None,
        "probe": _curve_probe(cfg, curve).label if cfg.pipeline == "autocorr" else None,
        "source": _source_dict(curve),
        "seeds": seeds,
        "config_hash": cfg.config_hash(),
    }
    return TrajectoryRecord(cfg.pipeline, cfg.times.array(), per_real, meta=meta)


def _source_dict(curve: CurveSpec) -> dict:
    if curve.model is not None:
        m = curve.model
        return {"variant": m.variant, "n": m.n, "p": m.p, "kappa": m.kappa}
    d = {"kind": curve.ensemble.kind, "dim": curve.ensemble.dim}
    if curve.match is not None:
        d["match"] = {"variant": curve.match.variant, "n": curve.match.n}
    return d


# ------------------------------------------------------------- output

def _fmt(x) -> str:
    return repr(float(x))


def save_record(record: TrajectoryRecord, directory, stem: str) -> Path:
    """CSV with full-precision aggregates plus an NPZ with every realization."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    csv_path = directory / f"{stem}.csv"
    complex_data = np.iscomplexobj(record.per_realization)
    with open(csv_path, "w") as fh:
        if complex_data:
            fh.write("t,mean_re,mean_im,sem_re,sem_im,mean_abs\n")
            for k, t in enumerate(record.times):
                m, s = record.mean[k], record.std_error[k]
                fh.write(",".join([_fmt(t), _fmt(m.real), _fmt(m.imag),
                                   _fmt(s.real), _fmt(s.imag), _fmt(abs(m))]) + "\n")
        else:
            fh.write("t,mean,sem\n")
            for k, t in enumerate(record.times):
                fh.write(",".join([_fmt(t), _fmt(record.mean[k]),
                                   _fmt(record.std_error[k])]) + "\n")
    np.savez_compressed(
        directory / f"{stem}.npz",
        times=record.times,
        per_realization=record.per_realization,
        observable=np.array(record.observable),
        meta=np.array(json.dumps(record.meta, sort_keys=True)),
    )
    return csv_path


def load_record(directory, stem: str) -> TrajectoryRecord:
    data = np.load(Path(directory) / f"{stem}.npz")
    return TrajectoryRecord(
        str(data["observable"]),
        data["times"],
        data["per_realization"],
        meta=json.loads(str(data["meta"])),
    )


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [[float(x) for x in line.split(",")] for line in fh if line.strip()]
    cols = np.array(rows).T
    return {name: cols[i] for i, name in enumerate(header)}


def _slug(label: str) -> str:
    return "".join(c if c.isalnum() or c in "-._" else "-" for c in label)


def write_manifest(cfg: RunConfig, directory, seeds: dict, wall_time_s: float) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.canonical(),
        "config_hash": cfg.config_hash(),
        "seeds": seeds,
        "software_version": __version__,
        "wall_time_s": wall_time_s,
    }
    path = directory / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return path


# ---------------------------------------------------------------- run

def run(cfg: RunConfig, output: str | None = None):
    """Execute a configured pipeline and write its outputs.

    Returns the in-memory results: {label: TrajectoryRecord} for
    trajectory pipelines, {label: SurveyResult} for surveys, a
    (SweepResult, {label: record}) pair for sweeps, and the bounds table
    for the bounds pipeline.
    """
    t0 = time.perf_counter()
    out_dir = Path(output if output is not None else cfg.output)
    if cfg.pipeline in ("ee", "autocorr"):
        records = {}
        seeds = {}
        for i, curve in enumerate(cfg.curves):
            rec = _ensemble_record(cfg, i)
            records[curve.label] = rec
            seeds[curve.label] = rec.meta["seeds"]
            save_record(rec, out_dir, _slug(curve.label))
        write_manifest(cfg, out_dir, seeds, time.perf_counter() - t0)
        return records
    if cfg.pipeline == "survey":
        return _run_survey(cfg, out_dir, t0)
    if cfg.pipeline == "sweep":
        return _run_sweep(cfg, out_dir, t0)
    if cfg.pipeline == "bounds":
        return _run_bounds(cfg, out_dir, t0)
    raise ConfigError(f"unknown pipeline {cfg.pipeline!r}")


def _run_survey(cfg: RunConfig, out_dir: Path, t0: float):
    fraction = float((cfg.survey or {}).get("fraction", 0.5))
    results = {}
    seeds = {}
    for i, curve in enumerate(cfg.curves):
        if curve.ensemble is None:
            raise ConfigError("survey curves must be ensembles")
        n_real = _curve_realizations(cfg, curve)
        seed_list = [realization_seed(cfg.master_seed, i, r) for r in range(n_real)]
        res = eigenstate_ee_survey(
            curve.ensemble, fraction, n_real, seed_fn=lambda r, s=seed_list: s[r]
        )
        results[curve.label] = res
        seeds[curve.label] = seed_list
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / f"{_slug(curve.label)}-survey.csv", "w") as fh:
            fh.write("index,mean_entropy\n")
            for k, v in enumerate(res.per_index_mean):
                fh.write(f"{k},{_fmt(v)}\n")
    summary = {
        label: {"grand_mean": res.grand_mean, "dim": res.dim,
                "fraction": res.fraction, "realizations": res.realizations}
        for label, res in results.items()
    }
    with open(out_dir / "survey.json", "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    write_manifest(cfg, out_dir, seeds, time.perf_counter() - t0)
    return results


def _sweep_config(cfg: RunConfig, value, value_index: int) -> RunConfig:
    """Materialize the EE config for one sweep value (own seed stream)."""
    sw = cfg.sweep
    base = dict(cfg.raw["model"])
    if sw["param"] == "p":
        base["p"] = float(value)
        label = f"p={value}"
    else:
        base["kappa"] = int(value)
        label = f"kappa={value}"
    doc = dict(cfg.raw)
    doc = {k: v for k, v in doc.items() if k not in ("model", "sweep")}
    doc["pipeline"] = "ee"
    doc["curves"] = [{"label": label, "model": base}]
    doc["master_seed"] = mix64(cfg.master_seed, value_index)
    return RunConfig.from_dict(doc)


def _run_sweep(cfg: RunConfig, out_dir: Path, t0: float):
    sw = cfg.sweep
    window = tuple(sw.get("window", (25.0, 30.0)))
    extra_tol = float(sw.get("tolerance_nats", 0.05))
    values = list(sw["values"])
    verdicts = []
    records = {}
    seeds = {}
    for value_index, value in enumerate(values):
        sub = _sweep_config(cfg, value, value_index)
        rec = _ensemble_record(sub, 0)
        label = sub.curves[0].label
        records[label] = rec
        seeds[label] = rec.meta["seeds"]
        save_record(rec, out_dir, _slug(label))
        bp = _curve_bipartition(sub, sub.curves[0])
        target = page_exact(*bp.schmidt_dims)
        v = saturation_verdict(rec, target, window=window, extra_tol=extra_tol)
        verdicts.append(
            type(v)(value=float(value), saturates=v.saturates, mean_window=v.mean_window,
                    se_window=v.se_window, target=v.target, gap=v.gap)
        )
    critical, bracket, monotone = sweep_critical_point(values, verdicts)
    from .analysis import SweepResult

    result = SweepResult(sw["param"], tuple(verdicts), critical, bracket, monotone)
    table = {
        "param": sw["param"],
        "window": list(window),
        "tolerance_nats": extra_tol,
        "verdicts": [
            {"value": v.value, "saturates": v.saturates, "mean_window": v.mean_window,
             "se_window": v.se_window, "target": v.target, "gap": v.gap}
            for v in verdicts
        ],
        "critical_value": critical,
        "bracket": list(bracket) if bracket else None,
        "monotone": monotone,
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "verdicts.json", "w") as fh:
        json.dump(table, fh, sort_keys=True, indent=2)
        fh.write("\n")
    write_manifest(cfg, out_dir, seeds, time.perf_counter() - t0)
    return result, records


def _run_bounds(cfg: RunConfig, out_dir: Path, t0: float):
    rows = []
    for pair in cfg.bounds["pairs"]:
        n, m = int(pair[0]), int(pair[1])
        rows.append({
            "dim_small": n,
            "dim_large": m,
            "page_exact": page_exact(n, m),
            "page_asymptotic": page_bound_asymptotic(n, m),
            "mp_numeric": mp_entropy_numeric(MPParams(n, m)),
        })
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "bounds.json", "w") as fh:
        json.dump(rows, fh, sort_keys=True, indent=2)
        fh.write("\n")
    write_manifest(cfg, out_dir, {}, time.perf_counter() - t0)
    return rows


# -------------------------------------------------------------- report

def emit_report(records: dict, out_dir, references: dict | None = None,
                fits: dict | None = None, plot: bool = False) -> Path:
    """Plot-ready bundle: shared-grid CSV, reference values, optional figure."""
    if not records:
        raise ValueError("no records to report")
    labels = list(records)
    times = records[labels[0]].times
    for label in labels[1:]:
        if not np.array_equal(records[label].times, times):
            raise DimensionMismatchError(f"record {label!r} is on a different time grid")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    bundle = out_dir / "report.csv"
    with open(bundle, "w") as fh:
        cols = ["t"]
        for label in labels:
            cols += [f"{_slug(label)}:mean", f"{_slug(label)}:sem"]
        fh.write(",".join(cols) + "\n")
        for k, t in enumerate(times):
            row = [_fmt(t)]
            for label in labels:
                rec = records[label]
                row += [_fmt(rec.mean[k].real), _fmt(rec.std_error[k].real)]
            fh.write(",".join(row) + "\n")
    doc = {"references": references or {}, "fits": fits or {}}
    with open(out_dir / "report.json", "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")
    if plot:
        _render_plot(records, references or {}, out_dir / "report.pdf")
    return bundle


def _render_plot(records: dict, references: dict, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, rec in records.items():
        ax.errorbar(rec.times, rec.mean.real, yerr=np.abs(rec.std_error), label=label,
                    errorevery=max(1, len(rec.times) // 25))
    for name, value in references.items():
        ax.axhline(value, color="k", ls="--", lw=0.8)
        ax.annotate(name, (rec.times[-1], value), fontsize=7, va="bottom", ha="right")
    ax.set_xlabel("t")
    ax.set_ylabel(records[next(iter(records))].observable)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def model_stats(cfg: RunConfig) -> dict:
    """Build the r=0 realization of each curve and report its statistics."""
    out = {}
    for i, curve in enumerate(cfg.curves):
        if curve.model is None:
            continue
        seed = realization_seed(cfg.master_seed, i, 0)
        spec = curve.model
        h = build_hamiltonian(ModelSpec(spec.variant, spec.n, p=spec.p,
                                        kappa=spec.kappa, seed=seed))
        st = hamiltonian_stats(h)
        out[curve.label] = {
            "seed": seed,
            "term_count": st.term_count,
            "trace_h2_over_dim": st.trace_h2_over_dim,
            "max_coeff": st.max_coeff,
            "target_variance": target_variance(spec),
        }
    return out
