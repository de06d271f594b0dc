"""Command-line entry points.

Exit codes: 0 success, 2 config error, 3 numeric error, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import (
    MPParams,
    fit_exp_decay,
    fit_linear_slope,
    mp_entropy_numeric,
    page_bound_asymptotic,
    page_exact,
)
from .errors import (
    ConfigError,
    FitDomainError,
    InvalidSpecError,
    NumericSanityError,
    ResourceCapError,
)
from .runner import RunConfig, emit_report, load_record, model_stats, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_RESOURCE = 4


def _load_config(args) -> RunConfig:
    cfg = RunConfig.from_yaml(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.jobs is not None:
        overrides["jobs"] = args.jobs
    if overrides:
        doc = dict(cfg.raw)
        doc.update(overrides)
        cfg = RunConfig.from_dict(doc)
    return cfg


def _add_run_args(sub, pipelines):
    sub.add_argument("--config", required=True, help="YAML run configuration")
    sub.add_argument("--seed", type=int, default=None, help="override master_seed")
    sub.add_argument("--jobs", type=int, default=None, help="override worker count")
    sub.add_argument("--out", default=None, help="override output directory")
    sub.set_defaults(pipelines=pipelines)


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    if cfg.pipeline not in args.pipelines:
        raise ConfigError(
            f"config pipeline {cfg.pipeline!r} does not match this subcommand "
            f"(expected one of {args.pipelines})"
        )
    run(cfg, output=args.out)
    return EXIT_OK


def _cmd_build(args) -> int:
    cfg = _load_config(args)
    stats = model_stats(cfg)
    text = json.dumps(stats, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    n, m = args.n_small, args.m_large
    row = {
        "dim_small": n,
        "dim_large": m,
        "page_exact": page_exact(n, m),
        "page_asymptotic": page_bound_asymptotic(n, m),
        "mp_numeric": mp_entropy_numeric(MPParams(n, m)),
    }
    text = json.dumps(row, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def _cmd_fit(args) -> int:
    record = load_record(args.record_dir, args.stem)
    if args.kind == "linear":
        res = fit_linear_slope(record, window=tuple(args.window) if args.window else None,
                               saturation=args.saturation)
    else:
        if not args.window:
            raise ConfigError("exp fit needs an explicit --window")
        res = fit_exp_decay(record, window=tuple(args.window))
    doc = {"params": res.params, "sigmas": res.sigmas, "window": list(res.window),
           "residual_norm": res.residual_norm, "method": res.method}
    text = json.dumps(doc, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def _cmd_report(args) -> int:
    records = {stem: load_record(args.record_dir, stem) for stem in args.stems}
    references = {}
    if args.reference:
        for item in args.reference:
            name, value = item.split("=", 1)
            references[name] = float(value)
    emit_report(records, args.out, references=references, plot=args.plot)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sykdyn",
        description="SYK-family entanglement and autocorrelation dynamics",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("build", help="build model realizations, print statistics")
    _add_run_args(sub, ("ee", "autocorr", "sweep"))
    sub.set_defaults(func=_cmd_build)

    for name, pipelines, help_text in [
        ("evolve-ee", ("ee",), "entanglement-entropy trajectories"),
        ("autocorr", ("autocorr",), "two-point autocorrelation trajectories"),
        ("rmt-baseline", ("ee", "autocorr"), "variance-matched random-matrix baselines"),
        ("survey", ("survey",), "eigenstate entanglement survey"),
        ("sweep", ("sweep",), "sparseness sweep with saturation verdicts"),
    ]:
        sub = subs.add_parser(name, help=help_text)
        _add_run_args(sub, pipelines)
        sub.set_defaults(func=_cmd_run)

    sub = subs.add_parser("bounds", help="Page / Marchenko-Pastur reference values")
    sub.add_argument("--n-small", type=int, required=True)
    sub.add_argument("--m-large", type=int, required=True)
    sub.add_argument("--out", default=None)
    sub.set_defaults(func=_cmd_bounds)

    sub = subs.add_parser("fit", help="fit a saved trajectory record")
    sub.add_argument("--record-dir", required=True)
    sub.add_argument("--stem", required=True, help="record file stem (label slug)")
    sub.add_argument("--kind", choices=("linear", "exp"), default="linear")
    sub.add_argument("--window", type=float, nargs=2, default=None)
    sub.add_argument("--saturation", type=float, default=None,
                     help="saturation target for the automatic linear window")
    sub.add_argument("--out", default=None)
    sub.set_defaults(func=_cmd_fit)

    sub = subs.add_parser("report", help="bundle records into plot-ready files")
    sub.add_argument("--record-dir", required=True)
    sub.add_argument("--stems", nargs="+", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--reference", action="append", default=None,
                     metavar="NAME=VALUE")
    sub.add_argument("--plot", action="store_true")
    sub.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidSpecError, FileNotFoundError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (NumericSanityError, FitDomainError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
