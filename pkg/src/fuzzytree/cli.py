"""Command-line front end: train, evaluate, export-pareto, describe.

Flags mirror the run-configuration fields with their standard defaults; a
JSON config file can supply any subset, with explicit flags taking
precedence.  Exit codes: 0 success, 2 configuration problems, 3 data
problems, 4 model-file problems, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .data import NonNumericValueError, RaggedRowError
from .train import (
    EXIT_CONFIG,
    EXIT_DATA,
    EXIT_MODEL,
    ConfigError,
    ModelFileError,
    RunConfig,
    config_from_dict,
    config_to_dict,
    describe_model,
    evaluate_model,
    export_pareto,
    train_run,
    write_predictions_csv,
)


def _dataset_spec_from_args(args) -> dict:
    if args.gas_furnace is not None:
        return {
            "gas_furnace_csv": args.gas_furnace,
            "header": bool(args.header),
        }
    if args.csv is not None:
        if args.inputs is None or args.target is None:
            raise ConfigError(
                ["dataset: --csv needs --inputs and --target column selections"]
            )
        return {
            "csv": args.csv,
            "input_columns": [int(c) for c in args.inputs.split(",")],
            "target_column": int(args.target),
            "header": bool(args.header),
        }
    if args.dataset == "plant":
        return {"generator": "plant", "n_patterns": args.n_patterns or 400}
    if args.dataset == "mackey-glass":
        spec = {
            "generator": "mackey_glass",
            "tau": args.mg_tau,
            "noise_std": args.mg_noise_std,
        }
        return spec
    raise ConfigError([f"dataset: unknown dataset {args.dataset!r} and no --csv given"])


def _split_spec_from_args(args) -> dict:
    text = args.split
    if text is None:
        return {"scheme": "fixed", "n_train": 200}
    name, _, arg = text.partition(":")
    if name == "none":
        return {"scheme": "none"}
    if name == "fixed":
        return {"scheme": "fixed", "n_train": int(arg)}
    if name == "holdout":
        return {"scheme": "holdout", "fraction": float(arg)}
    if name == "kfold":
        return {"scheme": "kfold", "k": int(arg)}
    raise ConfigError([f"split: unknown scheme {text!r} (use fixed:N, holdout:F, kfold:K, none)"])


def _add_dataset_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", default=None, help="built-in generator: plant or mackey-glass")
    p.add_argument("--n-patterns", type=int, default=None, help="pattern count for plant")
    p.add_argument("--mg-tau", type=float, default=30.0, help="delay constant (mackey-glass)")
    p.add_argument("--mg-noise-std", type=float, default=0.0,
                   help="Gaussian noise level on the series (mackey-glass)")
    p.add_argument("--csv", default=None, help="path to a comma-delimited data file")
    p.add_argument("--gas-furnace", default=None,
                   help="two-column (u, y) furnace series file; lag patterns are formed")
    p.add_argument("--inputs", default=None, help="comma-separated input column indices")
    p.add_argument("--target", default=None, help="target column index")
    p.add_argument("--header", action="store_true", help="first CSV row is a header")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzytree",
        description="Evolve hierarchical fuzzy inference trees (structure by "
        "multiobjective genetic programming, parameters by differential evolution).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="run the two-phase training pipeline")
    t.add_argument("--config", default=None, help="JSON file with run-config fields")
    t.add_argument("--out", default=None, help="output directory")
    t.add_argument("--seed", type=int, default=None)
    t.add_argument("--fis-kind", choices=["type1", "type2"], default=None)
    t.add_argument("--objective-mode", choices=["multi", "single"], default=None)
    t.add_argument("--repetitions", type=int, default=None)
    t.add_argument("--rounds", type=int, default=None)
    t.add_argument("--max-depth", type=int, default=None)
    t.add_argument("--max-inputs", type=int, default=None)
    t.add_argument("--gp-population", type=int, default=None)
    t.add_argument("--gp-iterations", type=int, default=None)
    t.add_argument("--crossover-prob", type=float, default=None)
    t.add_argument("--mating-pool", type=int, default=None)
    t.add_argument("--de-population", type=int, default=None)
    t.add_argument("--de-f", type=float, default=None)
    t.add_argument("--de-cr", type=float, default=None)
    t.add_argument("--de-iterations", type=int, default=None)
    t.add_argument("--de-stall-window", type=int, default=None)
    t.add_argument("--split", default=None, help="fixed:N | holdout:F | kfold:K | none")
    _add_dataset_flags(t)

    e = sub.add_parser("evaluate", help="score a stored model on a dataset")
    e.add_argument("model", help="model.json path")
    e.add_argument("--out", default=None, help="predictions CSV path")
    _add_dataset_flags(e)

    x = sub.add_parser("export-pareto", help="emit the final front of a run")
    x.add_argument("rundir", help="output directory of a finished multiobjective run")
    x.add_argument("--out", default=None, help="write CSV here instead of stdout")

    d = sub.add_parser("describe", help="summarize a stored model")
    d.add_argument("model", help="model.json path")

    return parser


_FLAG_FIELDS = [
    ("fis_kind", "fis_kind"),
    ("objective_mode", "objective_mode"),
    ("repetitions", "repetitions"),
    ("rounds", "rounds"),
    ("max_depth", "max_depth"),
    ("max_inputs", "max_inputs"),
    ("gp_population", "gp_population"),
    ("gp_iterations", "gp_iterations"),
    ("crossover_prob", "crossover_prob"),
    ("mating_pool", "mating_pool"),
    ("de_population", "de_population"),
    ("de_f", "de_f"),
    ("de_cr", "de_cr"),
    ("de_iterations", "de_iterations"),
    ("de_stall_window", "de_stall_window"),
    ("seed", "seed"),
]


def _config_from_train_args(args) -> RunConfig:
    base = {}
    if args.config is not None:
        base = json.loads(Path(args.config).read_text())
    cfg = config_from_dict(base)
    for attr, fieldname in _FLAG_FIELDS:
        value = getattr(args, attr)
        if value is not None:
            setattr(cfg, fieldname, value)
    if args.out is not None:
        cfg.output_dir = args.out
    if args.dataset is not None or args.csv is not None or args.gas_furnace is not None:
        cfg.dataset = _dataset_spec_from_args(args)
    if args.split is not None:
        cfg.split = _split_spec_from_args(args)
    return cfg


def _cmd_train(args) -> int:
    cfg = _config_from_train_args(args)
    report = train_run(cfg)
    agg = report.aggregate()
    best = report.best_repetition()
    print(f"run written to {cfg.output_dir} (config {report.config_hash})")
    for rep in report.repetitions:
        test = "" if rep.test_rmse is None else f", test rmse {rep.test_rmse:.6g}"
        print(
            f"  rep {rep.repetition}: train rmse {rep.train_rmse:.6g}{test}, "
            f"{rep.complexity} parameters, {rep.seconds:.1f}s"
        )
    print(
        f"best repetition {best.repetition}: train rmse {best.train_rmse:.6g}, "
        f"mean train rmse {agg['train_rmse']['mean']:.6g}"
    )
    return 0


def _cmd_evaluate(args) -> int:
    spec = _dataset_spec_from_args(args)
    metrics, pred, ds = evaluate_model(args.model, spec)
    print(f"rmse: {metrics['rmse']!r}")
    print(f"correlation: {metrics['correlation']!r}")
    if args.out is not None:
        write_predictions_csv(args.out, ds.targets, pred)
        print(f"predictions written to {args.out}")
    return 0


def _cmd_export_pareto(args) -> int:
    rows = export_pareto(args.rundir)
    lines = ["rmse,parameter_count,rank"] + [
        f"{r!r},{c},{rank}" for r, c, rank in rows
    ]
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        Path(args.out).write_text(text)
        print(f"front written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_describe(args) -> int:
    print(describe_model(args.model))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            return _cmd_train(args)
        if args.command == "evaluate":
            return _cmd_evaluate(args)
        if args.command == "export-pareto":
            return _cmd_export_pareto(args)
        if args.command == "describe":
            return _cmd_describe(args)
        raise AssertionError(args.command)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except (RaggedRowError, NonNumericValueError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ModelFileError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
