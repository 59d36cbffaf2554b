"""End-to-end runs: configuration, the two-phase training loop, model files,
evaluation and reports.

A run is ``repetitions`` independent repetitions (sub-seeded from the master
seed by a counter rule), each doing ``rounds`` alternations of structure
search -> best-front pick -> parameter tuning.  Artifacts land in an output
directory: a JSON model per repetition, per-phase delimited logs, a
deterministic metrics report (report.csv) and a wall-clock sidecar
(timing.csv) kept separate so reports stay byte-reproducible.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import data as datamod
from .data import Dataset, MinMaxScaler, apply_normalization, correlation, fit_scaler, rmse
from .de import DEConfig, DEResult, de_optimize
from .mogp import MOGPConfig, ParetoArchive, dominates, evolve_structure, pick_best
from .tree import (
    FuzzyTree,
    TreeConfig,
    evaluate_population,
    evaluate_tree,
    flatten_parameters,
    load_parameters,
    parameter_count,
    selected_features,
    summarize_tree,
    tree_from_dict,
    tree_to_dict,
)

MODEL_FORMAT = "fuzzytree-model"

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_MODEL = 4


class ConfigError(ValueError):
    """Invalid run configuration; ``problems`` lists field-level messages."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ModelFileError(ValueError):
    """Unreadable or corrupt model file."""


@dataclass
class RunConfig:
    """Everything one training run needs; defaults follow the standard
    experiment settings (depth 4, 4 inputs per node, GP 50/500 with
    pc 0.8, pool 25, binary tournament; DE 50/5000 with F 0.7, cr 0.9)."""

    dataset: Dict = field(default_factory=lambda: {"generator": "plant", "n_patterns": 400})
    split: Dict = field(default_factory=lambda: {"scheme": "fixed", "n_train": 200})
    fis_kind: str = "type1"
    objective_mode: str = "multi"
    max_depth: int = 4
    max_inputs: int = 4
    gp_population: int = 50
    gp_iterations: int = 500
    crossover_prob: float = 0.8
    mating_pool: int = 25
    tournament_size: int = 2
    de_population: int = 50
    de_f: float = 0.7
    de_cr: float = 0.9
    de_iterations: int = 5000
    de_stall_window: int = 100
    rounds: int = 1
    repetitions: int = 1
    seed: int = 0
    output_dir: str = "runs/latest"

    @property
    def mutation_prob(self) -> float:
        return 1.0 - self.crossover_prob


def validate_config(cfg: RunConfig) -> List[str]:
    """Field-by-field validation; returns a list of problems (empty = ok)."""
    problems = []
    if cfg.fis_kind not in ("type1", "type2"):
        problems.append(f"fis_kind: must be 'type1' or 'type2', got {cfg.fis_kind!r}")
    if cfg.objective_mode not in ("multi", "single"):
        problems.append(
            f"objective_mode: must be 'multi' or 'single', got {cfg.objective_mode!r}"
        )
    if cfg.max_depth < 1:
        problems.append("max_depth: must be >= 1")
    if cfg.max_inputs < 2:
        problems.append("max_inputs: must be >= 2")
    if cfg.gp_population < 2:
        problems.append("gp_population: must be >= 2")
    if cfg.gp_iterations < 0:
        problems.append("gp_iterations: must be >= 0")
    if not 0.0 <= cfg.crossover_prob <= 1.0:
        problems.append("crossover_prob: must be in [0, 1]")
    if cfg.mating_pool < 1:
        problems.append("mating_pool: must be >= 1")
    if cfg.tournament_size != 2:
        problems.append("tournament_size: only the binary tournament (2) is supported")
    if cfg.de_population < 4:
        problems.append("de_population: must be >= 4")
    if not 0.0 <= cfg.de_f <= 2.0:
        problems.append("de_f: must be in [0, 2]")
    if not 0.0 <= cfg.de_cr <= 1.0:
        problems.append("de_cr: must be in [0, 1]")
    if cfg.de_iterations < 0:
        problems.append("de_iterations: must be >= 0")
    if cfg.de_stall_window < 1:
        problems.append("de_stall_window: must be >= 1")
    if cfg.rounds < 1:
        problems.append("rounds: must be >= 1")
    if cfg.repetitions < 1:
        problems.append("repetitions: must be >= 1")
    if not isinstance(cfg.dataset, dict) or not (
        "generator" in cfg.dataset
        or "csv" in cfg.dataset
        or "gas_furnace_csv" in cfg.dataset
    ):
        problems.append("dataset: need a 'generator', 'csv' or 'gas_furnace_csv' specification")
    if not isinstance(cfg.split, dict) or "scheme" not in cfg.split:
        problems.append("split: need a 'scheme'")
    elif cfg.split["scheme"] not in ("fixed", "holdout", "kfold", "none"):
        problems.append(f"split.scheme: unknown scheme {cfg.split['scheme']!r}")
    return problems


def config_to_dict(cfg: RunConfig) -> Dict:
    return asdict(cfg)


def config_from_dict(doc: Dict) -> RunConfig:
    known = {f for f in RunConfig.__dataclass_fields__}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError([f"unknown config fields: {sorted(unknown)}"])
    return RunConfig(**doc)


def config_payload(cfg: RunConfig) -> Dict:
    """The experiment-identity view of a config: everything except where
    the artifacts are written."""
    payload = config_to_dict(cfg)
    payload.pop("output_dir", None)
    return payload


def config_hash(cfg: RunConfig) -> str:
    """Stable digest of the run settings (output location excluded, so the
    same experiment hashes the same wherever it is written)."""
    canon = json.dumps(config_payload(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def repetition_rng(seed: int, repetition: int) -> np.random.Generator:
    """Sub-seeded generator: child ``repetition`` of the master seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(repetition,)))


# ---------------------------------------------------------------------------
# Dataset resolution
# ---------------------------------------------------------------------------

def resolve_dataset(spec: Dict, rng: Optional[np.random.Generator] = None) -> Dataset:
    """Build the full pattern set from a dataset specification dict."""
    if "gas_furnace_csv" in spec:
        return datamod.load_gas_furnace(
            spec["gas_furnace_csv"],
            u_column=int(spec.get("u_column", 0)),
            y_column=int(spec.get("y_column", 1)),
            header=bool(spec.get("header", False)),
        )
    if "csv" in spec:
        return datamod.load_csv(
            spec["csv"],
            input_columns=spec["input_columns"],
            target_column=spec["target_column"],
            header=bool(spec.get("header", False)),
        )
    name = spec.get("generator")
    if name == "plant":
        return datamod.gen_plant_patterns(int(spec.get("n_patterns", 400)))
    if name == "mackey_glass":
        noise_std = float(spec.get("noise_std", 0.0))
        return datamod.gen_mackey_glass(
            tau=float(spec.get("tau", 30.0)),
            x0=float(spec.get("x0", 1.2)),
            k_start=int(spec.get("k_start", 124)),
            k_end=int(spec.get("k_end", 1123)),
            noise_std=noise_std,
            rng=rng if noise_std > 0 else None,
        )
    raise ConfigError([f"dataset.generator: unknown generator {name!r}"])


def split_dataset(
    ds: Dataset, split: Dict, rng: np.random.Generator, repetition: int = 0
) -> Tuple[Dataset, Optional[Dataset]]:
    """Train/test pair per the split spec.  kfold uses fold ``repetition``
    modulo k, so repetitions sweep the folds."""
    scheme = split["scheme"]
    if scheme == "none":
        return ds, None
    if scheme == "fixed":
        return datamod.split_fixed(ds, int(split["n_train"]))
    if scheme == "holdout":
        return datamod.split_holdout(ds, float(split["fraction"]), rng)
    if scheme == "kfold":
        folds = datamod.split_kfold(ds, int(split["k"]), rng)
        return folds[repetition % len(folds)]
    raise ConfigError([f"split.scheme: unknown scheme {scheme!r}"])


# ---------------------------------------------------------------------------
# Model files
# ---------------------------------------------------------------------------

def model_document(
    tree: FuzzyTree, scaler: Optional[MinMaxScaler], provenance: Dict
) -> Dict:
    return {
        "format": MODEL_FORMAT,
        "version": 1,
        "tree": tree_to_dict(tree),
        "normalization": scaler.to_dict() if scaler is not None else None,
        "provenance": provenance,
    }


def save_model(path, doc: Dict) -> None:
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")


def load_model(path) -> Tuple[FuzzyTree, Optional[MinMaxScaler], Dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelFileError(f"{path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(
            f"{path}: parse error at byte offset {exc.pos}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelFileError(f"{path}: not a {MODEL_FORMAT} document")
    try:
        tree = tree_from_dict(doc["tree"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ModelFileError(f"{path}: invalid tree section: {exc}") from None
    scaler = None
    if doc.get("normalization") is not None:
        scaler = MinMaxScaler.from_dict(doc["normalization"])
    return tree, scaler, doc.get("provenance", {})


# ---------------------------------------------------------------------------
# The two-phase pipeline
# ---------------------------------------------------------------------------

def _mf_slot_bounds(tree: FuzzyTree) -> Tuple[np.ndarray, np.ndarray]:
    """Per-slot init clamp: membership slots to [0, 1], consequents free."""
    vec = flatten_parameters(tree)
    lo = np.full(len(vec), -np.inf)
    hi = np.full(len(vec), np.inf)
    for _, mf_sl, _ in vec.layout:
        lo[mf_sl] = 0.0
        hi[mf_sl] = 1.0
    return lo, hi


def tune_parameters(
    tree: FuzzyTree,
    train: Dataset,
    cfg: RunConfig,
    rng: np.random.Generator,
) -> Tuple[FuzzyTree, DEResult]:
    """Differential-evolution polish of a fixed topology against training
    RMSE, evaluating whole candidate batches through the vectorized tree."""
    X, y = train.inputs, train.targets
    seed_vec = flatten_parameters(tree).values

    def batch_objective(W: np.ndarray) -> np.ndarray:
        pred = evaluate_population(tree, X, W)
        return np.sqrt(np.mean((pred - y[None, :]) ** 2, axis=1))

    lo, hi = _mf_slot_bounds(tree)
    de_cfg = DEConfig(
        pop_size=cfg.de_population,
        f=cfg.de_f,
        cr=cfg.de_cr,
        max_iters=cfg.de_iterations,
        stall_window=cfg.de_stall_window,
    )
    result = de_optimize(
        batch_objective, seed_vec, de_cfg, rng,
        vectorized=True, init_low=lo, init_high=hi,
    )
    return load_parameters(tree, result.best_vector), result


@dataclass
class RepetitionResult:
    repetition: int
    train_rmse: float
    train_corr: float
    test_rmse: Optional[float]
    test_corr: Optional[float]
    complexity: int
    features: List[int]
    seconds: float
    tree: FuzzyTree
    archive: ParetoArchive
    de_history: List


@dataclass
class RunReport:
    config: RunConfig
    config_hash: str
    repetitions: List[RepetitionResult]

    def aggregate(self) -> Dict[str, Dict[str, float]]:
        """Best/mean/std per metric, recomputable from the rows."""
        out = {}
        columns = {
            "train_rmse": (min, [r.train_rmse for r in self.repetitions]),
            "train_corr": (max, [r.train_corr for r in self.repetitions]),
            "test_rmse": (min, [r.test_rmse for r in self.repetitions]),
            "test_corr": (max, [r.test_corr for r in self.repetitions]),
            "complexity": (min, [float(r.complexity) for r in self.repetitions]),
            "seconds": (min, [r.seconds for r in self.repetitions]),
        }
        for name, (best_fn, values) in columns.items():
            if any(v is None for v in values):
                out[name] = {"best": None, "mean": None, "std": None}
                continue
            arr = np.asarray(values, dtype=float)
            out[name] = {
                "best": float(best_fn(values)),
                "mean": float(arr.mean()),
                "std": float(arr.std()),
            }
        return out

    def best_repetition(self) -> RepetitionResult:
        return min(self.repetitions, key=lambda r: (r.train_rmse, r.repetition))


def run_repetition(
    cfg: RunConfig, repetition: int, full: Dataset
) -> RepetitionResult:
    """One sub-seeded repetition: split, normalize, alternate the phases."""
    t0 = time.perf_counter()
    rng = repetition_rng(cfg.seed, repetition)
    train_raw, test_raw = split_dataset(full, cfg.split, rng, repetition)
    scaler = fit_scaler(train_raw)
    train = apply_normalization(train_raw, scaler)
    test = apply_normalization(test_raw, scaler) if test_raw is not None else None

    tree_cfg = TreeConfig(
        n_features=train.n_features,
        max_depth=cfg.max_depth,
        max_inputs=cfg.max_inputs,
        fis_kind=cfg.fis_kind,
    )
    mogp_cfg = MOGPConfig(
        tree=tree_cfg,
        population_size=cfg.gp_population,
        iterations=cfg.gp_iterations,
        crossover_prob=cfg.crossover_prob,
        pool_size=cfg.mating_pool,
        multiobjective=cfg.objective_mode == "multi",
    )

    tuned: Optional[FuzzyTree] = None
    archive: Optional[ParetoArchive] = None
    de_history: List = []
    for _ in range(cfg.rounds):
        initial = [tuned] if tuned is not None else None
        archive = evolve_structure(train, mogp_cfg, rng, initial_trees=initial)
        best = pick_best(archive)
        tuned, de_result = tune_parameters(best.tree, train, cfg, rng)
        de_history.append(de_result.history)

    train_pred = evaluate_tree(tuned, train.inputs)
    test_pred = evaluate_tree(tuned, test.inputs) if test is not None else None
    return RepetitionResult(
        repetition=repetition,
        train_rmse=rmse(train.targets, train_pred),
        train_corr=correlation(train.targets, train_pred),
        test_rmse=rmse(test.targets, test_pred) if test is not None else None,
        test_corr=correlation(test.targets, test_pred) if test is not None else None,
        complexity=parameter_count(tuned),
        features=sorted(selected_features(tuned)),
        seconds=time.perf_counter() - t0,
        tree=tuned,
        archive=archive,
        de_history=de_history,
    )


# ---------------------------------------------------------------------------
# Artifact writing
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report_csv(path, report: RunReport) -> None:
    lines = ["rep,train_rmse,train_corr,test_rmse,test_corr,complexity,features"]
    for r in report.repetitions:
        feats = "|".join(f"x{i + 1}" for i in r.features)
        lines.append(
            ",".join(
                [
                    str(r.repetition),
                    _fmt(r.train_rmse),
                    _fmt(r.train_corr),
                    _fmt(r.test_rmse),
                    _fmt(r.test_corr),
                    str(r.complexity),
                    feats,
                ]
            )
        )
    agg = report.aggregate()
    for stat in ("best", "mean", "std"):
        lines.append(
            ",".join(
                [
                    stat,
                    _fmt(agg["train_rmse"][stat]),
                    _fmt(agg["train_corr"][stat]),
                    _fmt(agg["test_rmse"][stat]),
                    _fmt(agg["test_corr"][stat]),
                    _fmt(agg["complexity"][stat]),
                    "",
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_timing_csv(path, report: RunReport) -> None:
    lines = ["rep,seconds"]
    for r in report.repetitions:
        lines.append(f"{r.repetition},{_fmt(r.seconds)}")
    agg = report.aggregate()["seconds"]
    for stat in ("best", "mean", "std"):
        lines.append(f"{stat},{_fmt(agg[stat])}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_report(outdir) -> Dict:
    """Parse report.csv (+ timing.csv), recomputing and checking aggregates.

    Returns {'rows': [...], 'aggregates': {...}} where each row dict also
    carries its wall-clock seconds; raises ValueError if the stored
    aggregates do not reproduce from the rows.
    """
    outdir = Path(outdir)
    lines = (outdir / "report.csv").read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = []
    stored = {}
    for line in lines[1:]:
        cells = line.split(",")
        rec = dict(zip(header, cells))
        if rec["rep"] in ("best", "mean", "std"):
            stored[rec["rep"]] = rec
        else:
            rows.append(rec)
    timing_lines = (outdir / "timing.csv").read_text().strip().splitlines()
    timing = dict(line.split(",") for line in timing_lines[1:])
    for rec in rows:
        rec["seconds"] = timing.get(rec["rep"], "")

    def col(name, agg_fn):
        values = [float(r[name]) for r in rows if r[name] != ""]
        if not values:
            return {"best": None, "mean": None, "std": None}
        arr = np.asarray(values)
        return {"best": agg_fn(values), "mean": arr.mean(), "std": arr.std()}

    recomputed = {
        "train_rmse": col("train_rmse", min),
        "train_corr": col("train_corr", max),
        "test_rmse": col("test_rmse", min),
        "test_corr": col("test_corr", max),
        "complexity": col("complexity", min),
    }
    for stat in ("best", "mean", "std"):
        for name, values in recomputed.items():
            stored_cell = stored[stat][name]
            expect = values[stat]
            if stored_cell == "" and expect is None:
                continue
            if not np.isclose(float(stored_cell), float(expect), rtol=0, atol=0):
                raise ValueError(
                    f"report aggregate {stat}/{name} = {stored_cell} does not "
                    f"recompute from rows ({expect})"
                )
    return {"rows": rows, "aggregates": recomputed}


def write_pareto_csv(path, archive: ParetoArchive) -> None:
    rows = sorted(
        ((ind.rmse, ind.complexity, ind.rank) for ind in archive.individuals),
        key=lambda t: (t[2], t[0]),
    )
    lines = ["rmse,parameter_count,rank"]
    for r, c, rank in rows:
        lines.append(f"{_fmt(r)},{c},{rank}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_gp_log(path, archives: Sequence[ParetoArchive]) -> None:
    lines = ["round,generation,best_rmse,best_complexity,front_size,hypervolume"]
    for rnd, archive in enumerate(archives):
        for g in archive.generations:
            lines.append(
                f"{rnd},{g.generation},{_fmt(g.best_rmse)},{g.best_complexity},"
                f"{g.front_size},{_fmt(g.hypervolume)}"
            )
    Path(path).write_text("\n".join(lines) + "\n")


def write_de_log(path, histories: Sequence[Sequence]) -> None:
    lines = ["round,iteration,best_rmse,stall"]
    for rnd, history in enumerate(histories):
        for rec in history:
            lines.append(f"{rnd},{rec.iteration},{_fmt(rec.best_fitness)},{rec.stall}")
    Path(path).write_text("\n".join(lines) + "\n")


def train_run(cfg: RunConfig) -> RunReport:
    """The train command: run all repetitions and write every artifact."""
    problems = validate_config(cfg)
    if problems:
        raise ConfigError(problems)
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    digest = config_hash(cfg)

    # The full pattern set is built once; generators that inject noise use
    # a dedicated child of the master seed so repetitions stay aligned.
    gen_rng = np.random.default_rng(
        np.random.SeedSequence(entropy=cfg.seed, spawn_key=(10_000,))
    )
    full = resolve_dataset(cfg.dataset, gen_rng)

    results = []
    for rep in range(cfg.repetitions):
        result = run_repetition(cfg, rep, full)
        results.append(result)
        repdir = outdir / f"rep_{rep:03d}"
        repdir.mkdir(exist_ok=True)
        provenance = {
            "config_hash": digest,
            "seed": cfg.seed,
            "repetition": rep,
            "config": config_payload(cfg),
        }
        scaler = _scaler_for(cfg, full, rep)
        save_model(repdir / "model.json", model_document(result.tree, scaler, provenance))
        write_gp_log(repdir / "gp_log.csv", [result.archive])
        write_de_log(repdir / "de_log.csv", result.de_history)
        if cfg.objective_mode == "multi":
            write_pareto_csv(repdir / "pareto.csv", result.archive)

    report = RunReport(cfg, digest, results)
    (outdir / "config.json").write_text(
        json.dumps(
            {"config": config_payload(cfg), "config_hash": digest, "seed": cfg.seed},
            sort_keys=True,
            indent=1,
        )
        + "\n"
    )
    write_report_csv(outdir / "report.csv", report)
    write_timing_csv(outdir / "timing.csv", report)
    best = report.best_repetition()
    best_model = (outdir / f"rep_{best.repetition:03d}" / "model.json").read_text()
    (outdir / "model.json").write_text(best_model)
    if cfg.objective_mode == "multi":
        best_front = (outdir / f"rep_{best.repetition:03d}" / "pareto.csv").read_text()
        (outdir / "pareto.csv").write_text(best_front)
    return report


def _scaler_for(cfg: RunConfig, full: Dataset, repetition: int) -> MinMaxScaler:
    rng = repetition_rng(cfg.seed, repetition)
    train_raw, _ = split_dataset(full, cfg.split, rng, repetition)
    return fit_scaler(train_raw)


# ---------------------------------------------------------------------------
# Evaluate / describe / export
# ---------------------------------------------------------------------------

def evaluate_model(
    model_path, dataset_spec: Dict, rng: Optional[np.random.Generator] = None
) -> Tuple[Dict, np.ndarray, Dataset]:
    """Metrics plus per-row predictions of a stored model on a dataset."""
    tree, scaler, _ = load_model(model_path)
    ds = resolve_dataset(dataset_spec, rng or np.random.default_rng(0))
    if ds.n_features != tree.n_features:
        raise ValueError(
            f"feature-count mismatch: model expects {tree.n_features} features "
            f"({', '.join(f'x{i + 1}' for i in range(tree.n_features))}), "
            f"dataset has {ds.n_features}"
        )
    normalized = apply_normalization(ds, scaler) if scaler is not None else ds
    pred = evaluate_tree(tree, normalized.inputs)
    metrics = {
        "rmse": rmse(ds.targets, pred),
        "correlation": correlation(ds.targets, pred),
    }
    return metrics, pred, ds


def write_predictions_csv(path, targets, predictions) -> None:
    lines = ["index,target,prediction"]
    for i, (t, p) in enumerate(zip(targets, predictions)):
        lines.append(f"{i},{_fmt(float(t))},{_fmt(float(p))}")
    Path(path).write_text("\n".join(lines) + "\n")


def describe_model(model_path) -> str:
    tree, scaler, provenance = load_model(model_path)
    info = summarize_tree(tree)
    feats = ", ".join(f"x{i + 1}" for i in info["selected_features"])
    lines = [
        f"kind: {info['fis_kind']}",
        f"nodes: {info['nodes']}, depth: {info['depth']}, "
        f"parameters: {info['parameter_count']}",
        f"node arities: {info['arities']} (rules per node: {info['rule_counts']})",
        f"selected features: {{{feats}}}",
        f"normalization: {'stored' if scaler is not None else 'none'}",
    ]
    if provenance:
        lines.append(
            f"provenance: seed {provenance.get('seed')}, "
            f"config {provenance.get('config_hash')}, "
            f"repetition {provenance.get('repetition')}"
        )
    return "\n".join(lines)


def export_pareto(run_dir) -> List[Tuple[float, int, int]]:
    """Front rows (rmse, parameter_count, rank) from a finished run
    directory, rank-0 first; refuses single-objective runs."""
    run_dir = Path(run_dir)
    config_path = run_dir / "config.json"
    if not config_path.exists():
        raise FileNotFoundError(f"{run_dir}: no config.json (not a run directory?)")
    doc = json.loads(config_path.read_text())
    if doc["config"].get("objective_mode") != "multi":
        raise ValueError(
            "single-objective run: no Pareto front was produced "
            "(rankings were by RMSE alone)"
        )
    front_path = run_dir / "pareto.csv"
    if not front_path.exists():
        raise FileNotFoundError(f"{front_path}: missing front export")
    rows = []
    for line in front_path.read_text().strip().splitlines()[1:]:
        r, c, rank = line.split(",")
        rows.append((float(r), int(c), int(rank)))
    rows.sort(key=lambda t: (t[2], t[0]))
    rank0 = [(r, c) for r, c, rank in rows if rank == 0]
    for i, a in enumerate(rank0):
        for j, b in enumerate(rank0):
            if i != j and dominates((a[0], a[1]), (b[0], b[1])):
                raise ValueError(
                    f"stored front is inconsistent: {a} dominates {b} within rank 0"
                )
    return rows
