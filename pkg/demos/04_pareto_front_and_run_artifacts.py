"""Anatomy of a finished run directory: report, front and phase logs.

train_run writes, per run: config.json (settings + hash + seed),
report.csv (per-repetition metrics plus best/mean/std rows; deterministic),
timing.csv (wall-clock sidecar), model.json (best repetition's model) and
pareto.csv (its final front), plus per-repetition subdirectories with the
same model/front and the per-generation / per-iteration logs.

Run:  python3 demos/04_pareto_front_and_run_artifacts.py
"""

import tempfile
from pathlib import Path

from fuzzytree.train import RunConfig, export_pareto, read_report, train_run

outdir = Path(tempfile.mkdtemp(prefix="fuzzytree_demo_")) / "run"
cfg = RunConfig(
    dataset={"generator": "plant", "n_patterns": 200},
    split={"scheme": "fixed", "n_train": 100},
    fis_kind="type1",
    objective_mode="multi",
    gp_population=16,
    gp_iterations=15,
    mating_pool=8,
    de_population=12,
    de_iterations=60,
    de_stall_window=60,
    repetitions=2,
    seed=3,
    output_dir=str(outdir),
)
report = train_run(cfg)
print(f"artifacts in {outdir}:")
for path in sorted(outdir.rglob("*")):
    if path.is_file():
        print(f"  {path.relative_to(outdir)}")

print("\nfinal front of the best repetition (rmse, parameters, rank):")
for row in export_pareto(outdir):
    print(f"  {row[0]:.4f}  {row[1]:4d}  {row[2]}")

parsed = read_report(outdir)
print("\nreport rows (aggregates are recomputed and checked by the reader):")
for row in parsed["rows"]:
    print(f"  rep {row['rep']}: train rmse {float(row['train_rmse']):.4f}, "
          f"complexity {row['complexity']}, {float(row['seconds']):.2f}s")

gp_log = (outdir / "rep_000" / "gp_log.csv").read_text().strip().splitlines()
print("\nstructure-phase log (first repetition, last 3 generations):")
print("  " + gp_log[0])
for line in gp_log[-3:]:
    print("  " + line)
