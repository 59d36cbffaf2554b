"""Chaotic time-series prediction with an interval type-2 tree.

The series solves dx/dk = 0.2 x(k-tau) / (1 + x(k-tau)^10) - 0.1 x(k) with
tau = 30 (chaotic for tau > 17); patterns are the lagged samples
[x(k-24), x(k-18), x(k-12), x(k-6)] -> x(k), 1000 of them for k = 124..1123,
first half train / second half test.  Small budgets here; see README for
the full-budget settings.

Run:  python3 demos/03_mackey_glass_prediction.py
"""

import numpy as np

from fuzzytree.data import (
    add_gaussian_noise,
    apply_normalization,
    correlation,
    fit_scaler,
    gen_mackey_glass,
    mackey_glass_patterns,
    mackey_glass_series,
    rmse,
    split_fixed,
)
from fuzzytree.mogp import MOGPConfig, evolve_structure, pick_best
from fuzzytree.train import RunConfig, tune_parameters
from fuzzytree.tree import TreeConfig, evaluate_tree, summarize_tree

rng = np.random.default_rng(7)

series = mackey_glass_series(tau=30.0, x0=1.2, k_end=1123)
print(f"series: {series.size} integer-time samples, "
      f"range [{series.min():.3f}, {series.max():.3f}]")

full = mackey_glass_patterns(series)
train_raw, test_raw = split_fixed(full, 500)
scaler = fit_scaler(train_raw)
train = apply_normalization(train_raw, scaler)
test = apply_normalization(test_raw, scaler)

mogp_cfg = MOGPConfig(
    tree=TreeConfig(n_features=4, max_depth=3, max_inputs=4, fis_kind="type2"),
    population_size=20,
    iterations=25,
    crossover_prob=0.8,
    pool_size=10,
)
archive = evolve_structure(train, mogp_cfg, rng)
picked = pick_best(archive)
print(f"picked structure: {summarize_tree(picked.tree)}")

run_cfg = RunConfig(de_population=30, de_iterations=300, de_stall_window=100)
tuned, de_result = tune_parameters(picked.tree, train, run_cfg, rng)
print(f"tuning: {picked.rmse:.4f} -> {de_result.best_fitness:.4f} training RMSE")

for name, ds in (("train", train), ("test", test)):
    pred = evaluate_tree(tuned, ds.inputs)
    print(f"{name}: rmse {rmse(ds.targets, pred):.4f}, "
          f"correlation {correlation(ds.targets, pred):.4f}")

# The noisy variants corrupt the raw series before pattern formation.
noisy = add_gaussian_noise(series, 0.1, rng)
noisy_ds = mackey_glass_patterns(noisy)
print(f"\nnoisy series (std 0.1): first pattern target {noisy_ds.targets[0]:.3f} "
      f"vs clean {full.targets[0]:.3f}")
print("one-call variant:", gen_mackey_glass(noise_std=0.1, rng=rng).n_samples,
      "patterns")
