"""Identify a nonlinear plant from input/output pairs with a type-1 tree.

The plant is y(k+1) = y(k)/(1 + y(k)^2) + u(k)^3 under a sinusoidal drive;
patterns are (u(k), y(k)) -> y(k+1).  This demo runs the two-phase pipeline
at a desk-scale budget (a real run uses GP 50x500 and DE 50x5000).

Run:  python3 demos/02_plant_identification.py
"""

import numpy as np

from fuzzytree.data import apply_normalization, fit_scaler, gen_plant, rmse, correlation
from fuzzytree.mogp import MOGPConfig, evolve_structure, pick_best
from fuzzytree.train import RunConfig, tune_parameters
from fuzzytree.tree import TreeConfig, evaluate_tree, summarize_tree

rng = np.random.default_rng(42)

train_raw, test_raw = gen_plant(n_train=200, n_test=200)
scaler = fit_scaler(train_raw)
train = apply_normalization(train_raw, scaler)
test = apply_normalization(test_raw, scaler)
print(f"training patterns: {train.n_samples}, test patterns: {test.n_samples}")

# Phase 1: structure search.  Objectives are (training RMSE with the trees'
# random initial parameters, parameter count); the archive is the final
# nondominated-sorted population.
mogp_cfg = MOGPConfig(
    tree=TreeConfig(n_features=2, max_depth=3, max_inputs=3, fis_kind="type1"),
    population_size=24,
    iterations=40,
    crossover_prob=0.8,
    pool_size=12,
)
archive = evolve_structure(train, mogp_cfg, rng)
print("\nfinal front (rmse, parameters):")
for ind in sorted(archive.front(0), key=lambda i: i.complexity):
    print(f"  {ind.rmse:.4f}  {ind.complexity}")

picked = pick_best(archive)
print(f"\npicked structure: {summarize_tree(picked.tree)}")

# Phase 2: tune the picked structure's flat parameter vector.
run_cfg = RunConfig(de_population=30, de_iterations=400, de_stall_window=100)
tuned, de_result = tune_parameters(picked.tree, train, run_cfg, rng)
print(f"tuning: {picked.rmse:.4f} -> {de_result.best_fitness:.4f} "
      f"training RMSE in {len(de_result.history)} iterations")

for name, ds in (("train", train), ("test", test)):
    pred = evaluate_tree(tuned, ds.inputs)
    print(f"{name}: rmse {rmse(ds.targets, pred):.4f}, "
          f"correlation {correlation(ds.targets, pred):.4f}")
