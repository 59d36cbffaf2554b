"""Gas-furnace CO2 prediction from a user-supplied series file.

The classic furnace benchmark is a two-column series (gas-flow rate u(k),
CO2 concentration y(k), 296 rows).  It is not bundled here; obtain it from
any of its many published copies (it appears as "gas furnace" or
"Box-Jenkins" in most system-identification archives) and save it as
comma-delimited u,y rows at data/gas_furnace.csv.

The model recipe is one-step prediction from the lagged pair
(y(k-1), u(k-4)), trained on all usable patterns.

Run:  python3 demos/05_box_jenkins_gas_furnace.py [path/to/gas_furnace.csv]
"""

import sys
from pathlib import Path

import numpy as np

from fuzzytree.data import gas_furnace_patterns, load_gas_furnace
from fuzzytree.train import RunConfig, train_run

path = Path(sys.argv[1] if len(sys.argv) > 1 else "data/gas_furnace.csv")
if not path.exists():
    print(f"no series file at {path}")
    print("expected layout (no header, one row per time step):")
    print("  -0.109,53.8\n  0.000,53.6\n  ...")
    # Show the recipe on a synthetic stand-in series instead.
    rng = np.random.default_rng(0)
    u = np.sin(np.linspace(0, 12, 60)) + 0.1 * rng.normal(size=60)
    y = 53 + np.cumsum(0.05 * rng.normal(size=60))
    ds = gas_furnace_patterns(u, y)
    print(f"\nsynthetic stand-in: {ds.n_samples} patterns with inputs "
          f"{ds.feature_names} and CO2-like targets")
    sys.exit(0)

ds = load_gas_furnace(path)
print(f"{ds.n_samples} patterns from {path} "
      f"(targets in [{ds.targets.min():.1f}, {ds.targets.max():.1f}])")

cfg = RunConfig(
    dataset={"gas_furnace_csv": str(path)},
    split={"scheme": "none"},          # train on all patterns
    fis_kind="type2",
    objective_mode="multi",
    gp_population=30,
    gp_iterations=60,
    mating_pool=15,
    de_population=30,
    de_iterations=500,
    de_stall_window=100,
    repetitions=2,
    seed=1,
    output_dir="runs/gas_furnace_demo",
)
report = train_run(cfg)
for rep in report.repetitions:
    print(f"rep {rep.repetition}: train rmse {rep.train_rmse:.4f}, "
          f"correlation {rep.train_corr:.4f}, {rep.complexity} parameters")
