"""Hierarchical fuzzy inference trees.

Tree-structured compositions of low-dimensional TSK fuzzy subsystems
(type-1 or interval type-2), with structure found by nondominated-sorting
genetic programming over (accuracy, parameter count) and parameters tuned
by differential evolution.
"""

from .data import (
    Dataset,
    MinMaxScaler,
    add_gaussian_noise,
    apply_normalization,
    correlation,
    fit_scaler,
    gen_mackey_glass,
    gen_plant,
    gen_plant_patterns,
    load_csv,
    mackey_glass_patterns,
    mackey_glass_series,
    normalize,
    rmse,
    save_csv,
    split_fixed,
    split_holdout,
    split_kfold,
)
from .de import DEConfig, DEResult, de_optimize, de_trial
from .fuzzy import (
    FiringInterval,
    IT2MF,
    IT2Consequent,
    T1MF,
    T1Consequent,
    it2_consequent,
    it2_defuzzify,
    it2_grade_bounds,
    it2_rule_firing,
    km_type_reduce,
    t1_consequent,
    t1_defuzzify,
    t1_grade,
    t1_rule_firing,
)
from .mogp import (
    Individual,
    MOGPConfig,
    ParetoArchive,
    binary_tournament,
    crossover,
    crowding_distance,
    dominates,
    evolve_structure,
    hypervolume,
    mutate,
    nondominated_sort,
    pick_best,
)
from .tree import (
    FuzzyNode,
    FuzzyTree,
    TreeConfig,
    evaluate_population,
    evaluate_tree,
    flatten_parameters,
    load_parameters,
    parameter_count,
    random_tree,
    selected_features,
    summarize_tree,
    tree_from_dict,
    tree_to_dict,
)
from .train import (
    RunConfig,
    RunReport,
    describe_model,
    evaluate_model,
    export_pareto,
    load_model,
    train_run,
    tune_parameters,
)

__version__ = "0.1.0"
