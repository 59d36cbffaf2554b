"""Shared test fixtures: hand-rolled reference evaluator and known topologies.

The reference evaluator below deliberately re-derives tree evaluation from
the scalar primitives, sample by sample, so that the vectorized production
path has an independent implementation to agree with.
"""

import itertools

import numpy as np

from fuzzytree.fuzzy import (
    IT2MF,
    IT2Consequent,
    T1MF,
    T1Consequent,
    it2_consequent,
    it2_defuzzify,
    it2_rule_firing,
    km_type_reduce,
    t1_consequent,
    t1_defuzzify,
    t1_rule_firing,
    gaussian_grade,
)
from fuzzytree.tree import (
    TYPE1,
    TYPE2,
    FuzzyNode,
    FuzzyTree,
    _draw_rule_base,
    build_tree,
)


def reference_eval(tree: FuzzyTree, x, collapsed_gaussian_scalar: bool = False):
    """Straight-line recursive evaluation of one sample.

    With ``collapsed_gaussian_scalar`` a type-2 tree with zero footprint and
    zero spreads is evaluated through the scalar weighted-mean machinery
    using the same Gaussian grades (the degeneracy counterpart).
    """
    x = np.asarray(x, dtype=float)

    def node_out(node: FuzzyNode) -> float:
        z = [
            float(x[c]) if isinstance(c, int) else node_out(c)
            for c in node.children
        ]
        d = len(z)
        combos = list(itertools.product((0, 1), repeat=d))
        if tree.fis_kind == TYPE1:
            firings = []
            values = []
            for r, combo in enumerate(combos):
                mfs = [
                    T1MF(node.mf_params[j, s, 0], node.mf_params[j, s, 1])
                    for j, s in enumerate(combo)
                ]
                firings.append(t1_rule_firing(z, mfs))
                values.append(t1_consequent(z, T1Consequent(tuple(node.consequents[r]))))
            return t1_defuzzify(firings, values)
        if collapsed_gaussian_scalar:
            firings = []
            values = []
            for r, combo in enumerate(combos):
                f = 1.0
                for j, s in enumerate(combo):
                    f *= float(
                        gaussian_grade(z[j], node.mf_params[j, s, 0], node.mf_params[j, s, 2])
                    )
                firings.append(f)
                values.append(
                    t1_consequent(z, T1Consequent(tuple(node.consequents[r, 0])))
                )
            return t1_defuzzify(firings, values)
        firings = []
        intervals = []
        for r, combo in enumerate(combos):
            mfs = [
                IT2MF(node.mf_params[j, s, 0], node.mf_params[j, s, 1], node.mf_params[j, s, 2])
                for j, s in enumerate(combo)
            ]
            firings.append(it2_rule_firing(z, mfs))
            intervals.append(
                it2_consequent(
                    z,
                    IT2Consequent(
                        tuple(node.consequents[r, 0]), tuple(node.consequents[r, 1])
                    ),
                )
            )
        y_l, y_r = km_type_reduce(firings, intervals)
        return it2_defuzzify(y_l, y_r)

    return node_out(tree.root)


def two_stage_tree(rng, fis_kind=TYPE1) -> FuzzyTree:
    """The canonical 3-node test topology over five inputs.

    Two binary subsystems feed a ternary root together with the third raw
    input: arities (2, 2, 3), depth 2, features x1..x5.
    """
    n1 = FuzzyNode([0, 1], *_draw_rule_base(rng, 2, fis_kind))
    n2 = FuzzyNode([3, 4], *_draw_rule_base(rng, 2, fis_kind))
    root = FuzzyNode([n1, n2, 2], *_draw_rule_base(rng, 3, fis_kind))
    return build_tree(root, fis_kind, n_features=5)


def single_node_tree(rng, fis_kind=TYPE1, d=2, n_features=2) -> FuzzyTree:
    terminals = [int(i % n_features) for i in range(d)]
    root = FuzzyNode(terminals, *_draw_rule_base(rng, d, fis_kind))
    return build_tree(root, fis_kind, n_features=n_features)
