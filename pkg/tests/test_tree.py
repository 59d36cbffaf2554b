"""Tree construction, evaluation, genotype mapping and serialization tests."""

import json

import numpy as np
import pytest

from fuzzytree.tree import (
    TYPE1,
    TYPE2,
    FuzzyNode,
    TreeConfig,
    _draw_rule_base,
    build_tree,
    clone_tree,
    evaluate_node,
    evaluate_population,
    evaluate_tree,
    flatten_parameters,
    iter_nodes,
    load_parameters,
    node_count,
    node_parameter_count,
    parameter_count,
    positions,
    random_tree,
    selected_features,
    subtree_at,
    summarize_tree,
    tree_depth,
    tree_from_dict,
    tree_to_dict,
    validate_tree,
)

from helpers import reference_eval, single_node_tree, two_stage_tree


class TestParameterCount:
    def test_two_stage_tree_type1(self):
        tree = two_stage_tree(np.random.default_rng(0), TYPE1)
        assert parameter_count(tree) == 84

    def test_two_stage_tree_type2(self):
        tree = two_stage_tree(np.random.default_rng(0), TYPE2)
        assert parameter_count(tree) == 154

    def test_single_binary_node_type1(self):
        tree = single_node_tree(np.random.default_rng(0), TYPE1, d=2)
        assert parameter_count(tree) == 20

    def test_node_formulas(self):
        assert node_parameter_count(2, TYPE1) == 2 * 4 + 4 * 3
        assert node_parameter_count(3, TYPE1) == 2 * 6 + 8 * 4
        assert node_parameter_count(2, TYPE2) == 3 * 4 + 4 * 6
        assert node_parameter_count(3, TYPE2) == 3 * 6 + 8 * 8

    def test_count_equals_flatten_length(self):
        rng = np.random.default_rng(1)
        for fis_kind in (TYPE1, TYPE2):
            cfg = TreeConfig(n_features=6, fis_kind=fis_kind)
            for _ in range(50):
                tree = random_tree(rng, cfg)
                assert len(flatten_parameters(tree)) == parameter_count(tree)


class TestEvaluate:
    def test_constant_consequents_give_constant_output(self):
        rng = np.random.default_rng(2)
        tree = single_node_tree(rng, TYPE1, d=2)
        for node in iter_nodes(tree.root):
            node.consequents[:] = 0.0
            node.consequents[:, 0] = 0.7
        X = rng.uniform(0, 1, (30, 2))
        np.testing.assert_allclose(evaluate_tree(tree, X), 0.7, atol=1e-12)

    def test_matches_reference_evaluator_type1(self):
        rng = np.random.default_rng(3)
        tree = two_stage_tree(rng, TYPE1)
        X = rng.uniform(0, 1, (100, 5))
        out = evaluate_tree(tree, X)
        for n in range(100):
            assert out[n] == pytest.approx(reference_eval(tree, X[n]), abs=1e-12)

    def test_matches_reference_evaluator_type2(self):
        rng = np.random.default_rng(4)
        tree = two_stage_tree(rng, TYPE2)
        X = rng.uniform(0, 1, (100, 5))
        out = evaluate_tree(tree, X)
        for n in range(100):
            assert out[n] == pytest.approx(reference_eval(tree, X[n]), abs=1e-12)

    def test_deterministic_bit_identical(self):
        rng = np.random.default_rng(5)
        tree = two_stage_tree(rng, TYPE2)
        X = rng.uniform(0, 1, (20, 5))
        a = evaluate_tree(tree, X)
        b = evaluate_tree(tree, X)
        assert np.array_equal(a, b)

    def test_collapsed_type2_equals_scalar_gaussian_machinery(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            cfg = TreeConfig(n_features=4, max_depth=3, fis_kind=TYPE2)
            tree = random_tree(rng, cfg)
            for node in iter_nodes(tree.root):
                center = node.mf_params[..., :2].mean(axis=-1)
                node.mf_params[..., 0] = center
                node.mf_params[..., 1] = center
                node.consequents[:, 1, :] = 0.0
            x = rng.uniform(0, 1, 4)
            got = evaluate_tree(tree, x[None])[0]
            want = reference_eval(tree, x, collapsed_gaussian_scalar=True)
            assert got == pytest.approx(want, abs=1e-12)

    def test_terminal_out_of_range(self):
        tree = two_stage_tree(np.random.default_rng(7), TYPE1)
        with pytest.raises(ValueError, match="x5"):
            evaluate_tree(tree, np.zeros((3, 4)))


class TestGenotypeMapping:
    def test_roundtrip_preserves_outputs(self):
        rng = np.random.default_rng(8)
        for fis_kind in (TYPE1, TYPE2):
            tree = two_stage_tree(rng, fis_kind)
            vec = flatten_parameters(tree)
            rebuilt = load_parameters(tree, vec.values)
            X = rng.uniform(0, 1, (40, 5))
            np.testing.assert_array_equal(
                evaluate_tree(tree, X), evaluate_tree(rebuilt, X)
            )

    def test_flatten_after_load_is_identity_on_sanitized_values(self):
        rng = np.random.default_rng(9)
        tree = two_stage_tree(rng, TYPE2)
        raw = rng.normal(0, 2, parameter_count(tree))
        loaded = load_parameters(tree, raw)
        again = load_parameters(loaded, flatten_parameters(loaded).values)
        np.testing.assert_array_equal(
            flatten_parameters(loaded).values, flatten_parameters(again).values
        )

    def test_zero_vector_gives_zero_output(self):
        rng = np.random.default_rng(10)
        for fis_kind in (TYPE1, TYPE2):
            tree = two_stage_tree(rng, fis_kind)
            zeroed = load_parameters(tree, np.zeros(parameter_count(tree)))
            X = rng.uniform(0, 1, (10, 5))
            np.testing.assert_allclose(evaluate_tree(zeroed, X), 0.0, atol=1e-12)

    def test_random_vector_matches_reference_evaluator(self):
        rng = np.random.default_rng(11)
        for fis_kind in (TYPE1, TYPE2):
            tree = two_stage_tree(rng, fis_kind)
            loaded = load_parameters(tree, rng.normal(0, 1, parameter_count(tree)))
            X = rng.uniform(0, 1, (30, 5))
            out = evaluate_tree(loaded, X)
            for n in range(30):
                assert out[n] == pytest.approx(reference_eval(loaded, X[n]), abs=1e-12)

    def test_wrong_length_rejected(self):
        tree = two_stage_tree(np.random.default_rng(12), TYPE1)
        with pytest.raises(ValueError, match="84"):
            load_parameters(tree, np.zeros(83))

    def test_single_slot_perturbation_is_local(self):
        rng = np.random.default_rng(13)
        tree = two_stage_tree(rng, TYPE1)
        vec = flatten_parameters(tree)
        X = rng.uniform(0, 1, (25, 5))
        node_paths = [p for p in positions(tree) if not isinstance(subtree_at(tree, p), int)]
        for slot in rng.choice(len(vec), size=12, replace=False):
            owner, _, _ = vec.slot_info(int(slot))
            perturbed_values = vec.values.copy()
            perturbed_values[int(slot)] += 0.37
            perturbed = load_parameters(tree, perturbed_values)
            for path in node_paths:
                before = evaluate_node(subtree_at(tree, path), X, TYPE1)
                after = evaluate_node(subtree_at(perturbed, path), X, TYPE1)
                is_ancestor_or_owner = owner[: len(path)] == path
                if not is_ancestor_or_owner:
                    np.testing.assert_array_equal(before, after)

    def test_population_evaluation_matches_per_row(self):
        rng = np.random.default_rng(14)
        for fis_kind in (TYPE1, TYPE2):
            tree = two_stage_tree(rng, fis_kind)
            n = parameter_count(tree)
            W = rng.normal(0, 1, (7, n))
            X = rng.uniform(0, 1, (15, 5))
            batch = evaluate_population(tree, X, W)
            assert batch.shape == (7, 15)
            for p in range(7):
                per_row = evaluate_tree(load_parameters(tree, W[p]), X)
                np.testing.assert_allclose(batch[p], per_row, atol=1e-13)


class TestRandomTree:
    def test_invariant_sweep(self):
        rng = np.random.default_rng(15)
        for fis_kind in (TYPE1, TYPE2):
            cfg = TreeConfig(n_features=8, max_depth=4, max_inputs=4, fis_kind=fis_kind)
            for _ in range(5000):
                tree = random_tree(rng, cfg)
                validate_tree(tree)

    def test_depth_one_gives_single_node(self):
        rng = np.random.default_rng(16)
        cfg = TreeConfig(n_features=3, max_depth=1)
        for _ in range(100):
            tree = random_tree(rng, cfg)
            assert node_count(tree) == 1
            assert tree_depth(tree) == 1
            assert all(isinstance(c, int) for c in tree.root.children)

    def test_single_feature_uses_it_everywhere(self):
        rng = np.random.default_rng(17)
        cfg = TreeConfig(n_features=1, max_depth=3)
        for _ in range(50):
            tree = random_tree(rng, cfg)
            assert selected_features(tree) == {0}


class TestSelectedFeatures:
    def test_two_stage_tree_uses_all_five(self):
        tree = two_stage_tree(np.random.default_rng(18))
        assert selected_features(tree) == {0, 1, 2, 3, 4}

    def test_repeated_terminal_is_singleton(self):
        rng = np.random.default_rng(19)
        root = FuzzyNode([1, 1, 1], *_draw_rule_base(rng, 3, TYPE1))
        tree = build_tree(root, TYPE1, n_features=3)
        assert selected_features(tree) == {1}

    def test_matches_bruteforce_leaf_scan(self):
        rng = np.random.default_rng(20)
        cfg = TreeConfig(n_features=6, max_depth=4)

        def scan(doc):
            if "terminal" in doc:
                return {doc["terminal"]}
            out = set()
            for child in doc["children"]:
                out |= scan(child)
            return out

        for _ in range(200):
            tree = random_tree(rng, cfg)
            assert selected_features(tree) == scan(tree_to_dict(tree)["root"])


class TestSerialization:
    def test_json_roundtrip_is_exact(self):
        rng = np.random.default_rng(21)
        for fis_kind in (TYPE1, TYPE2):
            tree = two_stage_tree(rng, fis_kind)
            doc = json.loads(json.dumps(tree_to_dict(tree)))
            rebuilt = tree_from_dict(doc)
            np.testing.assert_array_equal(
                flatten_parameters(tree).values, flatten_parameters(rebuilt).values
            )
            X = rng.uniform(0, 1, (20, 5))
            np.testing.assert_array_equal(
                evaluate_tree(tree, X), evaluate_tree(rebuilt, X)
            )

    def test_summary(self):
        tree = two_stage_tree(np.random.default_rng(22), TYPE1)
        info = summarize_tree(tree)
        assert info["nodes"] == 3
        assert info["depth"] == 2
        assert info["parameter_count"] == 84
        assert sorted(info["arities"]) == [2, 2, 3]
        assert info["selected_features"] == [0, 1, 2, 3, 4]


class TestCloneSafety:
    def test_clone_is_deep(self):
        tree = two_stage_tree(np.random.default_rng(23), TYPE1)
        copy = clone_tree(tree)
        copy.root.mf_params[0, 0, 0] += 1.0
        assert tree.root.mf_params[0, 0, 0] != copy.root.mf_params[0, 0, 0]
