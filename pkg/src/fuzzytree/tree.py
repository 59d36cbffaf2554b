"""Hierarchical fuzzy inference trees.

A tree is a nested arrangement of low-dimensional fuzzy rule bases: each
internal node is a complete TSK subsystem over its children (which are
either other nodes or terminal input indices), with two fuzzy sets per
input and one rule per cell of the resulting 2**d grid.  Leaves are
feature indices.  The whole tree evaluates bottom-up; link weights are
fixed at 1 so child outputs feed parent membership functions directly.

Trees are treated as immutable values: structural edits go through
:func:`clone` / :func:`with_subtree`, which return new trees.  All tunable
numbers can be flattened into a single real vector (the genotype) and
loaded back, with a deterministic pre-order layout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .fuzzy import it2_node_output, rule_grid, t1_node_output

SIGMA_FLOOR = 1e-6

TYPE1 = "type1"
TYPE2 = "type2"

Child = Union[int, "FuzzyNode"]
Path = Tuple[int, ...]


@dataclass
class TreeConfig:
    """Generation and bound settings shared by all structural operations."""
    n_features: int
    max_depth: int = 4
    max_inputs: int = 4
    fis_kind: str = TYPE1
    # Chance that a child slot becomes a terminal when depth still allows
    # another subsystem; at the depth limit every slot is a terminal.
    p_terminal: float = 0.5

    def __post_init__(self):
        if self.n_features < 1:
            raise ValueError("n_features must be >= 1")
        if self.max_inputs < 2:
            raise ValueError("max_inputs must be >= 2")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.fis_kind not in (TYPE1, TYPE2):
            raise ValueError(f"unknown fis_kind {self.fis_kind!r}")


@dataclass
class FuzzyNode:
    """One fuzzy subsystem: ordered children plus its rule-base parameters.

    ``mf_params`` has shape (d, 2, 2) for type-1 nodes ([center, width]
    per set) or (d, 2, 3) for type-2 ([m1, m2, width]).  ``consequents``
    has shape (2**d, d+1) for type-1 or (2**d, 2, d+1) for type-2 (centers
    stacked on spreads).
    """
    children: List[Child]
    mf_params: np.ndarray
    consequents: np.ndarray

    @property
    def arity(self) -> int:
        return len(self.children)


@dataclass
class FuzzyTree:
    root: FuzzyNode
    fis_kind: str
    n_features: int
    max_depth: int
    max_inputs: int

    def config(self, p_terminal: float = 0.5) -> TreeConfig:
        return TreeConfig(
            n_features=self.n_features,
            max_depth=self.max_depth,
            max_inputs=self.max_inputs,
            fis_kind=self.fis_kind,
            p_terminal=p_terminal,
        )


@dataclass
class ParameterVector:
    """Flat genotype plus the layout map tying slots back to the tree.

    ``layout`` holds one entry per node in pre-order: (path, mf_slice,
    consequent_slice) into ``values``.
    """
    values: np.ndarray
    layout: Tuple[Tuple[Path, slice, slice], ...]

    def __len__(self):
        return self.values.size

    def slot_info(self, i: int) -> Tuple[Path, str, int]:
        """Owning node path, block kind and offset within the block."""
        for path, mf_sl, cons_sl in self.layout:
            if mf_sl.start <= i < mf_sl.stop:
                return path, "mf", i - mf_sl.start
            if cons_sl.start <= i < cons_sl.stop:
                return path, "consequent", i - cons_sl.start
        raise IndexError(i)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _draw_rule_base(rng: np.random.Generator, d: int, fis_kind: str):
    """Fresh random parameters: memberships on [0, 1], consequents on [-1, 1]."""
    n_rules = 2 ** d
    if fis_kind == TYPE1:
        m = rng.uniform(0.0, 1.0, (d, 2))
        sigma = rng.uniform(0.0, 1.0, (d, 2))
        mf = np.stack([m, sigma], axis=-1)
        cons = rng.uniform(-1.0, 1.0, (n_rules, d + 1))
    else:
        center = rng.uniform(0.0, 1.0, (d, 2))
        sigma = rng.uniform(0.0, 1.0, (d, 2))
        lam = rng.uniform(0.0, 1.0, (d, 2))
        m1 = center - lam * sigma
        m2 = center + lam * sigma
        mf = np.stack([m1, m2, sigma], axis=-1)
        coeffs = rng.uniform(-1.0, 1.0, (n_rules, d + 1))
        spreads = rng.uniform(0.0, 1.0, (n_rules, d + 1))
        cons = np.stack([coeffs, spreads], axis=1)
    return _sanitize_mf(mf, fis_kind), _sanitize_consequents(cons, fis_kind)


def random_node(rng: np.random.Generator, cfg: TreeConfig, max_layers: int) -> FuzzyNode:
    """Grow a random subsystem allowed to span ``max_layers`` node layers."""
    if max_layers < 1:
        raise ValueError("max_layers must be >= 1")
    d = int(rng.integers(2, cfg.max_inputs + 1))
    children: List[Child] = []
    for _ in range(d):
        if max_layers == 1 or rng.random() < cfg.p_terminal:
            children.append(int(rng.integers(cfg.n_features)))
        else:
            children.append(random_node(rng, cfg, max_layers - 1))
    mf, cons = _draw_rule_base(rng, d, cfg.fis_kind)
    return FuzzyNode(children, mf, cons)


def random_tree(rng: np.random.Generator, cfg: TreeConfig) -> FuzzyTree:
    """Random tree with an internal root and all bounds respected."""
    root = random_node(rng, cfg, cfg.max_depth)
    return FuzzyTree(root, cfg.fis_kind, cfg.n_features, cfg.max_depth, cfg.max_inputs)


def build_tree(
    root: FuzzyNode,
    fis_kind: str,
    n_features: int,
    max_depth: int = 4,
    max_inputs: int = 4,
) -> FuzzyTree:
    tree = FuzzyTree(root, fis_kind, n_features, max_depth, max_inputs)
    validate_tree(tree)
    return tree


# ---------------------------------------------------------------------------
# Traversal and structural editing
# ---------------------------------------------------------------------------

def iter_nodes(node: FuzzyNode) -> Iterator[FuzzyNode]:
    """Pre-order iteration over internal nodes."""
    yield node
    for child in node.children:
        if isinstance(child, FuzzyNode):
            yield from iter_nodes(child)


def node_count(tree: FuzzyTree) -> int:
    return sum(1 for _ in iter_nodes(tree.root))


def tree_depth(tree: FuzzyTree) -> int:
    return _subtree_layers(tree.root)


def _subtree_layers(child: Child) -> int:
    if isinstance(child, int):
        return 0
    return 1 + max(_subtree_layers(c) for c in child.children)


def clone(node_or_terminal: Child) -> Child:
    if isinstance(node_or_terminal, int):
        return node_or_terminal
    n = node_or_terminal
    return FuzzyNode(
        [clone(c) for c in n.children],
        n.mf_params.copy(),
        n.consequents.copy(),
    )


def clone_tree(tree: FuzzyTree) -> FuzzyTree:
    return replace(tree, root=clone(tree.root))


def positions(tree: FuzzyTree) -> List[Path]:
    """Every subtree slot as a path of child indices; () is the root."""
    out: List[Path] = [()]

    def walk(node: FuzzyNode, prefix: Path):
        for i, child in enumerate(node.children):
            out.append(prefix + (i,))
            if isinstance(child, FuzzyNode):
                walk(child, prefix + (i,))

    walk(tree.root, ())
    return out


def subtree_at(tree: FuzzyTree, path: Path) -> Child:
    cur: Child = tree.root
    for i in path:
        cur = cur.children[i]
    return cur


def with_subtree(tree: FuzzyTree, path: Path, new_subtree: Child) -> FuzzyTree:
    """New tree with the slot at ``path`` replaced (the base tree is cloned,
    ``new_subtree`` is inserted as given -- pass an owned copy)."""
    if path == ():
        if not isinstance(new_subtree, FuzzyNode):
            raise ValueError("the root must be an internal node")
        return replace(tree, root=new_subtree)
    new_tree = clone_tree(tree)
    parent = new_tree.root
    for i in path[:-1]:
        parent = parent.children[i]
    parent.children[path[-1]] = new_subtree
    return new_tree


def rule_grid_for_deletion(d: int, idx: int) -> np.ndarray:
    """Mask of the rules that survive when input ``idx`` is removed from a
    d-ary rule base: the sub-grid where that input used its first set."""
    return rule_grid(d)[:, idx] == 0


def selected_features(tree: FuzzyTree) -> set:
    """Distinct terminal indices reachable from the root."""
    found = set()

    def walk(node: FuzzyNode):
        for child in node.children:
            if isinstance(child, int):
                found.add(child)
            else:
                walk(child)

    walk(tree.root)
    return found


def validate_tree(tree: FuzzyTree) -> None:
    """Raise ValueError on any structural or parameter invariant breach."""
    if not isinstance(tree.root, FuzzyNode):
        raise ValueError("root must be an internal node")
    if tree_depth(tree) > tree.max_depth:
        raise ValueError(f"depth {tree_depth(tree)} exceeds bound {tree.max_depth}")
    seen = set()
    for node in iter_nodes(tree.root):
        if id(node) in seen:
            raise ValueError("node appears twice (tree must be a tree, not a DAG)")
        seen.add(id(node))
        d = node.arity
        if not 2 <= d <= tree.max_inputs:
            raise ValueError(f"node arity {d} outside [2, {tree.max_inputs}]")
        n_fields = 2 if tree.fis_kind == TYPE1 else 3
        if node.mf_params.shape != (d, 2, n_fields):
            raise ValueError(f"mf_params shape {node.mf_params.shape} inconsistent with d={d}")
        expect = (2 ** d, d + 1) if tree.fis_kind == TYPE1 else (2 ** d, 2, d + 1)
        if node.consequents.shape != expect:
            raise ValueError(f"consequents shape {node.consequents.shape}, expected {expect}")
        sigma = node.mf_params[..., -1]
        if not np.all(sigma > 0):
            raise ValueError("membership widths must be positive")
        if tree.fis_kind == TYPE2:
            if not np.all(node.mf_params[..., 0] <= node.mf_params[..., 1]):
                raise ValueError("need m1 <= m2 for every membership function")
            if not np.all(node.consequents[:, 1, :] >= 0):
                raise ValueError("consequent spreads must be nonnegative")
        for child in node.children:
            if isinstance(child, int) and not 0 <= child < tree.n_features:
                raise ValueError(f"terminal index {child} outside [0, {tree.n_features})")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate_node(node: FuzzyNode, X: np.ndarray, fis_kind: str) -> np.ndarray:
    """Bottom-up output of one subsystem for every row of ``X``."""
    z = np.stack(
        [
            X[:, c] if isinstance(c, int) else evaluate_node(c, X, fis_kind)
            for c in node.children
        ],
        axis=-1,
    )
    if fis_kind == TYPE1:
        return t1_node_output(z, node.mf_params[..., 0], node.mf_params[..., 1],
                              node.consequents)
    return it2_node_output(
        z,
        node.mf_params[..., 0],
        node.mf_params[..., 1],
        node.mf_params[..., 2],
        node.consequents[:, 0, :],
        node.consequents[:, 1, :],
    )


def evaluate_tree(tree: FuzzyTree, X) -> np.ndarray:
    """Tree output for each sample row; inputs are expected in [0, 1]."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    max_index = max(selected_features(tree))
    if X.shape[1] <= max_index:
        raise ValueError(
            f"input has {X.shape[1]} columns but the tree uses terminal x{max_index + 1}"
        )
    return evaluate_node(tree.root, X, tree.fis_kind)


# ---------------------------------------------------------------------------
# Genotype mapping
# ---------------------------------------------------------------------------

def node_parameter_count(d: int, fis_kind: str) -> int:
    """Tunable numbers in one node: membership block plus 2**d consequents."""
    if fis_kind == TYPE1:
        return 2 * (2 * d) + 2 ** d * (d + 1)
    return 3 * (2 * d) + 2 ** d * (2 * (d + 1))


def parameter_count(tree: FuzzyTree) -> int:
    return sum(
        node_parameter_count(node.arity, tree.fis_kind)
        for node in iter_nodes(tree.root)
    )


def _node_layout(tree: FuzzyTree) -> Tuple[Tuple[Path, slice, slice], ...]:
    entries = []
    offset = 0

    def walk(node: FuzzyNode, path: Path):
        nonlocal offset
        mf_size = node.mf_params.size
        cons_size = node.consequents.size
        entries.append(
            (path, slice(offset, offset + mf_size),
             slice(offset + mf_size, offset + mf_size + cons_size))
        )
        offset += mf_size + cons_size
        for i, child in enumerate(node.children):
            if isinstance(child, FuzzyNode):
                walk(child, path + (i,))

    walk(tree.root, ())
    return tuple(entries)


def flatten_parameters(tree: FuzzyTree) -> ParameterVector:
    """All tunable numbers in deterministic pre-order layout.

    Per node: membership fields in input order (two sets per input), then
    consequents in rule-grid order.
    """
    blocks = []
    for node in iter_nodes(tree.root):
        blocks.append(node.mf_params.ravel())
        blocks.append(node.consequents.ravel())
    return ParameterVector(np.concatenate(blocks), _node_layout(tree))


def _sanitize_mf(mf: np.ndarray, fis_kind: str) -> np.ndarray:
    """Map raw genotype values onto valid membership parameters.

    Widths go through absolute value with a small floor (keeps the search
    space unconstrained while avoiding zero division); type-2 mean pairs
    are sorted so m1 <= m2.
    """
    out = np.array(mf, dtype=float, copy=True)
    if fis_kind == TYPE2:
        out[..., :2] = np.sort(out[..., :2], axis=-1)
    out[..., -1] = np.maximum(np.abs(out[..., -1]), SIGMA_FLOOR)
    return out


def _sanitize_consequents(cons: np.ndarray, fis_kind: str) -> np.ndarray:
    out = np.array(cons, dtype=float, copy=True)
    if fis_kind == TYPE2:
        out[..., 1, :] = np.abs(out[..., 1, :])
    return out


def initialization_ranges(tree: FuzzyTree) -> Tuple[np.ndarray, np.ndarray]:
    """Per-slot (low, high) of the random-initialization distributions, in
    flatten layout: membership fields on [0, 1], consequent centers on
    [-1, 1], consequent spreads on [0, 1]."""
    lows = []
    highs = []
    for node in iter_nodes(tree.root):
        mf_size = node.mf_params.size
        lows.append(np.zeros(mf_size))
        highs.append(np.ones(mf_size))
        if tree.fis_kind == TYPE1:
            lows.append(np.full(node.consequents.size, -1.0))
            highs.append(np.ones(node.consequents.size))
        else:
            block_low = np.empty_like(node.consequents)
            block_low[:, 0, :] = -1.0
            block_low[:, 1, :] = 0.0
            lows.append(block_low.ravel())
            highs.append(np.ones(node.consequents.size))
    return np.concatenate(lows), np.concatenate(highs)


def load_parameters(tree: FuzzyTree, values) -> FuzzyTree:
    """New tree with every membership/consequent field overwritten.

    Values pass through the sanitization maps (width floor, mean-pair
    ordering, absolute spreads), so any real vector is a valid genotype.
    """
    values = np.asarray(values, dtype=float).ravel()
    expected = parameter_count(tree)
    if values.size != expected:
        raise ValueError(f"expected {expected} parameters, got {values.size}")
    new_tree = clone_tree(tree)
    offset = 0
    for node in iter_nodes(new_tree.root):
        mf_size = node.mf_params.size
        cons_size = node.consequents.size
        raw_mf = values[offset:offset + mf_size].reshape(node.mf_params.shape)
        raw_cons = values[offset + mf_size:offset + mf_size + cons_size].reshape(
            node.consequents.shape
        )
        node.mf_params = _sanitize_mf(raw_mf, tree.fis_kind)
        node.consequents = _sanitize_consequents(raw_cons, tree.fis_kind)
        offset += mf_size + cons_size
    return new_tree


def evaluate_population(tree: FuzzyTree, X, W) -> np.ndarray:
    """Evaluate one topology under many genotypes at once.

    ``W`` is a (P, n) matrix of parameter vectors in flatten layout; the
    result is (P, N).  Equivalent to load_parameters + evaluate_tree per
    row, but vectorized (this is the tuner's inner loop).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    W = np.atleast_2d(np.asarray(W, dtype=float))
    expected = parameter_count(tree)
    if W.shape[1] != expected:
        raise ValueError(f"expected {expected} parameters per row, got {W.shape[1]}")
    P, N = W.shape[0], X.shape[0]
    layout = {path: (mf_sl, cons_sl) for path, mf_sl, cons_sl in _node_layout(tree)}

    def eval_node(node: FuzzyNode, path: Path) -> np.ndarray:
        z = np.stack(
            [
                np.broadcast_to(X[:, c], (P, N)) if isinstance(c, int)
                else eval_node(c, path + (i,))
                for i, c in enumerate(node.children)
            ],
            axis=-1,
        )
        mf_sl, cons_sl = layout[path]
        mf = _sanitize_mf(W[:, mf_sl].reshape((P,) + node.mf_params.shape), tree.fis_kind)
        cons = _sanitize_consequents(
            W[:, cons_sl].reshape((P,) + node.consequents.shape), tree.fis_kind
        )
        if tree.fis_kind == TYPE1:
            return t1_node_output(z, mf[..., 0], mf[..., 1], cons)
        return it2_node_output(
            z, mf[..., 0], mf[..., 1], mf[..., 2], cons[:, :, 0, :], cons[:, :, 1, :]
        )

    return eval_node(tree.root, ())


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _child_to_dict(child: Child):
    if isinstance(child, int):
        return {"terminal": int(child)}
    return {
        "children": [_child_to_dict(c) for c in child.children],
        "mf_params": child.mf_params.tolist(),
        "consequents": child.consequents.tolist(),
    }


def _child_from_dict(doc) -> Child:
    if "terminal" in doc:
        return int(doc["terminal"])
    return FuzzyNode(
        [_child_from_dict(c) for c in doc["children"]],
        np.asarray(doc["mf_params"], dtype=float),
        np.asarray(doc["consequents"], dtype=float),
    )


def tree_to_dict(tree: FuzzyTree) -> dict:
    """Plain nested dict (JSON-ready; floats round-trip exactly)."""
    return {
        "fis_kind": tree.fis_kind,
        "n_features": tree.n_features,
        "max_depth": tree.max_depth,
        "max_inputs": tree.max_inputs,
        "root": _child_to_dict(tree.root),
    }


def tree_from_dict(doc: dict) -> FuzzyTree:
    tree = FuzzyTree(
        root=_child_from_dict(doc["root"]),
        fis_kind=doc["fis_kind"],
        n_features=int(doc["n_features"]),
        max_depth=int(doc["max_depth"]),
        max_inputs=int(doc["max_inputs"]),
    )
    validate_tree(tree)
    return tree


def summarize_tree(tree: FuzzyTree) -> dict:
    """Topology facts for reports: depth, arities, rules, features."""
    arities = [node.arity for node in iter_nodes(tree.root)]
    return {
        "fis_kind": tree.fis_kind,
        "nodes": len(arities),
        "depth": tree_depth(tree),
        "arities": arities,
        "rule_counts": [2 ** d for d in arities],
        "parameter_count": parameter_count(tree),
        "selected_features": sorted(selected_features(tree)),
    }
