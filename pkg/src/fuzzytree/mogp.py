"""Structure search: multiobjective genetic programming over fuzzy trees.

Populations of trees are ranked by Pareto dominance on (training RMSE,
parameter count), diversified by crowding distance, bred with subtree
crossover and five structural mutations, and truncated elitistically.
Trees carry their randomly initialized parameters through the search; no
parameter tuning happens here (that is the tuner's job afterwards).

A single-objective mode replaces dominance ranking with a plain RMSE
ordering (crowding ignored) so the same loop serves both variants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .tree import (
    FuzzyNode,
    FuzzyTree,
    TreeConfig,
    clone,
    clone_tree,
    evaluate_tree,
    iter_nodes,
    parameter_count,
    positions,
    random_node,
    random_tree,
    rule_grid_for_deletion,
    subtree_at,
    with_subtree,
    _subtree_layers,
)


@dataclass
class Individual:
    tree: FuzzyTree
    rmse: float
    complexity: int
    rank: int = 0
    crowding: float = 0.0

    @property
    def objectives(self) -> Tuple[float, int]:
        return (self.rmse, self.complexity)


@dataclass
class GenerationRecord:
    """One per-generation log line of the structure search."""
    generation: int
    best_rmse: float
    best_complexity: int
    front_size: int
    hypervolume: float


@dataclass
class ParetoArchive:
    """Final population ordered by (rank, -crowding), plus the search log."""
    individuals: List[Individual]
    generations: List[GenerationRecord] = field(default_factory=list)

    def front(self, rank: int = 0) -> List[Individual]:
        return [ind for ind in self.individuals if ind.rank == rank]


@dataclass
class MOGPConfig:
    tree: TreeConfig
    population_size: int = 50
    iterations: int = 500
    crossover_prob: float = 0.8
    pool_size: int = 25
    tournament_size: int = 2
    multiobjective: bool = True
    mutation_operators: str = "abcde"

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must be in [0, 1]")
        if self.pool_size < 1:
            raise ValueError("pool_size must be >= 1")
        if self.tournament_size != 2:
            raise ValueError("selection is a binary tournament; tournament_size must be 2")


# ---------------------------------------------------------------------------
# Dominance machinery
# ---------------------------------------------------------------------------

def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff ``a`` is no worse in every objective and better in one."""
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def nondominated_sort(pop: Sequence[Individual]) -> List[List[int]]:
    """Assign ranks in place and return the fronts as index lists."""
    if len(pop) == 0:
        raise ValueError("empty population")
    N = len(pop)
    objs = [ind.objectives for ind in pop]
    dominated_by: List[List[int]] = [[] for _ in range(N)]
    dominator_count = [0] * N
    fronts: List[List[int]] = [[]]
    for p in range(N):
        for q in range(N):
            if p == q:
                continue
            if dominates(objs[p], objs[q]):
                dominated_by[p].append(q)
            elif dominates(objs[q], objs[p]):
                dominator_count[p] += 1
        if dominator_count[p] == 0:
            pop[p].rank = 0
            fronts[0].append(p)
    i = 0
    while fronts[i]:
        nxt = []
        for p in fronts[i]:
            for q in dominated_by[p]:
                dominator_count[q] -= 1
                if dominator_count[q] == 0:
                    pop[q].rank = i + 1
                    nxt.append(q)
        i += 1
        fronts.append(nxt)
    fronts.pop()
    return fronts


def crowding_distance(front: Sequence[Individual]) -> np.ndarray:
    """Per-objective boundary members get +inf; interior members get the
    sum of normalized neighbor gaps.  Returned in input order."""
    L = len(front)
    dist = np.zeros(L)
    if L <= 2:
        dist[:] = np.inf
        return dist
    for m in range(2):
        values = np.array([ind.objectives[m] for ind in front], dtype=float)
        order = np.argsort(values, kind="stable")
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = values[order[-1]] - values[order[0]]
        if span <= 0:
            continue
        for k in range(1, L - 1):
            if np.isfinite(dist[order[k]]):
                dist[order[k]] += (values[order[k + 1]] - values[order[k - 1]]) / span
    return dist


def _rank_population(pop: List[Individual], multiobjective: bool) -> None:
    if multiobjective:
        fronts = nondominated_sort(pop)
        for front_indices in fronts:
            front = [pop[i] for i in front_indices]
            for ind, d in zip(front, crowding_distance(front)):
                ind.crowding = float(d)
    else:
        order = sorted(range(len(pop)), key=lambda i: pop[i].rmse)
        for rank, i in enumerate(order):
            pop[i].rank = rank
            pop[i].crowding = 0.0


def tournament_winner(first: Individual, second: Individual) -> Individual:
    """Lower rank wins; rank ties go to larger crowding; remaining ties to
    the first pick."""
    if second.rank < first.rank:
        return second
    if second.rank == first.rank and second.crowding > first.crowding:
        return second
    return first


def binary_tournament(pop: Sequence[Individual], rng: np.random.Generator) -> Individual:
    """Tournament between two uniform random picks from the population."""
    if len(pop) == 0:
        raise ValueError("empty population")
    first = pop[int(rng.integers(len(pop)))]
    second = pop[int(rng.integers(len(pop)))]
    return tournament_winner(first, second)


def hypervolume(objectives: Sequence[Tuple[float, float]], ref: Tuple[float, float]) -> float:
    """Dominated area of a bi-objective set relative to a reference point.

    Points not strictly better than the reference in both objectives
    contribute nothing.
    """
    pts = sorted({(r, c) for r, c in objectives if r < ref[0] and c < ref[1]})
    area = 0.0
    best_c = ref[1]
    for r, c in pts:
        if c < best_c:
            area += (ref[0] - r) * (best_c - c)
            best_c = c
    return area


# ---------------------------------------------------------------------------
# Variation operators
# ---------------------------------------------------------------------------

def crossover(
    a: FuzzyTree, b: FuzzyTree, rng: np.random.Generator, max_attempts: int = 10
) -> Tuple[FuzzyTree, FuzzyTree]:
    """Swap uniformly chosen subtrees between two parents.

    Swaps that would break the depth bound or put a bare terminal at a
    root are redrawn; after ``max_attempts`` failures the parents come
    back unchanged (as fresh copies).
    """
    pos_a = positions(a)
    pos_b = positions(b)
    for _ in range(max_attempts):
        pa = pos_a[int(rng.integers(len(pos_a)))]
        pb = pos_b[int(rng.integers(len(pos_b)))]
        if pa == () and pb == ():
            continue
        sub_a = subtree_at(a, pa)
        sub_b = subtree_at(b, pb)
        if pa == () and isinstance(sub_b, int):
            continue
        if pb == () and isinstance(sub_a, int):
            continue
        if len(pa) + _subtree_layers(sub_b) > a.max_depth:
            continue
        if len(pb) + _subtree_layers(sub_a) > b.max_depth:
            continue
        child_a = with_subtree(a, pa, clone(sub_b))
        child_b = with_subtree(b, pb, clone(sub_a))
        return child_a, child_b
    return clone_tree(a), clone_tree(b)


def _terminal_slots(tree: FuzzyTree):
    return [p for p in positions(tree) if isinstance(subtree_at(tree, p), int)]


def _node_paths(tree: FuzzyTree):
    return [p for p in positions(tree) if isinstance(subtree_at(tree, p), FuzzyNode)]


def _delete_slot(tree: FuzzyTree, path) -> FuzzyTree:
    """Remove one child; the parent keeps the surviving inputs' membership
    rows and the consequent sub-grid where the removed input used its
    first fuzzy set (dropping that input's coefficient column)."""
    new_tree = clone_tree(tree)
    parent = new_tree.root
    for i in path[:-1]:
        parent = parent.children[i]
    idx = path[-1]
    keep_rules = rule_grid_for_deletion(parent.arity, idx)
    parent.children.pop(idx)
    parent.mf_params = np.delete(parent.mf_params, idx, axis=0)
    parent.consequents = np.delete(parent.consequents[keep_rules], idx + 1, axis=-1)
    return new_tree


def mutate(
    tree: FuzzyTree,
    rng: np.random.Generator,
    operators: str = "abcde",
    p_terminal: float = 0.5,
) -> FuzzyTree:
    """Apply one structural mutation, drawn uniformly from ``operators``.

    a: swap one terminal for a different feature (no-op with one feature).
    b: redraw every terminal.
    c: replace a subsystem (possibly the root) with a fresh random one.
    d: grow a terminal into a fresh subsystem.
    e: delete a terminal or subsystem.

    Choices that cannot apply (a deletion that would leave fewer than two
    children, growth past the depth bound) are redrawn.
    """
    return _mutate_once(tree, rng, operators, p_terminal)[0]


def _growable_slots(tree: FuzzyTree):
    return [p for p in _terminal_slots(tree) if len(p) < tree.max_depth]


def _deletable_slots(tree: FuzzyTree):
    return [
        p for p in positions(tree) if len(p) >= 1 and _parent_arity(tree, p) >= 3
    ]


def _mutate_once(
    tree: FuzzyTree,
    rng: np.random.Generator,
    operators: str = "abcde",
    p_terminal: float = 0.5,
) -> Tuple[FuzzyTree, str]:
    cfg = tree.config(p_terminal)
    # Uniform over the operators that can apply to this tree; this is the
    # terminating equivalent of redrawing until a non-breaching operator.
    applicable = [
        op
        for op in operators
        if op in "abc"
        or (op == "d" and _growable_slots(tree))
        or (op == "e" and _deletable_slots(tree))
    ]
    if not applicable:
        return clone_tree(tree), ""
    op = applicable[int(rng.integers(len(applicable)))]
    if op == "a":
        slots = _terminal_slots(tree)
        slot = slots[int(rng.integers(len(slots)))]
        if tree.n_features == 1:
            return clone_tree(tree), op
        old = subtree_at(tree, slot)
        alternatives = [f for f in range(tree.n_features) if f != old]
        new_terminal = alternatives[int(rng.integers(len(alternatives)))]
        return with_subtree(tree, slot, new_terminal), op
    if op == "b":
        new_tree = clone_tree(tree)
        for node in iter_nodes(new_tree.root):
            for i, child in enumerate(node.children):
                if isinstance(child, int):
                    node.children[i] = int(rng.integers(tree.n_features))
        return new_tree, op
    if op == "c":
        paths = _node_paths(tree)
        path = paths[int(rng.integers(len(paths)))]
        budget = tree.max_depth - len(path)
        return with_subtree(tree, path, random_node(rng, cfg, budget)), op
    if op == "d":
        eligible = _growable_slots(tree)
        slot = eligible[int(rng.integers(len(eligible)))]
        budget = tree.max_depth - len(slot)
        return with_subtree(tree, slot, random_node(rng, cfg, budget)), op
    if op == "e":
        deletable = _deletable_slots(tree)
        return _delete_slot(tree, deletable[int(rng.integers(len(deletable)))]), op
    raise ValueError(f"unknown mutation operator {op!r}")


def _parent_arity(tree: FuzzyTree, path) -> int:
    parent = subtree_at(tree, path[:-1])
    return parent.arity


# ---------------------------------------------------------------------------
# The evolutionary loop
# ---------------------------------------------------------------------------

def _training_rmse(tree: FuzzyTree, X: np.ndarray, y: np.ndarray) -> float:
    pred = evaluate_tree(tree, X)
    err = float(np.sqrt(np.mean((pred - y) ** 2)))
    return err if np.isfinite(err) else float("inf")


def _make_individual(tree: FuzzyTree, X, y) -> Individual:
    return Individual(tree, _training_rmse(tree, X, y), parameter_count(tree))


def _truncate(pop: List[Individual], size: int, multiobjective: bool) -> List[Individual]:
    _rank_population(pop, multiobjective)
    order = sorted(range(len(pop)), key=lambda i: (pop[i].rank, -pop[i].crowding))
    survivors = [pop[i] for i in order[:size]]
    _rank_population(survivors, multiobjective)
    return survivors


def evolve_structure(
    dataset,
    cfg: MOGPConfig,
    rng: np.random.Generator,
    initial_trees: Optional[Sequence[FuzzyTree]] = None,
) -> ParetoArchive:
    """Evolve tree structures against a training set.

    Each generation: rank, fill a mating pool by binary tournament, breed
    a full population of offspring (crossover with probability
    ``crossover_prob``, otherwise one mutation per parent), recombine with
    the parents and keep the best ``population_size`` by (rank, crowding).

    ``initial_trees`` (if given) occupy the first population slots; the
    rest are random.  Returns the final ranked archive with the
    per-generation log attached.
    """
    X = np.asarray(dataset.inputs, dtype=float)
    y = np.asarray(dataset.targets, dtype=float)
    if X.size == 0 or y.size == 0:
        raise ValueError("empty dataset")

    pop: List[Individual] = []
    for tree in initial_trees or []:
        pop.append(_make_individual(clone_tree(tree), X, y))
    while len(pop) < cfg.population_size:
        pop.append(_make_individual(random_tree(rng, cfg.tree), X, y))
    pop = pop[: cfg.population_size]
    _rank_population(pop, cfg.multiobjective)

    # Fixed reference point for the hypervolume log, taken from the first
    # generation so the area is comparable across generations.
    ref = (
        max(ind.rmse for ind in pop if np.isfinite(ind.rmse)) * 1.1 + 1e-12,
        max(ind.complexity for ind in pop) + 1.0,
    )

    log: List[GenerationRecord] = []
    for gen in range(cfg.iterations):
        pool = [binary_tournament(pop, rng) for _ in range(cfg.pool_size)]
        offspring: List[Individual] = []
        while len(offspring) < cfg.population_size:
            i = int(rng.integers(len(pool)))
            j = int(rng.integers(len(pool)))
            if len(pool) > 1:
                while j == i:
                    j = int(rng.integers(len(pool)))
            pa, pb = pool[i].tree, pool[j].tree
            if rng.random() < cfg.crossover_prob:
                ca, cb = crossover(pa, pb, rng)
            else:
                ca = mutate(pa, rng, cfg.mutation_operators)
                cb = mutate(pb, rng, cfg.mutation_operators)
            offspring.append(_make_individual(ca, X, y))
            if len(offspring) < cfg.population_size:
                offspring.append(_make_individual(cb, X, y))
        pop = _truncate(pop + offspring, cfg.population_size, cfg.multiobjective)
        front0 = [ind for ind in pop if ind.rank == 0]
        log.append(
            GenerationRecord(
                generation=gen + 1,
                best_rmse=min(ind.rmse for ind in pop),
                best_complexity=min(ind.complexity for ind in front0),
                front_size=len(front0),
                hypervolume=hypervolume([ind.objectives for ind in front0], ref),
            )
        )

    order = sorted(range(len(pop)), key=lambda i: (pop[i].rank, -pop[i].crowding))
    return ParetoArchive([pop[i] for i in order], log)


def pick_best(archive: ParetoArchive) -> Individual:
    """The rank-0 member with the lowest RMSE (ties: lower complexity,
    then first encountered)."""
    front = archive.front(0)
    if not front:
        raise ValueError("empty archive")
    best = front[0]
    for ind in front[1:]:
        if (ind.rmse, ind.complexity) < (best.rmse, best.complexity):
            best = ind
    return best
