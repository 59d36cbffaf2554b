"""Differential evolution for flat parameter vectors (rand-to-best/1/bin).

Each trial vector blends a random base member toward the population best
plus one scaled difference term, with binomial crossover against the base.
Replacement is greedy and synchronous: trials are built against the frozen
iteration-start population and a member is replaced only when its trial is
strictly better, so the best-so-far fitness never increases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np


@dataclass
class DEConfig:
    pop_size: int = 50
    f: float = 0.7
    cr: float = 0.9
    max_iters: int = 5000
    stall_window: int = 100
    # Initial population: the seed verbatim plus pop_size-1 jittered copies.
    init_jitter: float = 0.1

    def __post_init__(self):
        if self.pop_size < 4:
            raise ValueError("pop_size must be >= 4 (three distinct vectors plus best)")
        if not 0.0 <= self.f <= 2.0:
            raise ValueError("differential weight f must be in [0, 2]")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("crossover rate cr must be in [0, 1]")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.stall_window < 1:
            raise ValueError("stall_window must be >= 1")


@dataclass
class IterationRecord:
    iteration: int
    best_fitness: float
    stall: int


@dataclass
class DEResult:
    best_vector: np.ndarray
    best_fitness: float
    history: List[IterationRecord] = field(default_factory=list)


def de_trial(
    w_a: np.ndarray,
    w_b: np.ndarray,
    w_c: np.ndarray,
    w_g: np.ndarray,
    f: float,
    cr: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """One binomial trial vector from base ``w_a`` toward the best ``w_g``.

    A forced index is always mutated; every other slot mutates with
    probability ``cr`` and otherwise inherits from the base.
    """
    w_a = np.asarray(w_a, dtype=float)
    n = w_a.size
    if not (w_b.size == w_c.size == w_g.size == n):
        raise ValueError("all vectors must share one length")
    if n == 0:
        raise ValueError("vectors must be non-empty")
    k = int(rng.integers(n))
    mutate = rng.random(n) < cr
    mutate[k] = True
    mutant = w_a + f * (w_g - w_a) + f * (w_b - w_c)
    return np.where(mutate, mutant, w_a)


def de_optimize(
    objective: Callable[[np.ndarray], float],
    seed_vector,
    cfg: DEConfig,
    rng: np.random.Generator,
    vectorized: bool = False,
    init_low: Optional[np.ndarray] = None,
    init_high: Optional[np.ndarray] = None,
    init_mode: str = "jitter",
) -> DEResult:
    """Minimize ``objective`` starting from ``seed_vector``.

    The population is the seed plus pop_size - 1 companions: with
    ``init_mode="jitter"`` they are jittered copies of the seed (clipped to
    [init_low, init_high] per slot where given; the seed itself is never
    clipped); with ``init_mode="uniform"`` they are drawn uniformly over
    [init_low, init_high], which must then be finite.  Stops at
    ``max_iters`` or once the best fitness has gone ``stall_window``
    consecutive iterations without strict improvement.  With
    ``max_iters=0`` the seed is returned untouched.

    ``vectorized`` objectives receive a (P, n) matrix and return (P,)
    fitnesses; plain objectives receive one vector at a time.
    """
    seed = np.asarray(seed_vector, dtype=float).ravel()
    if seed.size == 0:
        raise ValueError("seed vector must be non-empty")
    if init_mode not in ("jitter", "uniform"):
        raise ValueError(f"unknown init_mode {init_mode!r}")

    def evaluate(block: np.ndarray) -> np.ndarray:
        if vectorized:
            out = np.asarray(objective(block), dtype=float)
        else:
            out = np.array([objective(row) for row in block], dtype=float)
        if out.shape != (block.shape[0],):
            raise ValueError("objective returned a wrong-shaped fitness block")
        return out

    if cfg.max_iters == 0:
        fit = float(evaluate(seed[None, :])[0])
        return DEResult(seed.copy(), fit, [])

    n = seed.size
    pop = np.empty((cfg.pop_size, n))
    pop[0] = seed
    if init_mode == "uniform":
        if init_low is None or init_high is None:
            raise ValueError("uniform initialization needs init_low and init_high")
        lo = np.broadcast_to(np.asarray(init_low, dtype=float), (n,))
        hi = np.broadcast_to(np.asarray(init_high, dtype=float), (n,))
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("uniform initialization needs finite bounds")
        pop[1:] = rng.uniform(lo, hi, (cfg.pop_size - 1, n))
    else:
        pop[1:] = seed + rng.uniform(
            -cfg.init_jitter, cfg.init_jitter, (cfg.pop_size - 1, n)
        )
        if init_low is not None or init_high is not None:
            lo = -np.inf if init_low is None else np.asarray(init_low, dtype=float)
            hi = np.inf if init_high is None else np.asarray(init_high, dtype=float)
            pop[1:] = np.clip(pop[1:], lo, hi)

    fitness = evaluate(pop)
    if not np.all(np.isfinite(fitness)):
        raise ValueError("objective is non-finite on the initial population")

    history: List[IterationRecord] = []
    stall = 0
    indices = np.arange(cfg.pop_size)
    for iteration in range(1, cfg.max_iters + 1):
        prev_best = float(fitness.min())
        g = pop[int(fitness.argmin())]
        trials = np.empty_like(pop)
        for i in range(cfg.pop_size):
            pool = np.delete(indices, i)
            a, b, c = rng.choice(pool, size=3, replace=False)
            trials[i] = de_trial(pop[a], pop[b], pop[c], g, cfg.f, cfg.cr, rng)
        trial_fitness = evaluate(trials)
        better = trial_fitness < fitness
        pop[better] = trials[better]
        fitness[better] = trial_fitness[better]

        best = float(fitness.min())
        stall = 0 if best < prev_best else stall + 1
        history.append(IterationRecord(iteration, best, stall))
        if stall >= cfg.stall_window:
            break

    best_idx = int(fitness.argmin())
    return DEResult(pop[best_idx].copy(), float(fitness[best_idx]), history)
