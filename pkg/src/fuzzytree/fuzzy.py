"""Type-1 and interval type-2 TSK fuzzy subsystem evaluation.

Everything here is a pure function of its arguments: membership grades,
rule firing strengths, affine consequents, weighted-mean defuzzification
for type-1 systems, and center-of-sets type reduction (iterative
Karnik-Mendel with early stopping) followed by interval averaging for
interval type-2 systems.

Scalar operations work on the small dataclasses below; the ``*_node_output``
functions are the vectorized pipelines used to evaluate a whole rule base
over arrays of samples (and, optionally, a leading batch axis of parameter
sets, which is how the tuner evaluates many candidate genotypes at once).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from . import _kernels

# Total-firing guard: below this the weighted mean is undefined and the
# output is defined as 0 (the neutral value for normalized targets).
EPS_FIRE = 1e-12


# ---------------------------------------------------------------------------
# Membership / rule dataclasses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class T1MF:
    """Rational bell membership with center ``m`` and width ``sigma`` > 0."""
    m: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class IT2MF:
    """Gaussian membership with uncertain mean in [m1, m2], width sigma > 0.

    The footprint of uncertainty is bounded below and above by the
    piecewise functions returned by :func:`it2_grade_bounds`.
    """
    m1: float
    m2: float
    sigma: float

    def __post_init__(self):
        if self.m1 > self.m2:
            raise ValueError(f"need m1 <= m2, got m1={self.m1}, m2={self.m2}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class T1Consequent:
    """Affine rule consequent: coeffs = (c0, c1, ..., cd)."""
    coeffs: tuple

    def __len__(self):
        return len(self.coeffs)


@dataclass(frozen=True)
class IT2Consequent:
    """Interval affine consequent: centers c and nonnegative spreads s."""
    coeffs: tuple
    spreads: tuple

    def __post_init__(self):
        if len(self.coeffs) != len(self.spreads):
            raise ValueError("coeffs and spreads must have equal length")
        if any(s < 0 for s in self.spreads):
            raise ValueError("spreads must be nonnegative")


@dataclass(frozen=True)
class FiringInterval:
    """Rule firing strength as an interval [lower, upper] within [0, 1]."""
    lower: float
    upper: float

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper <= 1.0 + 1e-15):
            raise ValueError(
                f"need 0 <= lower <= upper <= 1, got [{self.lower}, {self.upper}]"
            )


# ---------------------------------------------------------------------------
# Membership grades
# ---------------------------------------------------------------------------

def bell_grade(x, m, sigma):
    """Rational bell grade 1 / (1 + ((x - m) / sigma)**2); broadcasts."""
    t = (np.asarray(x, dtype=float) - m) / sigma
    return 1.0 / (1.0 + t * t)


def gaussian_grade(x, m, sigma):
    """Gaussian grade exp(-0.5 ((x - m) / sigma)**2); broadcasts."""
    t = (np.asarray(x, dtype=float) - m) / sigma
    return np.exp(-0.5 * t * t)


def it2_grade_interval(x, m1, m2, sigma):
    """Lower/upper membership of a Gaussian with uncertain mean in [m1, m2].

    Lower: the farther mean's Gaussian (m2 left of the midpoint, m1 right
    of it).  Upper: m1's Gaussian left of m1, exactly 1 on [m1, m2], m2's
    Gaussian right of m2.  All arguments broadcast; returns (lower, upper).
    """
    x = np.asarray(x, dtype=float)
    g1 = gaussian_grade(x, m1, sigma)
    g2 = gaussian_grade(x, m2, sigma)
    mid = 0.5 * (m1 + m2)
    lower = np.where(x <= mid, g2, g1)
    upper = np.where(x < m1, g1, np.where(x > m2, g2, 1.0))
    return lower, upper


def t1_grade(x: float, mf: T1MF) -> float:
    """Membership grade of ``x`` in a type-1 bell set; in (0, 1]."""
    if not np.isfinite(x):
        raise ValueError(f"non-finite input {x}; inputs must be normalized upstream")
    return float(bell_grade(x, mf.m, mf.sigma))


def it2_grade_bounds(x: float, mf: IT2MF) -> FiringInterval:
    """Lower and upper membership grades of ``x`` in an interval type-2 set."""
    if not np.isfinite(x):
        raise ValueError(f"non-finite input {x}; inputs must be normalized upstream")
    lo, hi = it2_grade_interval(x, mf.m1, mf.m2, mf.sigma)
    return FiringInterval(float(lo), float(hi))


# ---------------------------------------------------------------------------
# Rule firing
# ---------------------------------------------------------------------------

def t1_rule_firing(inputs: Sequence[float], mfs: Sequence[T1MF]) -> float:
    """Product of per-input grades; in (0, 1]."""
    if len(inputs) != len(mfs):
        raise ValueError(f"{len(inputs)} inputs vs {len(mfs)} membership functions")
    if len(inputs) == 0:
        raise ValueError("a rule needs at least one input")
    out = 1.0
    for x, mf in zip(inputs, mfs):
        out *= t1_grade(x, mf)
    return out


def it2_rule_firing(inputs: Sequence[float], mfs: Sequence[IT2MF]) -> FiringInterval:
    """Interval firing: elementwise products of lower and of upper grades."""
    if len(inputs) != len(mfs):
        raise ValueError(f"{len(inputs)} inputs vs {len(mfs)} membership functions")
    if len(inputs) == 0:
        raise ValueError("a rule needs at least one input")
    lo = hi = 1.0
    for x, mf in zip(inputs, mfs):
        g = it2_grade_bounds(x, mf)
        lo *= g.lower
        hi *= g.upper
    return FiringInterval(lo, hi)


# ---------------------------------------------------------------------------
# Consequents
# ---------------------------------------------------------------------------

def t1_consequent(inputs: Sequence[float], c: T1Consequent) -> float:
    """Affine consequent value c0 + sum_j cj * x_j."""
    if len(c.coeffs) != len(inputs) + 1:
        raise ValueError(f"{len(c.coeffs)} coefficients for {len(inputs)} inputs")
    out = c.coeffs[0]
    for x, cj in zip(inputs, c.coeffs[1:]):
        out += cj * x
    return float(out)


def it2_consequent(inputs: Sequence[float], c: IT2Consequent) -> Tuple[float, float]:
    """Interval consequent endpoints.

    Evaluates the affine form at coefficient endpoints c - s and c + s
    (with x0 := 1) and orders the two results; negative inputs can flip
    the raw endpoint order.
    """
    if len(c.coeffs) != len(inputs) + 1:
        raise ValueError(f"{len(c.coeffs)} coefficients for {len(inputs)} inputs")
    lo = c.coeffs[0] - c.spreads[0]
    hi = c.coeffs[0] + c.spreads[0]
    for x, cj, sj in zip(inputs, c.coeffs[1:], c.spreads[1:]):
        lo += (cj - sj) * x
        hi += (cj + sj) * x
    return (lo, hi) if lo <= hi else (hi, lo)


# ---------------------------------------------------------------------------
# Defuzzification / type reduction
# ---------------------------------------------------------------------------

def t1_defuzzify(firings: Sequence[float], consequents: Sequence[float]) -> float:
    """Firing-weighted mean of consequent values; 0 when total firing ~ 0."""
    if len(firings) == 0:
        raise ValueError("empty rule set")
    if len(firings) != len(consequents):
        raise ValueError(f"{len(firings)} firings vs {len(consequents)} consequents")
    f = np.asarray(firings, dtype=float)
    b = np.asarray(consequents, dtype=float)
    den = f.sum()
    if den < EPS_FIRE:
        return 0.0
    return float((f * b).sum() / den)


def km_type_reduce(
    firings: Sequence[FiringInterval],
    consequents: Sequence[Tuple[float, float]],
) -> Tuple[float, float]:
    """Center-of-sets type reduction of interval rules to [y_l, y_r].

    Iterative Karnik-Mendel on both endpoints: rules are sorted ascending
    by the relevant consequent endpoint, the weighted mean is initialized
    with midpoint firings, and the switch point is recomputed until it
    repeats (at most M passes).  y_l puts upper firings on rules up to the
    switch point; y_r puts them after it.

    Returns (0.0, 0.0) when every rule's upper firing is ~ 0 (degenerate).
    """
    M = len(firings)
    if M == 0:
        raise ValueError("empty rule set")
    if len(consequents) != M:
        raise ValueError(f"{M} firings vs {len(consequents)} consequents")
    fl = np.array([f.lower for f in firings], dtype=float)
    fu = np.array([f.upper for f in firings], dtype=float)
    bl = np.array([c[0] for c in consequents], dtype=float)
    bu = np.array([c[1] for c in consequents], dtype=float)
    yl, yr = km_reduce_batch(fl[None, :], fu[None, :], bl[None, :], bu[None, :])
    return float(yl[0]), float(yr[0])


def it2_defuzzify(y_l: float, y_r: float) -> float:
    """Crisp output: midpoint of the type-reduced interval."""
    if y_l > y_r:
        raise ValueError(f"need y_l <= y_r, got [{y_l}, {y_r}]")
    return 0.5 * (y_l + y_r)


def _km_endpoint(f_lower, f_upper, b, left: bool):
    """One Karnik-Mendel endpoint for rows of pre-sorted-by-``b`` rules.

    ``f_lower``, ``f_upper``, ``b`` have shape (K, M) with ``b`` ascending
    along the last axis.  ``left=True`` computes the left endpoint (upper
    firings before the switch point), ``left=False`` the right endpoint.

    Each switch-point pass is O(1) per row thanks to prefix sums: with
    switch index k, the weighted sums split into a head (first k rules)
    and a tail, both read off cumulative arrays.
    """
    K, M = b.shape
    if M == 1:
        den = 0.5 * (f_lower[:, 0] + f_upper[:, 0])
        return np.where(den > 0, b[:, 0], 0.0)

    head_f, tail_f = (f_upper, f_lower) if left else (f_lower, f_upper)
    zeros = np.zeros((K, 1))
    chead = np.concatenate([zeros, np.cumsum(head_f, axis=1)], axis=1)
    chead_b = np.concatenate([zeros, np.cumsum(head_f * b, axis=1)], axis=1)
    ctail = np.concatenate([zeros, np.cumsum(tail_f, axis=1)], axis=1)
    ctail_b = np.concatenate([zeros, np.cumsum(tail_f * b, axis=1)], axis=1)
    tail_total = ctail[:, -1]
    tail_total_b = ctail_b[:, -1]
    rows = np.arange(K)

    w = 0.5 * (f_lower + f_upper)
    den = w.sum(axis=1)
    y = np.where(den > EPS_FIRE, (w * b).sum(axis=1) / np.where(den > 0, den, 1.0), 0.0)

    k_prev = np.full(K, -1)
    for _ in range(M):
        k = np.clip((b <= y[:, None]).sum(axis=1), 1, M - 1)
        num = chead_b[rows, k] + (tail_total_b - ctail_b[rows, k])
        den = chead[rows, k] + (tail_total - ctail[rows, k])
        y = np.where(den > EPS_FIRE, num / np.where(den > 0, den, 1.0), 0.0)
        if np.array_equal(k, k_prev):
            break
        k_prev = k
    return y


def km_reduce_batch(f_lower, f_upper, b_lower, b_upper):
    """Vectorized center-of-sets type reduction.

    All four arrays share the shape (..., M): interval firing strengths
    and interval consequent endpoints for M rules.  Returns (y_l, y_r)
    with shape (...).  Rows whose total upper firing is ~ 0 yield (0, 0).

    Dispatches to a compiled per-row kernel when numba is available; the
    numpy fallback below runs the identical iterative procedure.
    """
    fl = np.asarray(f_lower, dtype=float)
    fu = np.asarray(f_upper, dtype=float)
    bl = np.asarray(b_lower, dtype=float)
    bu = np.asarray(b_upper, dtype=float)
    lead = fl.shape[:-1]
    M = fl.shape[-1]
    fl = np.ascontiguousarray(fl.reshape(-1, M))
    fu = np.ascontiguousarray(fu.reshape(-1, M))
    bl = np.ascontiguousarray(bl.reshape(-1, M))
    bu = np.ascontiguousarray(bu.reshape(-1, M))

    if _kernels.HAVE_NUMBA:
        yl, yr = _kernels.km_endpoints(fl, fu, bl, bu, EPS_FIRE)
        return yl.reshape(lead), yr.reshape(lead)

    order_l = np.argsort(bl, axis=1, kind="stable")
    yl = _km_endpoint(
        np.take_along_axis(fl, order_l, axis=1),
        np.take_along_axis(fu, order_l, axis=1),
        np.take_along_axis(bl, order_l, axis=1),
        left=True,
    )
    order_r = np.argsort(bu, axis=1, kind="stable")
    yr = _km_endpoint(
        np.take_along_axis(fl, order_r, axis=1),
        np.take_along_axis(fu, order_r, axis=1),
        np.take_along_axis(bu, order_r, axis=1),
        left=False,
    )
    dead = fu.sum(axis=1) < EPS_FIRE
    yl = np.where(dead, 0.0, yl)
    yr = np.where(dead, 0.0, yr)
    return yl.reshape(lead), yr.reshape(lead)


# ---------------------------------------------------------------------------
# Whole-rule-base pipelines (vectorized over samples and parameter batches)
# ---------------------------------------------------------------------------

def rule_grid(d: int) -> np.ndarray:
    """(2**d, d) matrix of membership indices, one row per rule.

    Row r assigns input j its membership set (r >> (d-1-j)) & 1, i.e. the
    first input varies slowest -- the usual nested-loop enumeration order.
    """
    r = np.arange(2 ** d)
    return (r[:, None] >> (d - 1 - np.arange(d))[None, :]) & 1


def _firing_products(grades: np.ndarray, grid: np.ndarray) -> np.ndarray:
    # grades: (..., d, 2) per-input/per-set values -> (..., 2**d) products in
    # rule-grid order (first input slowest), built by successive doubling.
    lead = grades.shape[:-2]
    d = grades.shape[-2]
    out = grades[..., 0, :]
    for j in range(1, d):
        out = (out[..., :, None] * grades[..., None, j, :]).reshape(lead + (2 ** (j + 1),))
    return out


def _affine_values(z: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    # z: (..., N, d); coeffs: (..., R, d+1) -> (..., N, R)
    return coeffs[..., None, :, 0] + np.matmul(z, np.swapaxes(coeffs[..., 1:], -1, -2))


def t1_node_output(z, m, sigma, coeffs):
    """Type-1 rule-base output for every sample.

    Parameters
    ----------
    z : (..., N, d) node inputs.
    m, sigma : (..., d, 2) bell centers/widths, two sets per input.
    coeffs : (..., R, d+1) affine consequents, R = 2**d rules.

    Leading axes broadcast (used to evaluate batches of parameter sets).
    Returns the (..., N) firing-weighted mean, 0 where total firing ~ 0.
    """
    z = np.asarray(z, dtype=float)
    d = z.shape[-1]
    grid = rule_grid(d)
    grades = bell_grade(z[..., None], m[..., None, :, :], sigma[..., None, :, :])
    f = _firing_products(grades, grid)
    b = _affine_values(z, coeffs)
    den = f.sum(axis=-1)
    return np.where(den > EPS_FIRE, (f * b).sum(axis=-1) / np.where(den > 0, den, 1.0), 0.0)


def it2_node_output(z, m1, m2, sigma, coeffs, spreads):
    """Interval type-2 rule-base output for every sample.

    Same layout as :func:`t1_node_output` plus the uncertain-mean pair and
    per-coefficient spreads (callers pass sanitized parameters: m1 <= m2,
    sigma > 0, spreads >= 0).  Fires all R = 2**d rules as intervals,
    type-reduces with Karnik-Mendel and returns the interval midpoint.

    The standard (N, d) and (P, N, d) layouts run through one fused
    compiled pass when numba is available.
    """
    z = np.asarray(z, dtype=float)
    m1 = np.asarray(m1, dtype=float)
    if _kernels.HAVE_NUMBA and z.ndim in (2, 3) and m1.ndim == z.ndim - 1:
        single = z.ndim == 2
        as3 = lambda a: np.ascontiguousarray(a[None] if single else a)
        out = _kernels.it2_node_eval(
            as3(z), as3(m1), as3(np.asarray(m2, dtype=float)),
            as3(np.asarray(sigma, dtype=float)),
            as3(np.asarray(coeffs, dtype=float)),
            as3(np.asarray(spreads, dtype=float)),
            EPS_FIRE,
        )
        return out[0] if single else out

    d = z.shape[-1]
    grid = rule_grid(d)
    glo, ghi = it2_grade_interval(
        z[..., None], m1[..., None, :, :], m2[..., None, :, :], sigma[..., None, :, :]
    )
    f_lo = _firing_products(glo, grid)
    f_hi = _firing_products(ghi, grid)
    b_lo = _affine_values(z, coeffs - spreads)
    b_hi = _affine_values(z, coeffs + spreads)
    bl = np.minimum(b_lo, b_hi)
    bu = np.maximum(b_lo, b_hi)
    yl, yr = km_reduce_batch(f_lo, f_hi, bl, bu)
    return 0.5 * (yl + yr)
