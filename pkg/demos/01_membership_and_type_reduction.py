"""Tour of the fuzzy primitives: membership grades, rule firing,
interval consequents and Karnik-Mendel type reduction.

Run:  python3 demos/01_membership_and_type_reduction.py
"""

import numpy as np

from fuzzytree.fuzzy import (
    FiringInterval,
    IT2MF,
    IT2Consequent,
    T1MF,
    it2_consequent,
    it2_defuzzify,
    it2_grade_bounds,
    it2_rule_firing,
    km_type_reduce,
    t1_defuzzify,
    t1_grade,
)

# A type-1 set is a rational bell: grade 1 at the center, 0.5 one width out.
mf = T1MF(m=5.0, sigma=2.0)
print("type-1 bell grades around center 5.0, width 2.0:")
for x in (3.0, 5.0, 7.0, 9.0):
    print(f"  x={x}: {t1_grade(x, mf):.4f}")

# An interval type-2 set has an uncertain mean in [m1, m2]; its grade is the
# band between a lower and an upper membership function.
t2 = IT2MF(m1=4.5, m2=5.5, sigma=2.0)
print("\ninterval type-2 grade bands (uncertain mean in [4.5, 5.5]):")
for x in (3.5, 4.5, 5.0, 6.5):
    g = it2_grade_bounds(x, t2)
    print(f"  x={x}: [{g.lower:.4f}, {g.upper:.4f}]")

# Rules fire with the product of their input grades; for type-2 rules the
# firing is itself an interval.
mfs = [IT2MF(0.2, 0.4, 0.3), IT2MF(0.5, 0.7, 0.25)]
firing = it2_rule_firing([0.3, 0.6], mfs)
print(f"\ntwo-input interval firing at (0.3, 0.6): "
      f"[{firing.lower:.4f}, {firing.upper:.4f}]")

# Consequents are affine in the inputs; type-2 consequents carry spreads,
# producing an output interval per rule.
c = IT2Consequent(coeffs=(0.5, 1.0, -0.4), spreads=(0.1, 0.05, 0.0))
print("interval consequent at (0.3, 0.6):",
      tuple(round(v, 4) for v in it2_consequent([0.3, 0.6], c)))

# Type reduction squeezes M interval rules into [y_l, y_r]; the crisp
# output is the midpoint.  Compare with the type-1 weighted mean when all
# the intervals collapse.
rng = np.random.default_rng(0)
M = 5
f_hi = rng.uniform(0.2, 1.0, M)
f_lo = f_hi * rng.uniform(0.3, 1.0, M)
centers = rng.uniform(-1, 1, M)
halves = rng.uniform(0.0, 0.3, M)
firings = [FiringInterval(a, b) for a, b in zip(f_lo, f_hi)]
intervals = list(zip(centers - halves, centers + halves))
y_l, y_r = km_type_reduce(firings, intervals)
print(f"\nKarnik-Mendel on {M} interval rules: y_l={y_l:.4f}, y_r={y_r:.4f}, "
      f"crisp={it2_defuzzify(y_l, y_r):.4f}")

collapsed = km_type_reduce(
    [FiringInterval(v, v) for v in f_hi], [(c0, c0) for c0 in centers]
)
print(f"collapsed intervals degenerate to the type-1 weighted mean: "
      f"{collapsed[0]:.6f} == {t1_defuzzify(f_hi, centers):.6f}")
