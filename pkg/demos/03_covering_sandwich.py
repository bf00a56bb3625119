"""
Counting cubes and separated points
===================================

At scale m_1**-M the slice X|_N is covered by approximate cubes whose count
is a product of word counts.  A matching separated set has exactly as many
points.  Both facts are checked here in exact rational arithmetic, then the
normalized log-count is tabulated as M grows.
"""

import math
from fractions import Fraction

from spongedim import samples
from spongedim.geometry import (
    cover_count,
    finite_scale_mdim_ratio,
    level_depths,
    metric_comparison_check,
    separated_set,
    verify_sandwich,
)

spec = samples.mcmullen_carpet()
for N, M in [(1, 1), (1, 2), (2, 3), (2, 4)]:
    L = level_depths(spec.m, M).L
    rep = verify_sandwich(spec, N, M)
    print(f"N={N} M={M} L={L}: {rep.summary()} (formula {cover_count(spec, N, M)})")

pts = separated_set(spec, 1, 2)
print("separated points for N=1, M=2:")
for p in pts:
    print("  ", [str(c) for c in p.coordinates])

target = 2 - math.log(2) / math.log(3)
print(f"finite-scale ratios (limit {target:.6f}):")
for M in (4, 16, 64, 256, 1024):
    print(f"  M={M:5d}  {finite_scale_mdim_ratio(spec, 1, M):.6f}")

# The l-infinity / Bowen comparison, as stated and with the factor 1/2.
for eps in (Fraction(1, 8), Fraction(1, 4)):
    strict = metric_comparison_check(spec, 3, eps, samples=500, seed=0)
    halved = metric_comparison_check(spec, 3, eps, samples=500, seed=0, slack=Fraction(1, 2))
    print(f"eps={eps}: stated form {strict}, halved form {halved}")
