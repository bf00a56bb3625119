"""
When do the two dimensions agree?
=================================

Random full digit sets: the mean Hausdorff dimension equals the metric mean
dimension exactly when every fibre of every truncation has the same size.
"""

import random

from spongedim import samples
from spongedim.dimension import analyze

rng = random.Random(2024)
print(f"{'moduli':>14} {'|D|':>4} {'uniform':>8} {'mdim_M':>10} {'mdim_H':>10} {'gap':>10}")
for _ in range(12):
    spec = samples.random_full_spec(rng, r_max=3, n_max=9)
    rep = analyze(spec, N_max=1, M_max=1)
    gap = rep.mdim_M - rep.mdim_H_upper
    print(f"{str(spec.m):>14} {spec.n_digits:>4} {str(rep.coincidence_flag):>8} "
          f"{rep.mdim_M:10.6f} {rep.mdim_H_upper:10.6f} {gap:10.2e}")

spec = samples.uniform_carpet()
rep = analyze(spec, N_max=2, M_max=1)
print("uniform carpet:", rep.mdim_M, rep.mdim_H_upper, rep.coincidence_status)
