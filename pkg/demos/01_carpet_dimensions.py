"""
Two dimensions of a McMullen carpet system
==========================================

Three digits sit in a 2 x 3 grid: one in the left column and two in the
right column.  Because the columns carry different numbers of digits, the
metric mean dimension and the mean Hausdorff dimension of the sponge system
come apart.
"""

import math

from spongedim import samples
from spongedim.dimension import analyze
from spongedim.measures import build_fN
from spongedim.variational import optimize_bernoulli
from spongedim.weighted import exponents_and_weights, z_value

spec = samples.mcmullen_carpet()
print("digits:", spec.digits)

# The exponent a = log 2 / log 3 discounts the vertical direction.
ew = exponents_and_weights(spec.m)
print("exponent a =", ew.a, " weights w =", ew.w)

# Z_1 sums fibre sizes raised to a: 1**a + 2**a.
z1 = z_value(spec, N=1)
print("Z_1 =", z1.total, " (1 + 2**a =", 1 + 2 ** ew.a[0], ")")

# For a full digit set the recursion is multiplicative in N.
for N in range(1, 5):
    print(f"  N={N}  log Z_N / N = {z_value(spec, N=N).log_total / N:.15f}")

# The distribution f_1 is the optimal Bernoulli measure.
f1 = build_fN(spec, N=1).f
p, value = optimize_bernoulli(spec)
print("f_1        :", [round(float(x), 6) for x in f1])
print("optimum p* :", [round(float(x), 6) for x in p.p], " value", value)

rep = analyze(spec, N_max=3, M_max=6)
print(f"metric mean dimension   {rep.mdim_M:.12f}  (2 - log2/log3 = {2 - math.log(2) / math.log(3):.12f})")
print(f"mean Hausdorff interval [{rep.mdim_H_lower:.12f}, {rep.mdim_H_upper:.12f}]")
print(f"gap                     {rep.mdim_M - rep.mdim_H_upper:.6f}")
