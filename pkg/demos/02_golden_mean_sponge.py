"""
A sponge over a subshift of finite type
=======================================

Four digits in a 2 x 3 grid with two forbidden transitions.  Entropies come
from determinized presentations of the projected languages, the weighted
entropy is bracketed from above by Fekete bounds and from below by the Parry
measure with hidden-Markov block bounds.
"""

from spongedim import samples
from spongedim.dimension import analyze
from spongedim.entropy import determinize_projection, topological_entropy
from spongedim.variational import markov_lower_bound, refine_markov
from spongedim.weighted import weighted_entropy_estimate

spec = samples.sft_carpet()
print("digits:", spec.digits)
print("successors:", spec.successors)

for level in (1, 2):
    pres = determinize_projection(spec, level)
    est = topological_entropy(spec, level)
    print(f"level {level}: {pres.n_states} states, h = {est.exact_value:.12f}, "
          f"Fekete bound {est.fekete_upper:.12f}")

# Upper bounds come down slowly; lower bounds climb with the block length.
upper = weighted_entropy_estimate(spec, N_max=9)
print("log Z_N / N:", [round(x, 6) for x in upper.sequence])
for block in range(1, 7):
    print(f"  block {block}: Parry lower bound {markov_lower_bound(spec, block=block):.9f}")
_, refined = refine_markov(spec, block=3)
print(f"after local search over transition rows (block 3): {refined:.9f}")
print(f"Fekete upper bound: {upper.fekete_upper:.9f}")

rep = analyze(spec, N_max=8, M_max=4)
print(f"mdim_M = {rep.mdim_M:.9f}, mdim_H in [{rep.mdim_H_lower:.9f}, {rep.mdim_H_upper:.9f}]")
