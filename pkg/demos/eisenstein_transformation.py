"""Numerical check that the weight (4, 4) Eisenstein series over Q(sqrt 5) is modular.

E is summed over coprime bottom rows (c, d) modulo units, truncated at a
norm-ball radius R.  For a random gamma the relative residual of E|gamma - E
should be small and shrink as R grows.  Near the cusp E tends to 1.
"""

import random

from hilbertmf.analytic import LatticeSumSpec, cusp_limit_probe, eisenstein_eval, slash, transformation_points
from hilbertmf.quadfield import make_field
from hilbertmf.sl2 import random_gamma

F = make_field(5)
k = (4, 4)
rng = random.Random(7)

for R in (4, 8, 16, 32):
    v = eisenstein_eval(F, k, LatticeSumSpec(radius=R), (1j, 1j))
    print(f"R = {R:>2}: E(i, i) = {v.value.real:.12f}  ({v.terms} cosets)")

gamma = random_gamma(F, rng, max_height=3)
while not gamma.c:
    gamma = random_gamma(F, rng, max_height=3)
print(f"\ngamma = {gamma}")
pts = transformation_points(gamma, rng, 5)
for R in (6.0, 12.0, 24.0):
    spec = LatticeSumSpec(radius=R)
    E = lambda z: eisenstein_eval(F, k, spec, z).value
    h = slash(E, gamma, k)
    worst = max(abs(h(z) - E(z)) / abs(E(z)) for z in pts)
    print(f"R = {R:>4}: worst relative residual {worst:.2e}")

probe = cusp_limit_probe(lambda z: eisenstein_eval(F, k, LatticeSumSpec(radius=8), z).value)
print(f"\nE along (it, it): {[round(abs(x), 8) for x in probe.values]} -> limit {probe.limit.real:.8f}")
