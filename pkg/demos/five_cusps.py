"""The principal congruence subgroup of level 2 over Q(sqrt 5) has five cusps.

Q(sqrt 5) has class number one, so the full Hilbert modular group has a
single cusp.  Passing to Gamma(2) splits it: cusps are then told apart by a
residue pair modulo 2 O_F, taken up to units.  The residue ring O_F / 2 is
the field with four elements, so there are (16 - 1) / 3 = 5 classes.
"""

import random

from hilbertmf.cusps import classify_cusps, random_cusp
from hilbertmf.cusps import parse_cusp
from hilbertmf.ideals import IdealHNF, class_group, parse_ideal
from hilbertmf.quadfield import make_field

F = make_field(5)
print(f"{F}: class number {class_group(F).h}")

full = classify_cusps(F, IdealHNF.unit(F), [random_cusp(F, random.Random(0)) for _ in range(40)])
print(f"40 random cusps under the full group: {full.count} class")

two = parse_ideal(F, "4.2")
reps = [parse_cusp(F, s) for s in ("0", "1", "inf", "w", "1-w")]
level2 = classify_cusps(F, two, reps)
print(f"\nlevel {two.label}:")
for line in level2.lines():
    print("  " + line)

rng = random.Random(1)
hits = {}
for _ in range(200):
    k = random_cusp(F, rng)
    hits[level2.class_of(k)] = hits.get(level2.class_of(k), 0) + 1
print("\n200 random cusps land in classes", dict(sorted(hits.items())))
