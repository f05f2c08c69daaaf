"""The level-11 weight-2 eigenform and the curve y^2 + y = x^3 - x^2 - 10x - 20.

Over Q the local factors 1 - a_p T + p T^2 of the compatible system attached
to the eigenform eta(z)^2 eta(11z)^2 are read off its Hecke eigenvalues.
Point counting on the curve gives the same traces, and the Euler product
agrees with the Dirichlet series of the form.
"""

from sympy import primerange

from hilbertmf.galois import point_count_trace_oracle, strict_compat_check, system_from_eigensystem
from hilbertmf.hecke import classical_degree1_oracle, eigensystem_from_degree1
from hilbertmf.lfun import lfun_of_eigenform

curve = (0, -1, 1, -10, -20)
f = classical_degree1_oracle(11, 2, 1000)
es = eigensystem_from_degree1(f, primerange(2, 1001))

print(" p   a_p(form)  a_p(curve)")
for p in primerange(2, 40):
    if p == 11:
        continue
    print(f"{p:>2}  {int(es.theta_T[str(p)]):>9}  {point_count_trace_oracle(curve, p):>10}")

print("\nL(f, 3) two ways:")
for line in lfun_of_eigenform(es, f, 3, 1000).lines():
    print("  " + line)

a, b = system_from_eigensystem(es, 3, 1000), system_from_eigensystem(es, 5, 1000)
print("\n3-adic vs 5-adic members:", strict_compat_check(a, b, 1000).lines()[-1])
