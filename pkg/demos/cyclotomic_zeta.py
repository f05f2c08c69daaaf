"""L-functions as Euler products: the cyclotomic character and a Dedekind zeta.

The l-adic cyclotomic character sends Frobenius at p to p, so its local
factor is 1 - pT and its L-function is zeta(s - 1).  Each member of the
family omits p = l; two members together cover every prime.
"""

import math

from hilbertmf.galois import cyclotomic_system, global_factors
from hilbertmf.lfun import EulerProductData, dedekind_zeta, eval_euler
from hilbertmf.quadfield import make_field

B = 10**4
factors = global_factors([cyclotomic_system(3, B), cyclotomic_system(5, B)])
v = eval_euler(EulerProductData(factors, B, root_growth=1), 3)
print(f"L(chi_cyc, 3) = {v.value.real:.10f} (bound {v.bound:.1e})")
print(f"zeta(2)       = {math.pi ** 2 / 6:.10f}")

print("\nzeta of Q(sqrt 5) at s = 3:")
for line in dedekind_zeta(make_field(5), 3, B).lines():
    print("  " + line)
