"""Exact orthogonality over the cyclotomic integers, and why floats are not used."""
from strongops import Cyclotomic, Factor, build, factor_inner, verify_orthogonality

# 1 + w + w^2 vanishes exactly at order 3
w = Cyclotomic.root(1, 3)
print("1 + w3 + w3^2 == 0:", (1 + w + w * w).is_zero())

a0, a1 = Factor.alpha(0, 3), Factor.alpha(1, 3)
print("<alpha_0|alpha_1> =", factor_inner(a0, a1), " <alpha_0|alpha_0> =", factor_inner(a0, a0))

for family, dims in [("FourAsym", (6,) * 4), ("FourSym", (3, 4, 5, 3)), ("OddN", (4,) * 5), ("EvenN", (3,) * 8)]:
    rep = verify_orthogonality(build(family, dims))
    print(f"{family:<8} {str(dims):<22} {rep.n_states:>5} states  ok={rep.ok}")
