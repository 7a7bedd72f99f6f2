"""Finitary permutations: products, cycles, and the canonical enumeration.

Run:  python3 demos/01_permutations.py
"""

from sflattice import FinPerm, cycle_decomposition, iter_sf, sf_at, sf_index
from sflattice.serialize import dumps

# Permutations are parsed from cycle notation; the product applies the right factor first.
p = FinPerm.parse("(0 1 2)")
q = FinPerm.parse("(1 3)")
print("p =", p, "  q =", q)
print("p*q =", p * q, "  (p*q)(1) =", (p * q)(1), "= p(q(1)) =", p(q(1)))
print("q*p =", q * p)
print("inverse of p*q:", ~(p * q))

# Cycles come out in a canonical order, and JSON round-trips exactly.
r = FinPerm.parse("(4 9)(0 7 2)")
print("cycles of", r, "->", cycle_decomposition(r))
print("json:", dumps(r.to_json()), "-> back:", FinPerm.from_json(r.to_json()))

# SF(omega) is countable: every finitary permutation has an index in a fixed enumeration.
print("first ten:", [str(g) for g in iter_sf(10)])
i = sf_index(r)
print(f"{r} sits at index {i}; sf_at({i}) = {sf_at(i)}")
