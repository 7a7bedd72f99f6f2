"""The constructive steps: avoiding supports, building rho, diagonalising.

Run:  python3 demos/05_constructions.py
"""

from sflattice import (
    EnumeratedFamily,
    IndexSet,
    PartitionDesc,
    PartitionGroup,
    anti_reaping_pair,
    avoid_support,
    build_rho,
    gstar,
    gstar_subgroup,
)

G = PartitionGroup(PartitionDesc.mod(2))
print("element of G_mod2 moving only points >= 3:", avoid_support(G, 3))

# rho is a product of (k+1)-cycles above m that adds nothing new inside G.
r = build_rho([G], 1, 0, (), 11)
print("rho (k=1):", r.rho, " D:", r.D, " f:", r.f)
r2 = build_rho([G], 2, 0, (), 64)
print("rho (k=2):", r2.rho)

# Two groups with trivial intersection that both meet every member of a family.
fam = EnumeratedFamily((gstar_subgroup(IndexSet.parse("evens")), gstar()))
g, h = anti_reaping_pair(fam, 6, 256)  # G* blocks grow fast, so widen the window
print("first group generators:", [str(p) for p in g.perms])
print("second group generators:", [str(p) for p in h.perms])
