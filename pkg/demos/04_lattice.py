"""Orthogonality, almost containment, and the metric on subgroups.

Run:  python3 demos/04_lattice.py
"""

from sflattice import (
    FinPerm,
    FinitelyGenerated,
    IndexSet,
    PartitionGroup,
    almost_contained,
    almost_contained_verify,
    gstar_subgroup,
    metric_d,
    orthogonal,
    trivial_group,
)
from sflattice.partitions import residue_pair_example

# Index sets transfer to G*-subgroups: inclusion, almost inclusion and disjointness all survive.
A, B = IndexSet.parse("mod4:0"), IndexSet.parse("evens")
GA, GB = gstar_subgroup(A), gstar_subgroup(B)
print("G_mod4:0 <= G_evens:", almost_contained_verify(GA, GB).status)
print("G_evens <=_a G_mod4:0:", almost_contained(GB, GA).status)
print("G_evens orthogonal to G_odds:",
      orthogonal(GB, gstar_subgroup(IndexSet.parse("odds"))).status)

# Two 1-closed groups that are orthogonal, yet one is almost contained in the other.
e0, e1 = residue_pair_example()
G0, G1 = PartitionGroup(e0), PartitionGroup(e1)
v = orthogonal(G0, G1)
print("G_E0 orthogonal to G_E1:", v.status, "(exact)" if v.exact else "")
print("G_E1 <= <G_E0, (0 1)>:", almost_contained_verify(G1, G0, [FinPerm.parse("(0 1)")]).status)

# The metric sums 2^-n over the finite sets A_n on which the local parts disagree.
value, err = metric_d(FinitelyGenerated((FinPerm.parse("(0 1)"),)), trivial_group())
print(f"d(<(0 1)>, 1) = {value} (~{float(value):.6f}), tail at most {float(err):.1e}")
