"""Eventually periodic partitions and the groups preserving their classes.

Run:  python3 demos/03_partitions.py
"""

from sflattice import FinPerm, PartitionDesc, coarsen_by_perm, extract_transposition, join, meet
from sflattice.partitions import residue_pair_example


def show(E, n=12):
    return [sorted(c) for c in E.classes_upto(n)]


m2, m3 = PartitionDesc.mod(2), PartitionDesc.mod(3)
print("mod2 meet mod3:", show(meet(m2, m3)))
print("mod2 join mod3:", show(join(m2, m3)))

# Adding a finitary permutation to a partition group merges the classes it connects.
g = FinPerm.parse("(0 1)")
C = coarsen_by_perm(m3, g)
print("mod3 coarsened by (0 1):", show(C))

# The merge is witnessed by an honest transposition between spare points of the two classes.
print("transposition extracted from (0 1):", extract_transposition(m3, g, 0, 1))

e0, e1 = residue_pair_example()
print("E0:", show(e0))
print("E1:", show(e1))
