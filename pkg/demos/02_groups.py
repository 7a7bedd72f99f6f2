"""Infinite groups described lazily and queried through a finite window.

Run:  python3 demos/02_groups.py
"""

from sflattice import (
    FinPerm,
    IndexSet,
    PartitionDesc,
    PartitionGroup,
    WindowConfig,
    generated_over,
    gstar,
    gstar_subgroup,
    local_part,
    membership,
)
from sflattice.groups import gstar_block

# G* is generated by cycles on consecutive blocks of prime length 2, 3, 5, 7, ...
G = gstar()
print("first blocks:", [list(gstar_block(i)) for i in range(4)])

for text in ["(0 1)", "(2 3 4)", "(2 4 3)(0 1)", "(2 3)"]:
    v = membership(FinPerm.parse(text), G)
    print(f"{text:>14} in G*: {v.status}", "" if v.certificate is None else
          f"certificate {[(str(g), e) for g, e in v.certificate]}")

# Subgroups indexed by sets of blocks: here the even-numbered blocks.
evens = gstar_subgroup(IndexSet.parse("evens"))
print("(0 1) in G*_evens:", membership(FinPerm.parse("(0 1)"), evens).status)
print("(2 3 4) in G*_evens:", membership(FinPerm.parse("(2 3 4)"), evens).status)

# The local part on A is the finite group of elements supported inside A.
E = PartitionGroup(PartitionDesc.mod(2))
lp = local_part(E, range(6))
print("Sym(evens) x Sym(odds) on {0..5}:", len(lp), "elements, exact =", lp.exact)
H = generated_over(E, [FinPerm.parse("(0 1)")])
print("adding (0 1) gives", len(local_part(H, range(6))), "elements on {0..5}")

# Anything outside the window is reported as unknown rather than guessed.
far = FinPerm.parse("(100 102)")
print("(100 102) with window 64:", membership(far, E, WindowConfig(64)).status)
print("(100 102) with window 128:", membership(far, E, WindowConfig(128)).status)
