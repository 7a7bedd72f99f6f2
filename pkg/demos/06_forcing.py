"""Generic filters for the posets P_r and P_a over a three-member family.

Run:  python3 demos/06_forcing.py
"""

from sflattice import (
    DenseOracle,
    PartitionDesc,
    PartitionGroup,
    extract_group,
    extract_pair,
    gstar,
    rasiowa_sikorski,
)
from sflattice.forcing import transcript, verify
from sflattice.serialize import dumps

family = [gstar(), PartitionGroup(PartitionDesc.blocks(2)), PartitionGroup(PartitionDesc.blocks(3))]
w = 512

oracles = [DenseOracle.pr(G, k) for G in family for k in range(8)]
chain = rasiowa_sikorski("pr", oracles, w)
print("P_r: met", len(chain.met), "dense sets; verified:", verify(chain, oracles, w))
H0, H1 = extract_pair(chain)
print("  extracted groups have", len(H0.generators), "and", len(H1.generators), "generators")

oracles = [DenseOracle.sigma_group(G) for G in family] + [DenseOracle.sigma_size(l) for l in range(8)]
chain = rasiowa_sikorski("pa", oracles, w)
print("P_a: met", len(chain.met), "dense sets; verified:", verify(chain, oracles, w))
print("  extracted generators:", [str(p) for p in extract_group(chain).generators][:3], "...")

doc = dumps(transcript(chain, oracles, w))
print("transcript is", len(doc), "bytes and identical on rerun:",
      doc == dumps(transcript(rasiowa_sikorski("pa", oracles, w), oracles, w)))
