#!/usr/bin/env python3
"""The succinct grammar encoding, bit by bit.

A grammar's partial parse tree keeps only the first occurrence of each
variable expanded; later occurrences become leaves.  Walking that tree in
post order gives a bit skeleton B (0 leaf, 1 internal, closing 1 for a
super root) plus the leaf labels L.  A grammar with n rules always costs
2n + 2 skeleton bits and n + 1 labels.
"""

import numpy as np

from espmine import RuleStore, serialize, to_poslp
from espmine.bits import BitVector

store = RuleStore(sigma=2)
x1 = store.request(0, 1)     # X1 -> a b
x2 = store.request(x1, x1)   # X2 -> X1 X1, derives "abab"

p = to_poslp(store, x2)
print(f"rules n = {p.n}")
print(f"B = {''.join(map(str, p.bits))}   ({p.bits.size} bits = 2n + 2)")
print(f"L = {p.labels.tolist()}        ({p.labels.size} labels = n + 1)")
print(f"root id in post order: {p.root}")

bv = BitVector(p.bits)
print(f"\nrank/select over B (1-based):")
print(f"  rank1(4) = {bv.rank(4, 1)}   ones among the first four bits")
print(f"  select0(3) = {bv.select(3, 0)}   position of the third leaf")

blob = serialize(p)
print(f"\non disk: {len(blob)} bytes")
print(f"  magic    {blob[:8]!r}")
print(f"  header   sigma={int.from_bytes(blob[8:16], 'little')}, "
      f"n={int.from_bytes(blob[16:24], 'little')}, "
      f"root={int.from_bytes(blob[24:32], 'little')}, "
      f"|B|={int.from_bytes(blob[32:40], 'little')} bits")
