#!/usr/bin/env python3
"""Scoring discovered cores against exact ground truth.

The exact side enumerates every right-maximal substring occurring twice
or more (suffix array + LCP intervals).  The streaming side reports
repeated variables.  A reported variable verifies as a core of pattern P
when every single occurrence of P contains a node of that variable; the
cover ratio says how much of P the core spans.
"""

import numpy as np

from espmine import Compressor
from espmine.patterns import (
    ParseTreeIndex,
    best_core,
    exact_frequent,
    report_table,
    top_k_non_inclusive,
)

rng = np.random.default_rng(12)
data = rng.integers(0, 256, 100_000, dtype=np.uint8)
for plen, times in ((2400, 4), (900, 3), (350, 5)):
    pat = rng.integers(0, 256, plen, dtype=np.uint8)
    for pos in rng.choice(np.arange(0, len(data) - plen, 3000), times, replace=False):
        data[pos : pos + plen] = pat
buf = data.tobytes()

comp = Compressor()
comp.push_bytes(buf)
root = comp.finalize()
index = ParseTreeIndex(comp.store(), root)

patterns = exact_frequent(buf, min_len=100)
top = top_k_non_inclusive(patterns, 10)
reports = [best_core(index, comp.events(), p) for p in top]

print(f"{len(patterns)} frequent patterns >= 100 bytes, "
      f"{len(top)} survive inclusivity filtering\n")
print(report_table(reports))
