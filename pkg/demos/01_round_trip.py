#!/usr/bin/env python3
"""Round trip: stream bytes in, get a grammar file, expand it back.

Generates a repetitive input, compresses it in one pass, writes the
succinct encoding, then rebuilds and expands it to prove nothing was lost.
"""

import numpy as np

from espmine import Compressor, deserialize, from_poslp, serialize, to_poslp

rng = np.random.default_rng(2)
seed = rng.integers(0, 256, 4096, dtype=np.uint8).tobytes()
data = seed * 64  # 256 KiB with heavy long-range repetition

comp = Compressor()
for i in range(0, len(data), 8192):  # any chunking gives the same grammar
    comp.push_bytes(data[i : i + 8192])
root = comp.finalize()

store = comp.store()
print(f"input:            {len(data):>9} bytes")
print(f"grammar variables:{store.n:>9}")

blob = serialize(to_poslp(store, root))
print(f"encoded file:     {len(blob):>9} bytes ({len(blob) / len(data):.1%} of input)")

rebuilt, rb_root = from_poslp(deserialize(blob))
out = b"".join(rebuilt.iter_chunks(rb_root))
print(f"round trip intact: {out == data}")
