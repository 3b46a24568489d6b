#!/usr/bin/env python3
"""A look inside one parsing round: segments, labels, landmarks, blocks.

The parser cuts each level string into maximal repetitions and
repetition-free runs, then blocks every piece into groups of 2 or 3.
Long repetition-free runs are blocked around landmarks: positions whose
iterated-reduction label beats both neighbours.  Because each label
depends on a tiny left context only, equal substrings land on the same
landmarks no matter what surrounds them.
"""

from espmine import RuleStore, esp_round, find_landmarks, reduce_full, segment
from espmine.esp import DEFAULT_CONFIG, TYPE2, first_occurrence_ranks

s = b"aaaabcdefghijklmnop"
print(f"level 0: {s.decode()!r}")

print("\nsegments (1-based, inclusive):")
segs = segment(s)
for seg in segs:
    piece = s[seg.start - 1 : seg.end].decode()
    print(f"  {seg.kind}  [{seg.start:>2},{seg.end:>2}]  {piece!r}")

# reduction applies to the repetition-free run, using the level-wide ranks
ranks = first_occurrence_ranks(s)
run = next(sg for sg in segs if sg.kind == TYPE2)
run_ranks = ranks[run.start - 1 : run.end]
labels = reduce_full(run_ranks)
marks = find_landmarks(labels)
print(f"\nreduction input (rank slice of the type2 run): {run_ranks}")
print(f"labels after {DEFAULT_CONFIG.iterations} passes: "
      f"{[v if v is not None else '-' for v in labels.values]}")
print(f"landmarks (0-based within the run): {marks}")

store = RuleStore(256)
level1 = esp_round(s, DEFAULT_CONFIG, store.request)
print(f"\nlevel 1: {level1}")
print("rules created:")
for var in range(256, 256 + store.n):
    left, right = store.rule(var)
    print(f"  {var} -> ({left}, {right})   derives {store.expand_bytes(var)!r}")
