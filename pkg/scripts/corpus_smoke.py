#!/usr/bin/env python3
"""Evaluate core quality on real corpus files, without pass/fail judgment.

Point this at any text or binary corpora you have lying around (e.g.
prefixes of the usual repetitive-corpus downloads) and it prints the
per-pattern cover-ratio table for each.  Nothing here asserts thresholds;
corpus-scale numbers depend on the material and the hardware, so this
script only reports what it measured.

    python3 scripts/corpus_smoke.py big.txt dna.fa --prefix-bytes 4194304
"""

from __future__ import annotations

import argparse
import sys

from espmine.cli import main as cli_main


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("corpora", nargs="+", help="corpus files to evaluate")
    ap.add_argument("--prefix-bytes", type=int, default=1 << 22,
                    help="bytes of each corpus to evaluate (default 4 MiB)")
    ap.add_argument("--min-len", type=int, default=50)
    ap.add_argument("--top", type=int, default=20)
    args = ap.parse_args(argv)

    worst = 0
    for path in args.corpora:
        print(f"==> {path}")
        rc = cli_main([
            "evaluate", "-i", path,
            "--prefix-bytes", str(args.prefix_bytes),
            "--min-len", str(args.min_len),
            "--top", str(args.top),
        ])
        worst = max(worst, rc)
        print()
    return worst


if __name__ == "__main__":
    sys.exit(run())
