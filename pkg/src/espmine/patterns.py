"""Exact frequent-pattern enumeration and core verification.

The streaming compressor reports variables that repeat; this module is the
ground truth those reports are judged against.  It enumerates every
right-maximal substring occurring at least twice (suffix array + LCP
intervals, with an independent brute force for cross-checking), filters to
the longest mutually non-inclusive patterns, and checks whether a reported
variable really is a core: a node of the parse tree lying inside every
occurrence of the pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernel
from .grammar import RuleStore
from .streaming import CoreEvent

ORACLE_BOUND = 16 << 20
BRUTE_BOUND = 1 << 16


@dataclass(frozen=True)
class FrequentPattern:
    """A substring with all of its occurrence positions (1-based, sorted)."""

    text: bytes
    occurrences: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.text)

    @property
    def freq(self) -> int:
        return len(self.occurrences)


@dataclass(frozen=True)
class CoverReport:
    """How well the best verified core covers one pattern."""

    pattern: FrequentPattern
    core: Optional[int]
    core_length: int
    ratio: float


def suffix_array(data: bytes) -> np.ndarray:
    """Suffix array by prefix doubling (lexsort); O(n log^2 n), vectorized."""
    n = len(data)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    order = np.argsort(rank, kind="stable")
    k = 1
    while True:
        key2 = np.full(n, -1, dtype=np.int64)
        key2[: n - k] = rank[k:]
        order = np.lexsort((key2, rank))
        r1 = rank[order]
        r2 = key2[order]
        changed = np.empty(n, dtype=np.int64)
        changed[0] = 0
        np.cumsum((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1]), out=changed[1:])
        if changed[-1] == n - 1:
            return order.astype(np.int64)
        rank = np.empty(n, dtype=np.int64)
        rank[order] = changed
        k *= 2
        if k >= n:
            return order.astype(np.int64)


def lcp_array(data: bytes, sa: np.ndarray) -> np.ndarray:
    """lcp[i] = common prefix length of suffixes sa[i-1] and sa[i]; lcp[0] = 0."""
    if len(data) == 0:
        return np.zeros(0, dtype=np.int64)
    arr = np.frombuffer(data, dtype=np.uint8)
    return _kernel.lcp_kasai(arr, np.ascontiguousarray(sa, dtype=np.int64))


def _lcp_internal_nodes(lcp: np.ndarray) -> list[tuple[int, int, int]]:
    """Every LCP interval (depth, lo, hi) with >= 2 suffixes and depth >= 1.

    These are the internal suffix-tree nodes: exactly the right-maximal
    repeated substrings, each with its complete suffix-array interval.
    """
    n = lcp.size
    out: list[tuple[int, int, int]] = []
    stack: list[list[int]] = [[0, 0]]
    for i in range(1, n):
        h = int(lcp[i])
        lb = i - 1
        while h < stack[-1][0]:
            d, l = stack.pop()
            out.append((d, l, i - 1))
            lb = l
        if h > stack[-1][0]:
            stack.append([h, lb])
    while stack:
        d, l = stack.pop()
        if d > 0:
            out.append((d, l, n - 1))
    return out


def _frequent_suffixarray(data: bytes, min_len: int) -> list[FrequentPattern]:
    sa = suffix_array(data)
    lcp = lcp_array(data, sa)
    out = []
    for depth, lo, hi in _lcp_internal_nodes(lcp):
        if depth < min_len:
            continue
        occ = np.sort(sa[lo : hi + 1]) + 1
        start = int(occ[0]) - 1
        out.append(FrequentPattern(data[start : start + depth], tuple(int(x) for x in occ)))
    return out


def _frequent_bruteforce(data: bytes, min_len: int) -> list[FrequentPattern]:
    """Independent oracle: scan lengths upward until nothing repeats.

    Frequency is monotone in length, so the first empty length ends the scan.
    Right-maximality: some two occurrences are followed by different bytes,
    or one occurrence touches the end of the string.
    """
    n = len(data)
    out = []
    length = max(1, min_len)
    while length <= n:
        groups: dict[bytes, list[int]] = {}
        for i in range(n - length + 1):
            groups.setdefault(data[i : i + length], []).append(i)
        any_frequent = False
        for text, occ in groups.items():
            if len(occ) < 2:
                continue
            any_frequent = True
            followers = {data[i + length] if i + length < n else -1 for i in occ}
            if len(followers) > 1 or -1 in followers:
                out.append(FrequentPattern(text, tuple(i + 1 for i in occ)))
        if not any_frequent:
            break
        length += 1
    return out


def exact_frequent(
    data: bytes,
    min_len: int = 1,
    method: str = "suffixarray",
    max_bytes: int = ORACLE_BOUND,
) -> list[FrequentPattern]:
    """All right-maximal substrings of length >= min_len occurring >= 2 times.

    Results are sorted longest first (ties by first occurrence) with exact,
    complete occurrence lists.  Inputs beyond max_bytes are refused: evaluate
    a prefix instead.
    """
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    if len(data) > max_bytes:
        raise ValueError(
            f"input of {len(data)} bytes exceeds the oracle bound of {max_bytes}; "
            "evaluate a prefix instead"
        )
    if method == "suffixarray":
        out = _frequent_suffixarray(data, min_len)
    elif method == "bruteforce":
        if len(data) > BRUTE_BOUND:
            raise ValueError(f"brute force is limited to {BRUTE_BOUND} bytes")
        out = _frequent_bruteforce(data, min_len)
    else:
        raise ValueError(f"unknown oracle method {method!r}")
    out.sort(key=lambda p: (-len(p.text), p.occurrences[0]))
    return out


def is_inclusive(p: FrequentPattern, q: FrequentPattern) -> bool:
    """True iff every occurrence of q lies inside some occurrence of p.

    Only the rightmost p-start at or before each q-start can contain it, so
    one binary search per occurrence decides.
    """
    starts = np.asarray(p.occurrences, dtype=np.int64)
    lp, lq = len(p.text), len(q.text)
    for qs in q.occurrences:
        i = int(np.searchsorted(starts, qs, side="right")) - 1
        if i < 0 or int(starts[i]) + lp < qs + lq:
            return False
    return True


def top_k_non_inclusive(
    patterns: Sequence[FrequentPattern], k: int
) -> list[FrequentPattern]:
    """Longest-first selection of patterns with no inclusivity either way.

    Walks candidates by decreasing length (ties by first occurrence) and
    keeps one unless it is inclusive of, or included by, a pattern already
    kept; stops after k survivors.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ordered = sorted(patterns, key=lambda p: (-len(p.text), p.occurrences[0]))
    kept: list[FrequentPattern] = []
    for cand in ordered:
        if len(kept) >= k:
            break
        if any(is_inclusive(kp, cand) or is_inclusive(cand, kp) for kp in kept):
            continue
        kept.append(cand)
    return kept


class ParseTreeIndex:
    """Occurrence starts of every variable in one parse tree.

    Materializes the full tree once (its node count is the input length, not
    the grammar size), then answers positional queries by binary search.
    """

    def __init__(self, store: RuleStore, root: int):
        store._check_symbol(root)
        self.store = store
        self.root = root
        self.total = store.length_of(root)
        self._starts: dict[int, np.ndarray] = {}
        if root < store.sigma:
            return
        left, right, lengths = store.as_arrays()
        nodes = self.total - 1  # strictly binary tree over `total` leaves
        out_sym = np.empty(nodes, dtype=np.int64)
        out_start = np.empty(nodes, dtype=np.int64)
        depth = int(store.heights().max()) + 2
        st_sym = np.empty(depth, dtype=np.int64)
        st_start = np.empty(depth, dtype=np.int64)
        cnt = int(
            _kernel.tree_starts(
                left, right, lengths, store.sigma, root,
                out_sym, out_start, st_sym, st_start,
            )
        )
        if cnt != nodes:
            raise AssertionError(f"tree walk found {cnt} nodes, expected {nodes}")
        order = np.lexsort((out_start, out_sym))
        syms = out_sym[order]
        starts = out_start[order]
        cuts = np.flatnonzero(np.diff(syms)) + 1
        for chunk in np.split(np.arange(syms.size), cuts):
            self._starts[int(syms[chunk[0]])] = starts[chunk]

    def occurrence_starts(self, sym: int) -> np.ndarray:
        """Sorted 0-based starts of sym's tree occurrences (empty if none)."""
        return self._starts.get(sym, np.zeros(0, dtype=np.int64))

    def tree_frequency(self, sym: int) -> int:
        return int(self.occurrence_starts(sym).size)


def verify_core(index: ParseTreeIndex, sym: int, pattern: FrequentPattern) -> bool:
    """True iff every occurrence of the pattern contains a sym-labeled node.

    Containment is positional: some tree node labeled sym derives an interval
    inside [occurrence, occurrence + |P| - 1].  Symbols that never occur in
    the tree are rejected as a usage error, not reported as False.
    """
    if sym < index.store.sigma:
        raise ValueError(f"symbol {sym} is a terminal, not a grammar variable")
    starts = index._starts.get(sym)
    if starts is None:
        raise ValueError(f"symbol {sym} does not occur in the parse tree")
    length = index.store.length_of(sym)
    lp = len(pattern.text)
    if length > lp:
        return False
    for occ in pattern.occurrences:
        lo = occ - 1
        hi = lo + lp - length
        i = int(np.searchsorted(starts, lo, side="left"))
        if i == starts.size or int(starts[i]) > hi:
            return False
    return True


def best_core(
    index: ParseTreeIndex,
    cores: Iterable[CoreEvent | int],
    pattern: FrequentPattern,
) -> CoverReport:
    """Longest reported core verifying for the pattern; ratio 0 when none."""
    syms = {c.symbol if isinstance(c, CoreEvent) else int(c) for c in cores}
    ranked = sorted(syms, key=index.store.length_of, reverse=True)
    lp = len(pattern.text)
    for sym in ranked:
        if index.store.length_of(sym) > lp:
            continue
        if verify_core(index, sym, pattern):
            length = index.store.length_of(sym)
            return CoverReport(pattern, sym, length, length / lp)
    return CoverReport(pattern, None, 0, 0.0)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def report_table(reports: Sequence[CoverReport]) -> str:
    """TSV report: one row per pattern plus min/max/mean summaries.

    The summary block carries two readings: 'independent' rows aggregate each
    column on its own; 'aligned' min/max rows show the full row of the
    pattern with the shortest/longest text.
    """
    if not reports:
        return "no frequent patterns\n"
    lines = ["pattern_rank\tpattern_len\tpattern_freq\tcore_id\tcore_len\tratio_percent"]
    for rank, r in enumerate(reports, 1):
        core = r.core if r.core is not None else "-"
        lines.append(
            f"{rank}\t{len(r.pattern.text)}\t{r.pattern.freq}\t{core}"
            f"\t{r.core_length}\t{_fmt(100.0 * r.ratio)}"
        )
    plen = np.array([len(r.pattern.text) for r in reports], dtype=np.float64)
    clen = np.array([r.core_length for r in reports], dtype=np.float64)
    ratio = np.array([100.0 * r.ratio for r in reports], dtype=np.float64)
    lines.append("")
    lines.append("summary\tmetric\tpattern_len\tcore_len\tratio_percent")
    for name, f in (("min", np.min), ("max", np.max), ("mean", np.mean)):
        lines.append(
            f"independent\t{name}\t{_fmt(float(f(plen)))}"
            f"\t{_fmt(float(f(clen)))}\t{_fmt(float(f(ratio)))}"
        )
    for name, idx in (("min", int(np.argmin(plen))), ("max", int(np.argmax(plen)))):
        lines.append(
            f"aligned\t{name}\t{_fmt(float(plen[idx]))}"
            f"\t{_fmt(float(clen[idx]))}\t{_fmt(float(ratio[idx]))}"
        )
    return "\n".join(lines) + "\n"
