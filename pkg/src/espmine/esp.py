"""Edit-sensitive parsing of symbol strings.

A level string is cut into segments (maximal repetitions and repetition-free
runs), each segment is parsed into blocks of two or three symbols, and every
block becomes one grammar variable.  Long repetition-free runs are blocked by
alphabet reduction plus landmarks so that equal substrings are parsed almost
identically regardless of their surroundings; this module is the offline
reference implementation that the streaming compressor is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

# A sink receives one production request (left, right) and returns the symbol
# standing for that block, interning duplicates (see RuleStore.request).
Sink = Callable[[int, int], int]

TYPE1 = "type1"  # maximal repetition, possibly with absorbed flanking symbols
TYPE2 = "type2"  # long repetition-free run, parsed via landmarks
TYPE3 = "type3"  # short repetition-free run, parsed left-aligned


def iter_log(n: int) -> int:
    """Iterated logarithm: least i such that lg applied i times to n is <= 1."""
    if n < 1:
        raise ValueError("iter_log is defined for n >= 1")
    i, t = 1, 2
    while n > t:
        t = 2**t
        i += 1
    return i


class ReductionConfig:
    """Fixed parsing parameters.

    The symbol universe bound is pinned in advance (not per input) so that the
    number of alphabet-reduction iterations never depends on the string being
    parsed; otherwise equal substrings could be blocked differently.
    """

    def __init__(self, symbol_universe: int = 2**64 - 1):
        if symbol_universe < 2:
            raise ValueError("symbol universe must be at least 2")
        self.symbol_universe = symbol_universe
        self.iterations = iter_log(symbol_universe)
        # Decision window of the streaming queues.
        self.window = max(5, self.iterations)
        # Repetition-free runs at least this long get landmark treatment.
        self.type2_threshold = 2 * self.iterations

    def __repr__(self) -> str:
        return f"ReductionConfig(symbol_universe={self.symbol_universe})"


DEFAULT_CONFIG = ReductionConfig()


@dataclass(frozen=True)
class LabelSeq:
    """Alphabet-reduction labels aligned with the input; None where undefined.

    After k reduction passes the first k positions are undefined, so
    values[i] is meaningful only for i >= defined_from.
    """

    values: tuple[Optional[int], ...]
    defined_from: int

    def defined(self, i: int) -> bool:
        return self.values[i] is not None


def reduce_once(v: Sequence[Optional[int]]) -> list[Optional[int]]:
    """One alphabet-reduction pass.

    out[i] = 2p + bit(p, v[i]) where p is the position of the lowest set bit
    of v[i] XOR v[i-1] (bit 0 = least significant).  Undefined at i = 0 and
    wherever an input label is undefined.  Adjacent equal defined labels are a
    precondition violation: reduction only applies to repetition-free input.
    """
    out: list[Optional[int]] = [None] * len(v)
    for i in range(1, len(v)):
        a, b = v[i - 1], v[i]
        if a is None or b is None:
            continue
        if a == b:
            raise ValueError(f"equal adjacent labels at position {i}")
        x = a ^ b
        p = (x & -x).bit_length() - 1
        out[i] = 2 * p + ((b >> p) & 1)
    return out


def reduce_full(v: Sequence[int], cfg: ReductionConfig = DEFAULT_CONFIG) -> LabelSeq:
    """Iterate reduce_once cfg.iterations times.

    The result alphabet is {0..5} and stays repetition-free on the defined
    range, which begins at index cfg.iterations.
    """
    labels: list[Optional[int]] = list(v)
    for _ in range(cfg.iterations):
        labels = reduce_once(labels)
    return LabelSeq(tuple(labels), cfg.iterations)


def first_occurrence_ranks(s: Sequence[int]) -> list[int]:
    """Relabel symbols by first occurrence: the j-th distinct symbol becomes j.

    Alphabet reduction runs on these level-local ranks rather than on raw
    symbol ids.  Ranks depend only on the repetition pattern of the level
    string, never on the numbers a sink hands out, so a builder that creates
    rules round-by-round and one that interleaves levels block the string
    identically.  Injectivity is all reduction needs.
    """
    seen: dict[int, int] = {}
    out = []
    for x in s:
        r = seen.get(x)
        if r is None:
            r = len(seen)
            seen[x] = r
        out.append(r)
    return out


def find_landmarks(labels: LabelSeq) -> list[int]:
    """Positions whose label is a strict local maximum among defined labels.

    Landmarks are never adjacent, and any 12 consecutive defined positions
    contain at least one (the label alphabet has only 6 values).
    """
    vals = labels.values
    out = []
    for i in range(1, len(vals) - 1):
        a, m, b = vals[i - 1], vals[i], vals[i + 1]
        if a is None or m is None or b is None:
            continue
        if m > a and m > b:
            out.append(i)
    return out


@dataclass(frozen=True)
class Segment:
    """One parsing unit of a level string; start/end are 1-based inclusive."""

    kind: str
    start: int
    end: int

    def __len__(self) -> int:
        return self.end - self.start + 1


def segment(s: Sequence[int], cfg: ReductionConfig = DEFAULT_CONFIG) -> list[Segment]:
    """Split a level string into type1/2/3 segments.

    Maximal repetitions (length >= 2) are type1.  A repetition-free run of
    length 1 cannot stand alone: it joins the repetition on its left, or the
    one on its right when it is a string prefix.  Surviving repetition-free
    runs are type2 when their length reaches cfg.type2_threshold, else type3.
    With |s| > 2 every segment therefore has length >= 2.
    """
    n = len(s)
    if n < 2:
        raise ValueError("segmentation needs at least two symbols")

    runs: list[tuple[int, int, bool]] = []  # (start, end, is_repetition), 0-based
    free_start: Optional[int] = None
    i = 0
    while i < n:
        j = i
        while j + 1 < n and s[j + 1] == s[i]:
            j += 1
        if j > i:
            if free_start is not None:
                runs.append((free_start, i - 1, False))
                free_start = None
            runs.append((i, j, True))
        elif free_start is None:
            free_start = i
        i = j + 1
    if free_start is not None:
        runs.append((free_start, n - 1, False))

    segs: list[list] = []  # mutable [start, end, kind]
    lead: Optional[int] = None  # length-1 free prefix waiting for the first repetition
    for a, b, is_rep in runs:
        if is_rep:
            segs.append([a if lead is None else lead, b, TYPE1])
            lead = None
        elif b == a:
            if segs:
                segs[-1][1] = b  # absorbed into the repetition on the left
            else:
                lead = a
        else:
            kind = TYPE2 if b - a + 1 >= cfg.type2_threshold else TYPE3
            segs.append([a, b, kind])
    return [Segment(kind, a + 1, b + 1) for a, b, kind in segs]


def left_aligned_parse(v: Sequence[int], sink: Sink) -> list[int]:
    """Pair symbols left to right; an odd tail of three becomes a 2-2-tree.

    A trigram ABC produces X -> BC then Y -> AX and contributes Y.
    """
    n = len(v)
    if n < 2:
        raise ValueError("left-aligned parsing needs at least two symbols")
    out = []
    i = 0
    while n - i >= 4 or n - i == 2:
        out.append(sink(v[i], v[i + 1]))
        i += 2
    if n - i == 3:
        x = sink(v[i + 1], v[i + 2])
        out.append(sink(v[i], x))
    return out


_BIGRAM, _REGION = 0, 1


def parse_type2(
    v: Sequence[int],
    cfg: ReductionConfig,
    sink: Sink,
    labels: Optional[Sequence[int]] = None,
) -> list[int]:
    """Parse a long repetition-free run using landmarks.

    Each landmark pairs with its right neighbour into a block.  The leftover
    stretches between those blocks are parsed left-aligned; a leftover of
    length 1 joins the block on its left (turning it into a trigram), or the
    one on its right when there is no left block.

    labels are the reduction inputs for v; when the run is a slice of a
    larger level string the caller passes the matching slice of the level's
    first-occurrence ranks (ranks are prefix-dependent, so recomputing them
    on the slice alone would disagree).  Left unset, v is treated as a whole
    level string.
    """
    m = len(v)
    if m < cfg.type2_threshold:
        raise ValueError("run too short for landmark parsing")
    if labels is None:
        labels = first_occurrence_ranks(v)
    marks = find_landmarks(reduce_full(labels, cfg))

    items: list[tuple[int, int, int]] = []  # (start, end, tag), 0-based inclusive
    pos = 0
    for lm in marks:
        if lm > pos:
            items.append((pos, lm - 1, _REGION))
        items.append((lm, lm + 1, _BIGRAM))
        pos = lm + 2
    if pos < m:
        items.append((pos, m - 1, _REGION))

    blocks: list[tuple[int, int, int]] = []
    i = 0
    while i < len(items):
        a, b, tag = items[i]
        if tag == _REGION and a == b:
            if blocks:
                blocks[-1] = (blocks[-1][0], b, _BIGRAM)
            else:
                nb = items[i + 1][1]
                blocks.append((a, nb, _BIGRAM))
                i += 1
        else:
            blocks.append((a, b, tag))
        i += 1

    out = []
    for a, b, tag in blocks:
        if tag == _REGION:
            out.extend(left_aligned_parse(v[a : b + 1], sink))
        elif b - a == 1:
            out.append(sink(v[a], v[b]))
        else:
            x = sink(v[a + 1], v[a + 2])
            out.append(sink(v[a], x))
    return out


def esp_round(s: Sequence[int], cfg: ReductionConfig, sink: Sink) -> list[int]:
    """One parsing round: segment the level string and block every segment."""
    ranks = first_occurrence_ranks(s)
    out = []
    for seg in segment(s, cfg):
        piece = s[seg.start - 1 : seg.end]
        if seg.kind == TYPE2:
            out.extend(
                parse_type2(piece, cfg, sink, labels=ranks[seg.start - 1 : seg.end])
            )
        else:
            out.extend(left_aligned_parse(piece, sink))
    return out


def build_offline(
    data: Sequence[int], sink: Sink, cfg: ReductionConfig = DEFAULT_CONFIG
) -> int:
    """Parse rounds until a single root symbol remains and return it.

    Every block requested from the sink is one internal node of the parse
    tree, so the sink ends up holding the full grammar of the input.
    """
    if len(data) == 0:
        raise ValueError("empty input has no parse tree")
    s: list[int] = list(data)
    while len(s) > 1:
        s = esp_round(s, cfg, sink)
    return s[0]
