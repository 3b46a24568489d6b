"""Frequent-pattern oracle and core verification tests.

Occurrence positions are 1-based throughout.  Expected sets were worked
out by hand; the suffix-array and brute-force enumerations also check
each other on fuzzed strings.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from espmine import Compressor
from espmine.patterns import (
    BRUTE_BOUND,
    CoverReport,
    FrequentPattern,
    ParseTreeIndex,
    best_core,
    exact_frequent,
    is_inclusive,
    lcp_array,
    report_table,
    suffix_array,
    top_k_non_inclusive,
    verify_core,
)


def as_pairs(pats):
    return sorted((p.text, p.occurrences) for p in pats)


def test_exact_frequent_examples():
    assert as_pairs(exact_frequent(b"abab", min_len=2)) == [(b"ab", (1, 3))]
    assert as_pairs(exact_frequent(b"aaaa", min_len=3)) == [(b"aaa", (1, 2))]
    assert exact_frequent(b"abcd", min_len=1) == []


def test_exact_frequent_right_maximality():
    # in "abaaba" every "ab" is followed by "a", so "ab" is subsumed by "aba"
    texts = {p.text for p in exact_frequent(b"abaaba", min_len=1)}
    assert b"aba" in texts
    assert b"ab" not in texts
    # occurrences include the one touching the string end
    assert as_pairs(exact_frequent(b"abaaba", min_len=3)) == [(b"aba", (1, 4))]


def test_exact_frequent_validation():
    with pytest.raises(ValueError):
        exact_frequent(b"aa", min_len=0)
    with pytest.raises(ValueError, match="prefix"):
        exact_frequent(b"x" * 100, max_bytes=10)
    with pytest.raises(ValueError):
        exact_frequent(b"x" * (BRUTE_BOUND + 1), method="bruteforce")
    with pytest.raises(ValueError):
        exact_frequent(b"aa", method="nosuch")


def test_suffix_array_small():
    sa = suffix_array(b"banana")
    # suffixes sorted: a, ana, anana, banana, na, nana
    assert sa.tolist() == [5, 3, 1, 0, 4, 2]
    lcp = lcp_array(b"banana", sa)
    assert lcp.tolist() == [0, 1, 3, 0, 0, 2]
    assert suffix_array(b"").size == 0
    assert suffix_array(b"z").tolist() == [0]


@given(st.binary(min_size=1, max_size=64))
@settings(max_examples=300)
def test_suffix_array_is_sorted_permutation(s):
    sa = suffix_array(s)
    assert sorted(sa.tolist()) == list(range(len(s)))
    suffixes = [s[i:] for i in sa]
    assert suffixes == sorted(suffixes)


@given(st.integers(1, 8), st.integers(1, 160), st.integers(0, 2**31))
@settings(max_examples=250, deadline=None)
def test_oracles_agree(sigma, n, seed):
    rng = np.random.default_rng(seed)
    s = rng.integers(0, sigma, size=n, dtype=np.uint8).tobytes()
    min_len = int(rng.integers(1, 4))
    a = exact_frequent(s, min_len=min_len, method="suffixarray")
    b = exact_frequent(s, min_len=min_len, method="bruteforce")
    assert [(p.text, p.occurrences) for p in a] == [(p.text, p.occurrences) for p in b]


def test_is_inclusive():
    p = FrequentPattern(b"aba", (1, 4))
    q = FrequentPattern(b"ab", (1, 4))
    assert is_inclusive(p, q)
    assert not is_inclusive(q, p)  # "aba" at 4 sticks out of "ab" at 4
    # an occurrence outside every p window breaks inclusivity
    r = FrequentPattern(b"ab", (1, 4, 9))
    assert not is_inclusive(p, r)


def test_top_k_non_inclusive():
    long = FrequentPattern(b"abcabc", (1, 10))
    inner = FrequentPattern(b"bca", (2, 11))  # always inside `long`
    other = FrequentPattern(b"xyz", (20, 30))
    out = top_k_non_inclusive([inner, other, long], k=10)
    assert out == [long, other]
    assert top_k_non_inclusive([inner, other, long], k=1) == [long]
    # ties in length are broken by first occurrence
    a = FrequentPattern(b"aa", (5, 9))
    b = FrequentPattern(b"bb", (2, 40))
    assert top_k_non_inclusive([a, b], k=2)[0] is b
    with pytest.raises(ValueError):
        top_k_non_inclusive([a], k=0)


def planted_setup(seed=0, size=20_000, plen=400):
    rng = np.random.default_rng(seed)
    data = rng.integers(0, 256, size, dtype=np.uint8)
    pat = rng.integers(0, 256, plen, dtype=np.uint8)
    at = [1000, 7000, 15_000]
    for pos in at:
        data[pos : pos + plen] = pat
    buf = data.tobytes()
    c = Compressor()
    c.push_bytes(buf)
    root = c.finalize()
    index = ParseTreeIndex(c.store(), root)
    pattern = FrequentPattern(pat.tobytes(), tuple(p + 1 for p in at))
    return index, c.events(), pattern


def test_parse_tree_index_shape():
    index, _, _ = planted_setup()
    root_starts = index.occurrence_starts(index.root)
    assert root_starts.tolist() == [0]
    assert index.total == 20_000
    counted = sum(index.tree_frequency(s) for s in index._starts)
    assert counted == index.total - 1  # strictly binary: one internal node per join


def test_verify_core_planted():
    index, events, pattern = planted_setup()
    report = best_core(index, events, pattern)
    assert report.core is not None
    assert verify_core(index, report.core, pattern)
    assert report.core_length == index.store.length_of(report.core)
    assert 0.01 <= report.ratio <= 1.0
    # a variable longer than the pattern can never verify
    assert not verify_core(index, index.root, pattern)


def test_verify_core_rejects_bad_symbols():
    index, _, pattern = planted_setup()
    with pytest.raises(ValueError, match="terminal"):
        verify_core(index, 65, pattern)
    with pytest.raises(ValueError, match="occur"):
        verify_core(index, 2**40, pattern)


def test_best_core_none_when_nothing_fits():
    index, _, _ = planted_setup()
    scattered = FrequentPattern(b"zz", (1, 5))  # too short for any variable
    report = best_core(index, [index.root], scattered)
    assert report.core is None
    assert report.core_length == 0
    assert report.ratio == 0.0


def test_report_table_shape():
    index, events, pattern = planted_setup()
    rep = best_core(index, events, pattern)
    text = report_table([rep])
    lines = text.strip().split("\n")
    assert lines[0] == "pattern_rank\tpattern_len\tpattern_freq\tcore_id\tcore_len\tratio_percent"
    row = lines[1].split("\t")
    assert row[0] == "1" and row[1] == "400" and row[2] == "3"
    assert lines[3] == "summary\tmetric\tpattern_len\tcore_len\tratio_percent"
    tags = [tuple(l.split("\t")[:2]) for l in lines[4:]]
    assert tags == [
        ("independent", "min"),
        ("independent", "max"),
        ("independent", "mean"),
        ("aligned", "min"),
        ("aligned", "max"),
    ]


def test_report_table_empty():
    assert report_table([]) == "no frequent patterns\n"
