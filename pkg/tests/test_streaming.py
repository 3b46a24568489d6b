"""Single-pass compressor tests.

The load-bearing property is equivalence with the offline parser: same
tree shape and same derived substring at every node, regardless of how
the input is chunked.  Signatures hash-cons derivation trees, so equal
signatures under a shared table mean isomorphic trees.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from espmine import (
    Compressor,
    CoreEvent,
    RuleStore,
    build_offline,
    compress_bytes,
    structural_signature,
)


def offline_signature(s: bytes, table: dict) -> int:
    store = RuleStore(256)
    root = build_offline(s, store.request)
    return structural_signature(store, root, table)


def streaming_signature(s: bytes, table: dict, chunks=None) -> int:
    c = Compressor()
    if chunks is None:
        c.push_bytes(s)
    else:
        for part in chunks:
            c.push_bytes(part)
    root = c.finalize()
    return structural_signature(c.store(), root, table)


def test_matches_offline_on_small_strings():
    table: dict = {}
    for s in (b"a", b"ab", b"abab", b"aaaa", b"abcde", bytes(range(256)) * 3):
        assert streaming_signature(s, table) == offline_signature(s, table)


@given(st.binary(min_size=1, max_size=800))
@settings(max_examples=300, deadline=None)
def test_matches_offline_fuzz(s):
    table: dict = {}
    assert streaming_signature(s, table) == offline_signature(s, table)


@given(st.integers(1, 3), st.integers(1, 1200), st.integers(0, 2**31))
@settings(max_examples=200, deadline=None)
def test_matches_offline_small_alphabet(sigma, n, seed):
    rng = np.random.default_rng(seed)
    s = rng.integers(0, sigma, size=n, dtype=np.uint8).tobytes()
    table: dict = {}
    assert streaming_signature(s, table) == offline_signature(s, table)


@given(st.binary(min_size=2, max_size=600), st.integers(0, 2**31))
@settings(max_examples=200, deadline=None)
def test_chunking_is_invisible(s, seed):
    rng = np.random.default_rng(seed)
    cuts = sorted(rng.integers(0, len(s) + 1, size=3).tolist())
    parts = [s[a:b] for a, b in zip([0] + cuts, cuts + [len(s)])]
    table: dict = {}
    assert streaming_signature(s, table) == streaming_signature(s, table, parts)


def test_round_trip():
    rng = np.random.default_rng(5)
    s = rng.integers(0, 256, size=50_000, dtype=np.uint8).tobytes()
    store, root, _ = compress_bytes(s)
    assert store.expand_bytes(root) == s


def test_empty_input():
    c = Compressor()
    assert c.finalize() is None
    assert c.store().n == 0
    assert c.events() == []


def test_single_byte():
    store, root, events = compress_bytes(b"q")
    assert root == ord("q")
    assert store.n == 0
    assert events == []


def test_core_event_on_second_production():
    store, root, events = compress_bytes(b"abab")
    assert events == [CoreEvent(symbol=256, length=2, offset=4)]
    assert store.rule(256) == (ord("a"), ord("b"))


def test_no_events_without_repeats():
    _, _, events = compress_bytes(b"abcd")
    assert events == []


def test_event_offsets_non_decreasing():
    rng = np.random.default_rng(11)
    s = rng.integers(0, 4, size=20_000, dtype=np.uint8).tobytes()
    _, _, events = compress_bytes(s)
    assert events, "a 4-letter 20k string must repeat something"
    offsets = [e.offset for e in events]
    assert offsets == sorted(offsets)
    assert offsets[-1] <= len(s)
    # an event fires for a variable's second production, never its first
    assert len({e.symbol for e in events}) == len(events)


def test_on_core_callback_streams():
    seen: list[CoreEvent] = []
    c = Compressor(on_core=seen.append)
    c.push_bytes(b"abab" * 50)
    c.finalize()
    assert seen == c.events()
    # the "ab" variable repeats first; its event cannot fire before its
    # second production has streamed past (4 bytes) plus bounded lookahead
    assert seen[0].symbol == 256 and seen[0].length == 2
    assert 4 <= seen[0].offset <= 16


def test_push_after_finalize_rejected():
    c = Compressor()
    c.push_bytes(b"xy")
    c.finalize()
    with pytest.raises(RuntimeError):
        c.push_bytes(b"z")


def test_finalize_idempotent():
    c = Compressor()
    c.push_bytes(b"hello world")
    r1 = c.finalize()
    r2 = c.finalize()
    assert r1 == r2


def test_constructor_validation():
    with pytest.raises(ValueError):
        Compressor(alpha=0.0)
    with pytest.raises(ValueError):
        Compressor(alpha=1.0)
    with pytest.raises(ValueError):
        Compressor(sigma=0)


def test_push_range_check():
    c = Compressor(sigma=4)
    with pytest.raises(ValueError):
        c.push_array(np.array([0, 4], dtype=np.int64))


def test_growth_under_pressure():
    # enough distinct material to force rule-array growth and rehashes
    rng = np.random.default_rng(3)
    s = rng.integers(0, 256, size=300_000, dtype=np.uint8).tobytes()
    store, root, _ = compress_bytes(s)
    assert store.n > 100_000
    assert store.expand_bytes(root) == s
