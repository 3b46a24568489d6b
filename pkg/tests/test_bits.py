from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from espmine.bits import (
    BitVector,
    pack_bits,
    pack_uints,
    unpack_bits,
    unpack_uints,
    width_for,
)


def test_width_for():
    assert width_for(1) == 0
    assert width_for(2) == 1
    assert width_for(256) == 8
    assert width_for(257) == 9
    with pytest.raises(ValueError):
        width_for(0)


def test_pack_bits_lsb_first():
    # bit i sits at byte i//8, position i%8
    assert pack_bits(np.array([1, 0, 0, 0, 0, 0, 0, 0, 1])) == b"\x01\x01"
    assert pack_bits(np.array([0, 1, 1])) == b"\x06"


@given(st.lists(st.integers(0, 1), min_size=0, max_size=200))
def test_pack_unpack_bits_round_trip(bits):
    arr = np.array(bits, dtype=np.uint8)
    assert np.array_equal(unpack_bits(pack_bits(arr), len(bits)), arr)


def test_unpack_bits_underflow():
    with pytest.raises(ValueError):
        unpack_bits(b"\x00", 9)


@given(st.integers(1, 64), st.lists(st.integers(0, 2**64 - 1), max_size=100))
@settings(max_examples=200)
def test_pack_unpack_uints_round_trip(width, vals):
    vals = [v & ((1 << width) - 1) if width < 64 else v for v in vals]
    arr = np.array(vals, dtype=np.uint64)
    out = unpack_uints(pack_uints(arr, width), len(vals), width)
    assert np.array_equal(out, arr)


def test_pack_uints_width_zero():
    assert pack_uints(np.zeros(5, dtype=np.uint64), 0) == b""
    assert np.array_equal(unpack_uints(b"", 5, 0), np.zeros(5, dtype=np.uint64))
    with pytest.raises(ValueError):
        pack_uints(np.array([1], dtype=np.uint64), 0)


def test_pack_uints_overflow_rejected():
    with pytest.raises(ValueError):
        pack_uints(np.array([4], dtype=np.uint64), 2)


def test_bitvector_example():
    # skeleton of the two-rule grammar: 0 0 1 0 1 1
    bv = BitVector(np.array([0, 0, 1, 0, 1, 1]))
    assert len(bv) == 6
    assert bv.rank(4, 1) == 1
    assert bv.rank(4, 0) == 3
    assert bv.select(3, 0) == 4
    assert bv.select(1, 1) == 3
    assert bv.count(1) == 3
    assert bv.access(3) == 1


def test_bitvector_bounds():
    bv = BitVector(np.array([1, 0]))
    assert bv.rank(0) == 0
    with pytest.raises(ValueError):
        bv.rank(3)
    with pytest.raises(ValueError):
        bv.select(2, 1)
    with pytest.raises(ValueError):
        bv.access(0)
    with pytest.raises(ValueError):
        BitVector(np.array([0, 2]))


@given(st.lists(st.integers(0, 1), min_size=1, max_size=300))
@settings(max_examples=200)
def test_bitvector_rank_select_inverse(bits):
    bv = BitVector(np.array(bits, dtype=np.uint8))
    for b in (0, 1):
        for j in range(1, bv.count(b) + 1):
            pos = bv.select(j, b)
            assert bv.access(pos) == b
            assert bv.rank(pos, b) == j
            assert bv.rank(pos - 1, b) == j - 1
