"""Bit packing helpers and a static rank/select bit sequence.

All packing is LSB-first: bit i of the sequence lives in byte i // 8 at bit
position i % 8.  Fixed-width integer arrays are packed the same way, value
bits from least to most significant.
"""

from __future__ import annotations

import numpy as np


def pack_bits(bits: np.ndarray) -> bytes:
    """Pack a 0/1 array into bytes, LSB-first, zero-padded to a byte boundary."""
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little").tobytes()


def unpack_bits(data: bytes, count: int) -> np.ndarray:
    """Inverse of pack_bits; count is the number of valid bits."""
    if count > len(data) * 8:
        raise ValueError(f"need {count} bits but buffer holds {len(data) * 8}")
    arr = np.frombuffer(data, dtype=np.uint8)
    return np.unpackbits(arr, bitorder="little")[:count]


def width_for(values_below: int) -> int:
    """Bits needed to store any value in [0, values_below); 0 when trivial."""
    if values_below < 1:
        raise ValueError("domain must be non-empty")
    return (values_below - 1).bit_length()


def pack_uints(values: np.ndarray, width: int) -> bytes:
    """Pack unsigned integers at a fixed bit width, LSB-first."""
    vals = np.asarray(values, dtype=np.uint64)
    if width == 0:
        if vals.size and vals.max() > 0:
            raise ValueError("width 0 cannot encode nonzero values")
        return b""
    if width > 64:
        raise ValueError("width exceeds 64 bits")
    if vals.size and width < 64 and vals.max() >> np.uint64(width):
        raise ValueError(f"value does not fit in {width} bits")
    shifts = np.arange(width, dtype=np.uint64)
    bits = ((vals[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return pack_bits(bits.reshape(-1))


def unpack_uints(data: bytes, count: int, width: int) -> np.ndarray:
    """Inverse of pack_uints; returns uint64 values."""
    if width == 0:
        return np.zeros(count, dtype=np.uint64)
    bits = unpack_bits(data, count * width).reshape(count, width).astype(np.uint64)
    shifts = np.arange(width, dtype=np.uint64)
    return (bits << shifts).sum(axis=1, dtype=np.uint64)


class BitVector:
    """Static bit sequence answering rank and select, 1-based.

    rank(i, b) counts occurrences of bit b in positions 1..i and accepts
    0 <= i <= len; select(j, b) returns the position of the j-th occurrence.
    Plain prefix-sum storage: simplicity over succinctness.
    """

    def __init__(self, bits: np.ndarray):
        b = np.asarray(bits, dtype=np.uint8)
        if b.ndim != 1 or (b.size and b.max() > 1):
            raise ValueError("expected a flat array of 0/1")
        self._bits = b
        self._ones = np.cumsum(b, dtype=np.int64)
        self._zeros = None  # built on first select(_, 0)

    def __len__(self) -> int:
        return int(self._bits.size)

    def access(self, i: int) -> int:
        if not 1 <= i <= len(self):
            raise ValueError(f"position {i} out of range 1..{len(self)}")
        return int(self._bits[i - 1])

    def rank(self, i: int, bit: int = 1) -> int:
        if not 0 <= i <= len(self):
            raise ValueError(f"position {i} out of range 0..{len(self)}")
        ones = int(self._ones[i - 1]) if i else 0
        return ones if bit else i - ones

    def count(self, bit: int = 1) -> int:
        return self.rank(len(self), bit)

    def select(self, j: int, bit: int = 1) -> int:
        if not 1 <= j <= self.count(bit):
            raise ValueError(f"occurrence {j} out of range: only {self.count(bit)}")
        if bit:
            return int(np.searchsorted(self._ones, j, side="left")) + 1
        if self._zeros is None:
            self._zeros = np.arange(1, len(self) + 1, dtype=np.int64) - self._ones
        return int(np.searchsorted(self._zeros, j, side="left")) + 1
