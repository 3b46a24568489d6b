"""Grammar storage and the post-order succinct serialization.

Symbols are dense integers: terminals occupy [0, sigma), variables occupy
[sigma, sigma + n) in creation order, and both children of a rule always have
smaller ids than the rule itself.  The serialized form is a post-order
traversal of the pruned parse tree: a skeleton bitvector B (0 = leaf,
1 = internal, final 1 = super-root) plus the leaf label array L, where the
k-th internal node in post-order is variable sigma + k and each repeated or
terminal occurrence is a leaf.  A grammar with n rules always has
|B| = 2n + 2 and |L| = n + 1.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .bits import pack_bits, pack_uints, unpack_bits, unpack_uints, width_for

# Root id stored in the empty serialization; also the printed sentinel.
EMPTY_ROOT = 2**64 - 1

_MAGIC = b"POSLP1\n\x00"


class PoslpFormatError(ValueError):
    """Raised when serialized grammar bytes are malformed or inconsistent."""


class RuleStore:
    """Append-only set of binary rules with interning.

    request(left, right) returns the existing variable for that pair or
    creates a new one; it is the sink handed to the parsers.
    """

    def __init__(self, sigma: int = 256):
        if sigma < 1:
            raise ValueError("alphabet size must be at least 1")
        self.sigma = sigma
        self._left: list[int] = []
        self._right: list[int] = []
        self._length: list[int] = []
        self._index: dict[tuple[int, int], int] = {}

    @property
    def n(self) -> int:
        """Number of variables."""
        return len(self._left)

    def __len__(self) -> int:
        return self.n

    def is_terminal(self, sym: int) -> bool:
        return 0 <= sym < self.sigma

    def _check_symbol(self, sym: int) -> None:
        if not 0 <= sym < self.sigma + self.n:
            raise ValueError(f"unknown symbol {sym}")

    def intern(self, left: int, right: int) -> tuple[int, bool]:
        """Return (variable, created) for the pair, adding a rule if new."""
        self._check_symbol(left)
        self._check_symbol(right)
        key = (left, right)
        hit = self._index.get(key)
        if hit is not None:
            return hit, False
        sym = self.sigma + self.n
        self._left.append(left)
        self._right.append(right)
        self._length.append(self.length_of(left) + self.length_of(right))
        self._index[key] = sym
        return sym, True

    def request(self, left: int, right: int) -> int:
        return self.intern(left, right)[0]

    def rule(self, sym: int) -> tuple[int, int]:
        self._check_symbol(sym)
        if sym < self.sigma:
            raise ValueError(f"symbol {sym} is a terminal")
        return self._left[sym - self.sigma], self._right[sym - self.sigma]

    def length_of(self, sym: int) -> int:
        """Length of the string the symbol derives."""
        self._check_symbol(sym)
        return 1 if sym < self.sigma else self._length[sym - self.sigma]

    def height_of(self, sym: int) -> int:
        self._check_symbol(sym)
        if sym < self.sigma:
            return 0
        heights = self.heights()
        return int(heights[sym - self.sigma])

    def heights(self) -> np.ndarray:
        """Parse-tree height of every variable (terminals count as height 0)."""
        h = np.zeros(self.n, dtype=np.int64)
        s = self.sigma
        for k in range(self.n):
            l, r = self._left[k], self._right[k]
            hl = 0 if l < s else h[l - s]
            hr = 0 if r < s else h[r - s]
            h[k] = 1 + max(hl, hr)
        return h

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(left, right, length) as int64 arrays, indexed by variable rank."""
        return (
            np.asarray(self._left, dtype=np.int64),
            np.asarray(self._right, dtype=np.int64),
            np.asarray(self._length, dtype=np.int64),
        )

    @classmethod
    def from_arrays(
        cls, sigma: int, left: np.ndarray, right: np.ndarray
    ) -> "RuleStore":
        store = cls(sigma)
        for l, r in zip(left, right):
            sym, created = store.intern(int(l), int(r))
            if not created:
                raise ValueError(f"duplicate rule for pair ({l}, {r})")
        return store

    def expand(self, sym: int) -> Iterator[int]:
        """Yield the terminals the symbol derives, left to right.

        Iterative left-spine descent: memory is bounded by the tree height,
        never by the derived length.
        """
        self._check_symbol(sym)
        stack = [sym]
        while stack:
            cur = stack.pop()
            while cur >= self.sigma:
                l, r = self.rule(cur)
                stack.append(r)
                cur = l
            yield cur

    def expand_bytes(self, sym: int) -> bytes:
        """Derived string as bytes; requires a byte alphabet (sigma <= 256)."""
        if self.sigma > 256:
            raise ValueError("byte expansion needs sigma <= 256")
        return b"".join(self.iter_chunks(sym))

    def iter_chunks(self, sym: int, chunk_size: int = 1 << 20) -> Iterator[bytes]:
        """Stream the derived string as byte chunks without materializing it."""
        if self.sigma > 256:
            raise ValueError("byte expansion needs sigma <= 256")
        self._check_symbol(sym)
        from . import _kernel

        left, right, _ = self.as_arrays()
        height = int(self.heights().max()) if self.n else 0
        stack = np.zeros(height + 2, dtype=np.int64)
        stack[0] = sym
        sp = np.ones(1, dtype=np.int64)
        out = np.empty(chunk_size, dtype=np.uint8)
        while sp[0] > 0:
            written = _kernel.expand_chunk(left, right, self.sigma, stack, sp, out)
            yield out[:written].tobytes()


@dataclass(eq=False)
class Poslp:
    """Post-order succinct form of a grammar: skeleton bits plus leaf labels.

    root is the post-order id of the start symbol, or EMPTY_ROOT for the
    grammar of the empty string (which has no tree at all).
    """

    sigma: int
    bits: np.ndarray  # uint8 0/1, length 2n + 2 (0 for the empty grammar)
    labels: np.ndarray  # uint64, length n + 1 (0 for the empty grammar)
    root: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poslp):
            return NotImplemented
        return (
            self.sigma == other.sigma
            and self.root == other.root
            and np.array_equal(self.bits, other.bits)
            and np.array_equal(self.labels, other.labels)
        )

    @property
    def n(self) -> int:
        return int(self.bits.sum()) - 1 if self.bits.size else 0

    @property
    def is_empty(self) -> bool:
        return self.root == EMPTY_ROOT

    @classmethod
    def empty(cls, sigma: int) -> "Poslp":
        return cls(
            sigma,
            np.zeros(0, dtype=np.uint8),
            np.zeros(0, dtype=np.uint64),
            EMPTY_ROOT,
        )


def to_poslp(store: RuleStore, root: Optional[int]) -> Poslp:
    """Serialize the tree below root into post-order succinct form.

    Only rules reachable from root are emitted, renumbered by post-order of
    their first occurrence; later occurrences become leaves labelled with the
    already-assigned id.  root=None encodes the empty string.
    """
    if root is None:
        return Poslp.empty(store.sigma)
    store._check_symbol(root)
    sigma = store.sigma
    bits: list[int] = []
    labels: list[int] = []
    order: dict[int, int] = {}  # original variable id -> post-order id
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        sym, done = stack.pop()
        if done:
            order[sym] = sigma + len(order)
            bits.append(1)
            continue
        if sym < sigma:
            bits.append(0)
            labels.append(sym)
            continue
        seen = order.get(sym)
        if seen is not None:
            bits.append(0)
            labels.append(seen)
            continue
        l, r = store.rule(sym)
        stack.append((sym, True))
        stack.append((r, False))
        stack.append((l, False))
    bits.append(1)  # super-root on top of the start symbol

    n = len(order)
    assert len(bits) == 2 * n + 2 and len(labels) == n + 1
    new_root = order[root] if root >= sigma else root
    return Poslp(
        sigma,
        np.asarray(bits, dtype=np.uint8),
        np.asarray(labels, dtype=np.uint64),
        new_root,
    )


def from_poslp(p: Poslp) -> tuple[RuleStore, Optional[int]]:
    """Rebuild a RuleStore from post-order succinct form.

    Replays the traversal with a stack: a 0-bit pushes its leaf label, a
    1-bit pops right then left and creates that rule.  Rejects malformed
    input: stack underflow, forward references, duplicate rules, or a root
    that is not the last rule created.
    """
    store = RuleStore(p.sigma)
    if p.is_empty:
        if p.bits.size or p.labels.size:
            raise PoslpFormatError("empty grammar with non-empty tree data")
        return store, None
    if p.bits.size < 2 or p.bits[-1] != 1:
        raise PoslpFormatError("skeleton must end with the super-root bit")

    sigma = p.sigma
    stack: list[int] = []
    li = 0
    for off in range(p.bits.size - 1):
        if p.bits[off] == 0:
            if li >= p.labels.size:
                raise PoslpFormatError(f"missing label for leaf at bit {off}")
            lab = int(p.labels[li])
            li += 1
            if lab >= sigma + store.n:
                raise PoslpFormatError(f"forward reference {lab} at bit {off}")
            stack.append(lab)
        else:
            if len(stack) < 2:
                raise PoslpFormatError(f"internal node at bit {off} lacks children")
            r = stack.pop()
            l = stack.pop()
            sym, created = store.intern(l, r)
            if not created:
                raise PoslpFormatError(f"duplicate rule for ({l}, {r}) at bit {off}")
            stack.append(sym)

    if li != p.labels.size:
        raise PoslpFormatError(f"{p.labels.size - li} unused labels")
    if len(stack) != 1:
        raise PoslpFormatError(f"traversal leaves {len(stack)} roots")
    root = stack[0]
    if root != p.root:
        raise PoslpFormatError(f"declared root {p.root} but tree ends at {root}")
    return store, root


def serialize(p: Poslp) -> bytes:
    """Encode to bytes.

    Layout: magic, then little-endian u64 fields sigma, n, root, |B| in bits,
    the packed skeleton, a u64 label count, and the labels packed at fixed
    width ceil(lg(n + sigma)) bits each, everything LSB-first.
    """
    n = p.n
    head = struct.pack("<8sQQQQ", _MAGIC, p.sigma, n, p.root, p.bits.size)
    body = pack_bits(p.bits)
    width = width_for(n + p.sigma)
    tail = struct.pack("<Q", p.labels.size) + pack_uints(p.labels, width)
    return head + body + tail


def deserialize(data: bytes) -> Poslp:
    """Decode serialize() output, validating structure before trusting it."""
    if len(data) < 40:
        raise PoslpFormatError(f"header needs 40 bytes, got {len(data)}")
    magic, sigma, n, root, nbits = struct.unpack_from("<8sQQQQ", data, 0)
    if magic != _MAGIC:
        raise PoslpFormatError("bad magic")
    if sigma < 1:
        raise PoslpFormatError("alphabet size must be at least 1")
    off = 40

    if root == EMPTY_ROOT:
        if n != 0 or nbits != 0:
            raise PoslpFormatError("empty grammar must have n = 0 and no bits")
    elif nbits != 2 * n + 2:
        raise PoslpFormatError(f"skeleton of {nbits} bits does not match n = {n}")

    bbytes = (nbits + 7) // 8
    if len(data) < off + bbytes + 8:
        raise PoslpFormatError("truncated skeleton")
    bits = unpack_bits(data[off : off + bbytes], nbits)
    off += bbytes

    (nlabels,) = struct.unpack_from("<Q", data, off)
    off += 8
    expect_labels = 0 if root == EMPTY_ROOT else n + 1
    if nlabels != expect_labels:
        raise PoslpFormatError(f"expected {expect_labels} labels, found {nlabels}")
    width = width_for(n + sigma)
    lbytes = (nlabels * width + 7) // 8
    if len(data) != off + lbytes:
        raise PoslpFormatError(f"expected {off + lbytes} bytes total, got {len(data)}")
    labels = unpack_uints(data[off:], nlabels, width)

    if root != EMPTY_ROOT:
        if n > 0 and root != sigma + n - 1:
            raise PoslpFormatError(f"root {root} is not the last rule")
        if n == 0 and root >= sigma:
            raise PoslpFormatError(f"terminal root {root} outside alphabet")
        if labels.size and int(labels.max()) >= sigma + n:
            raise PoslpFormatError("label out of range")
    return Poslp(int(sigma), bits, labels, int(root))


def structural_signature(store: RuleStore, root: int, table: Optional[dict] = None) -> int:
    """Hash-cons the derivation tree below root into a canonical id.

    Two (store, root) pairs sharing one table get equal signatures exactly
    when their derivation trees are identical, independent of variable
    numbering or rule creation order.
    """
    if table is None:
        table = {}
    store._check_symbol(root)
    if root < store.sigma:
        return -(root + 1)
    sigma = store.sigma
    sig = np.empty(store.n, dtype=np.int64)
    for k in range(store.n):
        l, r = store._left[k], store._right[k]
        a = -(l + 1) if l < sigma else sig[l - sigma]
        b = -(r + 1) if r < sigma else sig[r - sigma]
        key = (int(a), int(b))
        val = table.get(key)
        if val is None:
            val = len(table)
            table[key] = val
        sig[k] = val
    return int(sig[root - sigma])
