"""Single-pass grammar construction over a symbol stream.

The Compressor builds exactly the parse tree of the offline rounds, but online:
each level keeps only a bounded ring of pending symbols, so memory is
proportional to the grammar plus the level stack, never the input.  Whenever a
variable is produced for the second time it is reported as a core event; by
construction the derived string of such a variable is a substring occurring at
least twice in the input seen so far.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernel
from .esp import DEFAULT_CONFIG, ReductionConfig
from .grammar import RuleStore

_RULE_CAP0 = 1 << 12
_HASH_CAP0 = 1 << 13
_EVENT_CAP = 1 << 13
_FLUSH_MARGIN = 1 << 11


@dataclass(frozen=True)
class CoreEvent:
    """A variable seen to repeat: emitted on its second production.

    offset is the number of input symbols consumed when the repetition was
    detected; length is the size of the substring the variable derives.
    """

    symbol: int
    length: int
    offset: int


class Compressor:
    """Incremental parser; push symbols, then finalize() to get the root.

    alpha is the hash-table load factor ceiling.  on_core, when given, is
    called with each CoreEvent shortly after detection (at chunk boundaries
    and at finalize, not per symbol).
    """

    def __init__(
        self,
        sigma: int = 256,
        config: Optional[ReductionConfig] = None,
        alpha: float = 0.8,
        on_core: Optional[Callable[[CoreEvent], None]] = None,
    ):
        if sigma < 1:
            raise ValueError("alphabet size must be at least 1")
        if not 0.0 < alpha < 1.0:
            raise ValueError("load factor must be in (0, 1)")
        cfg = config if config is not None else DEFAULT_CONFIG
        self.sigma = sigma
        self.config = cfg
        self.alpha = alpha
        self.on_core = on_core

        itr = cfg.iterations
        if _kernel.CAP < itr + 3 + 2:
            raise ValueError("ring capacity too small for this configuration")
        self._itr = itr
        lm, cap = _kernel.L_MAX, _kernel.CAP
        self._q_sym = np.zeros((lm, cap), dtype=np.int64)
        self._q_ib = np.zeros((lm, cap), dtype=np.int64)
        self._q_plab = np.zeros((lm, cap), dtype=np.int64)
        self._q_depth = np.zeros((lm, cap), dtype=np.int64)
        self._q_lab = np.zeros((lm, cap, itr), dtype=np.int64)
        self._q_head = np.zeros(lm, dtype=np.int64)
        self._q_len = np.zeros(lm, dtype=np.int64)
        self._q_count = np.zeros(lm, dtype=np.int64)
        self._tlab = np.full(sigma, -1, dtype=np.int64)
        self._plab = np.full(_RULE_CAP0, -1, dtype=np.int64)
        self._lvl_rank = np.zeros(lm + 1, dtype=np.int64)
        self._rl = np.zeros(_RULE_CAP0, dtype=np.int64)
        self._rr = np.zeros(_RULE_CAP0, dtype=np.int64)
        self._rlen = np.zeros(_RULE_CAP0, dtype=np.int64)
        self._fb = np.zeros(_RULE_CAP0, dtype=np.uint8)
        self._hkl = np.full(_HASH_CAP0, -1, dtype=np.int64)
        self._hkr = np.full(_HASH_CAP0, -1, dtype=np.int64)
        self._hval = np.full(_HASH_CAP0, -1, dtype=np.int64)
        self._ev_var = np.zeros(_EVENT_CAP, dtype=np.int64)
        self._ev_len = np.zeros(_EVENT_CAP, dtype=np.int64)
        self._ev_off = np.zeros(_EVENT_CAP, dtype=np.int64)
        self._meta = np.zeros(8, dtype=np.int64)
        self._meta[_kernel.M_HT_LIMIT] = int(alpha * _HASH_CAP0)

        self._ev_chunks: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        self._root: Optional[int] = None
        self._finished = False
        self._store: Optional[RuleStore] = None

    # -- state views ------------------------------------------------------

    @property
    def offset(self) -> int:
        """Input symbols consumed so far."""
        return int(self._meta[_kernel.M_OFFSET])

    @property
    def n_rules(self) -> int:
        return int(self._meta[_kernel.M_NVARS])

    @property
    def finished(self) -> bool:
        return self._finished

    @property
    def root(self) -> Optional[int]:
        if not self._finished:
            raise ValueError("root exists only after finalize()")
        return self._root

    def level_lengths(self) -> list[int]:
        """Pending symbols per level, bottom up to the highest touched."""
        top = int(self._meta[_kernel.M_TOP])
        return [int(self._q_len[k]) for k in range(top + 1)]

    def rule_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(left, right, length) copies for the rules created so far."""
        n = self.n_rules
        return self._rl[:n].copy(), self._rr[:n].copy(), self._rlen[:n].copy()

    def store(self) -> RuleStore:
        """Rules as a RuleStore; cached once the stream is finalized."""
        if self._store is not None:
            return self._store
        left, right, _ = self.rule_arrays()
        store = RuleStore.from_arrays(self.sigma, left, right)
        if self._finished:
            self._store = store
        return store

    # -- feeding ----------------------------------------------------------

    def push(self, symbol: int) -> None:
        if not 0 <= symbol < self.sigma:
            raise ValueError(f"symbol {symbol} outside alphabet of {self.sigma}")
        self.push_array(np.array([symbol], dtype=np.int64))

    def push_bytes(self, data: bytes) -> None:
        if self.sigma > 256:
            raise ValueError("byte input needs sigma <= 256")
        arr = np.frombuffer(data, dtype=np.uint8)
        if self.sigma < 256 and arr.size and int(arr.max()) >= self.sigma:
            raise ValueError(f"byte outside alphabet of {self.sigma}")
        self.push_array(arr)

    def push_array(self, data: np.ndarray) -> None:
        if self._finished:
            raise RuntimeError("stream already finalized")
        if data.ndim != 1:
            raise ValueError("expected a flat array")
        if data.dtype != np.uint8:
            data = np.ascontiguousarray(data, dtype=np.int64)
            if data.size and (int(data.min()) < 0 or int(data.max()) >= self.sigma):
                raise ValueError(f"symbol outside alphabet of {self.sigma}")
        pos = 0
        while pos < data.size:
            pos = int(_kernel.push_chunk(data, pos, *self._args()))
            self._service()

    def _args(self):
        return (
            self._q_sym, self._q_ib, self._q_plab, self._q_depth, self._q_lab,
            self._q_head, self._q_len, self._q_count,
            self._tlab, self._plab, self._lvl_rank,
            self._rl, self._rr, self._rlen, self._fb,
            self._hkl, self._hkr, self._hval,
            self._ev_var, self._ev_len, self._ev_off,
            self._meta, self.sigma, self._itr,
        )

    def _service(self, margin: int = 2 * _kernel.MARGIN) -> None:
        self._drain_events()
        meta = self._meta
        if meta[_kernel.M_NVARS] + margin >= self._rl.size:
            grow = self._rl.size
            self._rl = np.concatenate((self._rl, np.zeros(grow, np.int64)))
            self._rr = np.concatenate((self._rr, np.zeros(grow, np.int64)))
            self._rlen = np.concatenate((self._rlen, np.zeros(grow, np.int64)))
            self._fb = np.concatenate((self._fb, np.zeros(grow, np.uint8)))
            self._plab = np.concatenate((self._plab, np.full(grow, -1, np.int64)))
        if meta[_kernel.M_HT_COUNT] + margin >= meta[_kernel.M_HT_LIMIT]:
            cap = self._hkl.size * 2
            nkl = np.full(cap, -1, dtype=np.int64)
            nkr = np.full(cap, -1, dtype=np.int64)
            nval = np.full(cap, -1, dtype=np.int64)
            _kernel.rehash(self._hkl, self._hkr, self._hval, nkl, nkr, nval)
            self._hkl, self._hkr, self._hval = nkl, nkr, nval
            meta[_kernel.M_HT_LIMIT] = int(self.alpha * cap)

    def _drain_events(self) -> None:
        cnt = int(self._meta[_kernel.M_NEV])
        if cnt == 0:
            return
        chunk = (
            self._ev_var[:cnt].copy(),
            self._ev_len[:cnt].copy(),
            self._ev_off[:cnt].copy(),
        )
        self._meta[_kernel.M_NEV] = 0
        self._ev_chunks.append(chunk)
        if self.on_core is not None:
            for v, ln, off in zip(*chunk):
                self.on_core(CoreEvent(int(v), int(ln), int(off)))

    # -- results ----------------------------------------------------------

    def finalize(self) -> Optional[int]:
        """Drain all levels; returns the root symbol, or None for no input."""
        if self._finished:
            return self._root
        self._service(margin=_FLUSH_MARGIN)
        root = int(_kernel.flush(*self._args()))
        if root == -2:
            raise RuntimeError("level stack overflow")
        self._drain_events()
        self._finished = True
        self._root = None if root == -1 else root
        return self._root

    def event_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All core events so far as (symbol, length, offset) arrays."""
        self._drain_events()
        if not self._ev_chunks:
            z = np.zeros(0, dtype=np.int64)
            return z, z.copy(), z.copy()
        return tuple(np.concatenate(parts) for parts in zip(*self._ev_chunks))

    def events(self) -> list[CoreEvent]:
        var, ln, off = self.event_arrays()
        return [
            CoreEvent(int(v), int(l), int(o)) for v, l, o in zip(var, ln, off)
        ]


def compress_bytes(
    data: bytes, sigma: int = 256, **kwargs
) -> tuple[RuleStore, Optional[int], list[CoreEvent]]:
    """One-shot compression; returns (rules, root, core events)."""
    comp = Compressor(sigma=sigma, **kwargs)
    comp.push_bytes(data)
    root = comp.finalize()
    return comp.store(), root, comp.events()
