"""Compiled inner loops for streaming parsing, expansion, and suffix arrays.

Everything here is numba-jitted and operates on preallocated numpy arrays so
the hot path never touches the Python object layer.  The streaming state is a
stack of small ring buffers, one per parse level: level k holds the symbols
of level string k that are not yet blocked.  A block decision at level k only
ever inspects a bounded window of that ring, which is what makes single-pass
parsing possible.

Capacity discipline: push_chunk returns early (with the resume index) when
rule, event, or hash-table headroom runs low; the caller grows or drains and
calls again.  flush assumes the caller reserved headroom up front.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Ring capacity per level; must be a power of two above the decision window
# (window = iterations + 3 = 8 for the default 64-bit symbol universe).
CAP = 16
MASK = CAP - 1
# Level stack bound.  Every block spans >= 2 symbols, so level strings shrink
# at least geometrically and 64 levels cover any input shorter than 2**63.
L_MAX = 64

# meta slots
M_OFFSET = 0  # input symbols consumed
M_NVARS = 1  # rules created
M_NEV = 2  # pending events
M_HT_COUNT = 3  # occupied hash slots
M_HT_LIMIT = 4  # load-factor ceiling; caller rehashes at this fill
M_TOP = 5  # highest level touched

# Margin of rules/events one input symbol may create (one block per level,
# two rules per block), doubled for safety.
MARGIN = 4 * L_MAX

_HA = 0x517CC1B727220A95
_HB = 0x2545F4914F6CDD1D


@njit(cache=True, inline="always")
def _reduce_pair(a, b):
    x = a ^ b
    p = 0
    while (x >> p) & 1 == 0:
        p += 1
    return 2 * p + ((b >> p) & 1)


@njit(cache=True, inline="always")
def _ht_get(hkl, hkr, hval, l, r):
    mask = hkl.size - 1
    j = (l * _HA + r * _HB) & mask
    while True:
        k = hkl[j]
        if k == -1:
            return np.int64(-1)
        if k == l and hkr[j] == r:
            return hval[j]
        j = (j + 1) & mask


@njit(cache=True, inline="always")
def _ht_put(hkl, hkr, hval, l, r, v):
    mask = hkl.size - 1
    j = (l * _HA + r * _HB) & mask
    while hkl[j] != -1:
        j = (j + 1) & mask
    hkl[j] = l
    hkr[j] = r
    hval[j] = v


@njit(cache=True)
def rehash(hkl, hkr, hval, nkl, nkr, nval):
    for j in range(hkl.size):
        if hkl[j] != -1:
            _ht_put(nkl, nkr, nval, hkl[j], hkr[j], hval[j])


@njit(cache=True)
def _update(l, r, rl, rr, rlen, fb, hkl, hkr, hval, ev_var, ev_len, ev_off, meta, sigma):
    """Intern the pair (l, r); emit a core event on its second production."""
    v = _ht_get(hkl, hkr, hval, l, r)
    if v >= 0:
        i = v - sigma
        if fb[i] == 0:
            fb[i] = 1
            e = meta[M_NEV]
            ev_var[e] = v
            ev_len[e] = rlen[i]
            ev_off[e] = meta[M_OFFSET]
            meta[M_NEV] = e + 1
        return v, np.int64(0)
    i = meta[M_NVARS]
    z = sigma + i
    rl[i] = l
    rr[i] = r
    ll = np.int64(1) if l < sigma else rlen[l - sigma]
    lr = np.int64(1) if r < sigma else rlen[r - sigma]
    rlen[i] = ll + lr
    fb[i] = 0
    _ht_put(hkl, hkr, hval, l, r, z)
    meta[M_HT_COUNT] += 1
    meta[M_NVARS] = i + 1
    return z, np.int64(1)


@njit(cache=True)
def _enqueue(
    k, sym, ib, q_sym, q_ib, q_plab, q_depth, q_lab, q_head, q_len, q_count,
    tlab, plab, lvl_rank, sigma, itr,
):
    """Append a symbol to level k, caching its depth and label column.

    Reduction runs on level-local first-occurrence ranks (assigned here, on a
    symbol's first appearance at its level) so the parse agrees with the
    offline rounds no matter in which global order rules were created.
    depth counts the position inside the current repetition-free run (1 at a
    run start, 0 on a repeated symbol); the label column holds the value of
    every reduction pass at this position, -1 where undefined.  Both only
    carry meaning where the block decision reads them, guarded by depth.
    """
    if sym < sigma:
        lab0 = tlab[sym]
        if lab0 == -1:
            lab0 = lvl_rank[k]
            tlab[sym] = lab0
            lvl_rank[k] = lab0 + 1
    else:
        lab0 = plab[sym - sigma]
        if lab0 == -1:
            lab0 = lvl_rank[k]
            plab[sym - sigma] = lab0
            lvl_rank[k] = lab0 + 1
    slot = (q_head[k] + q_len[k]) & MASK
    if q_count[k] == 0:
        q_depth[k, slot] = 1
        for t in range(itr):
            q_lab[k, slot, t] = -1
    else:
        back = (q_head[k] + q_len[k] - 1) & MASK
        if sym == q_sym[k, back]:
            q_depth[k, slot] = 0
        else:
            q_depth[k, slot] = q_depth[k, back] + 1
        a = q_plab[k, back]
        b = lab0
        for t in range(itr):
            if a >= 0 and b >= 0 and a != b:
                lab = _reduce_pair(a, b)
            else:
                lab = np.int64(-1)
            q_lab[k, slot, t] = lab
            a = q_lab[k, back, t]
            b = lab
    q_sym[k, slot] = sym
    q_ib[k, slot] = ib
    q_plab[k, slot] = lab0
    q_len[k] += 1
    q_count[k] += 1


@njit(cache=True)
def _decide(k, ended, q_sym, q_depth, q_lab, q_head, q_len, itr):
    """Block size (2 or 3) for the front of level k.

    The front block is a trigram exactly when position front+3 begins a new
    parsing unit: a repetition, a repetition-free run of length >= 2, a
    landmark position inside a long run, or (when ended) the end of the
    level string itself.  Everything needed is within the next window
    entries, which is why the window is iterations + 3.
    """
    n = q_len[k]
    h = q_head[k]
    if ended:
        if n == 2:
            return 2
        if n == 3:
            return 3

    s0 = q_sym[k, (h + 1) & MASK]
    s1 = q_sym[k, (h + 2) & MASK]
    s2 = q_sym[k, (h + 3) & MASK]
    s3 = q_sym[k, (h + 4) & MASK]
    s4 = q_sym[k, (h + 5) & MASK]
    ex4 = 4 < n
    ex5 = 5 < n

    # repetition starts at front+3
    if ex4 and s2 == s3 and s1 != s2:
        return 3
    # repetition-free run of length >= 2 starts at front+3
    if s0 == s1 and s2 != s1 and ex4 and not (ex5 and s3 == s4):
        return 3
    # landmark at front+3: deep enough into a run that reaches full length,
    # and its final label beats both neighbours
    dep = q_depth[k, (h + 4) & MASK]
    if ex4 and dep >= itr + 3 and not (ex5 and s3 == s4):
        need = 2 * itr - dep
        q = 4
        ok = True
        while need > 0:
            nq = q + 1
            if nq >= n:
                ok = False
                break
            if nq + 1 < n and q_sym[k, (h + nq) & MASK] == q_sym[k, (h + nq + 1) & MASK]:
                ok = False
                break
            need -= 1
            q = nq
        if ok:
            la = q_lab[k, (h + 2) & MASK, itr - 1]
            lm = q_lab[k, (h + 3) & MASK, itr - 1]
            lb = q_lab[k, (h + 4) & MASK, itr - 1]
            if lm > la and lm > lb:
                return 3
    return 2


@njit(cache=True)
def _emit(
    k, size, q_sym, q_head, q_len, rl, rr, rlen, fb, hkl, hkr, hval,
    ev_var, ev_len, ev_off, meta, sigma,
):
    """Turn the front block of level k into a variable and pop it."""
    h = q_head[k]
    a = q_sym[k, h]
    b = q_sym[k, (h + 1) & MASK]
    if size == 2:
        z, ib = _update(a, b, rl, rr, rlen, fb, hkl, hkr, hval, ev_var, ev_len, ev_off, meta, sigma)
    else:
        c = q_sym[k, (h + 2) & MASK]
        x, _ = _update(b, c, rl, rr, rlen, fb, hkl, hkr, hval, ev_var, ev_len, ev_off, meta, sigma)
        z, ib = _update(a, x, rl, rr, rlen, fb, hkl, hkr, hval, ev_var, ev_len, ev_off, meta, sigma)
    q_head[k] = (h + size) & MASK
    q_len[k] -= size
    return z, ib


@njit(cache=True)
def _cascade(
    k0, sym0, ib0, q_sym, q_ib, q_plab, q_depth, q_lab, q_head, q_len, q_count,
    tlab, plab, lvl_rank, rl, rr, rlen, fb, hkl, hkr, hval,
    ev_var, ev_len, ev_off, meta, sigma, itr,
):
    """Push one symbol onto level k0 and propagate full-window emissions up."""
    w = itr + 3
    k = k0
    sym = sym0
    ib = ib0
    while True:
        _enqueue(
            k, sym, ib, q_sym, q_ib, q_plab, q_depth, q_lab, q_head, q_len,
            q_count, tlab, plab, lvl_rank, sigma, itr,
        )
        if k > meta[M_TOP]:
            meta[M_TOP] = k
        if q_len[k] < w:
            return
        size = _decide(k, False, q_sym, q_depth, q_lab, q_head, q_len, itr)
        sym, ib = _emit(
            k, size, q_sym, q_head, q_len, rl, rr, rlen, fb, hkl, hkr, hval,
            ev_var, ev_len, ev_off, meta, sigma,
        )
        k += 1


@njit(cache=True)
def push_chunk(
    data, start, q_sym, q_ib, q_plab, q_depth, q_lab, q_head, q_len, q_count,
    tlab, plab, lvl_rank, rl, rr, rlen, fb, hkl, hkr, hval,
    ev_var, ev_len, ev_off, meta, sigma, itr,
):
    """Feed data[start:] until done or headroom runs low; return resume index."""
    for idx in range(start, data.size):
        if (
            meta[M_NVARS] + MARGIN >= rl.size
            or meta[M_NEV] + MARGIN >= ev_var.size
            or meta[M_HT_COUNT] + MARGIN >= meta[M_HT_LIMIT]
        ):
            return idx
        meta[M_OFFSET] += 1
        _cascade(
            0, np.int64(data[idx]), np.int64(1), q_sym, q_ib, q_plab, q_depth,
            q_lab, q_head, q_len, q_count, tlab, plab, lvl_rank,
            rl, rr, rlen, fb, hkl, hkr, hval, ev_var, ev_len, ev_off, meta,
            sigma, itr,
        )
    return data.size


@njit(cache=True)
def flush(
    q_sym, q_ib, q_plab, q_depth, q_lab, q_head, q_len, q_count,
    tlab, plab, lvl_rank, rl, rr, rlen, fb, hkl, hkr, hval,
    ev_var, ev_len, ev_off, meta, sigma, itr,
):
    """Drain every level bottom-up and return the root symbol (-1 if empty).

    Once level k is drained its level string is complete, so decisions run
    with exact end-of-string knowledge.  A level left with a single symbol is
    the root: nothing below remains and nothing above exists.
    """
    for k in range(L_MAX):
        if q_count[k] == 0:
            return np.int64(-1)
        while q_len[k] >= 2:
            size = _decide(k, True, q_sym, q_depth, q_lab, q_head, q_len, itr)
            z, ib = _emit(
                k, size, q_sym, q_head, q_len, rl, rr, rlen, fb, hkl, hkr, hval,
                ev_var, ev_len, ev_off, meta, sigma,
            )
            _cascade(
                k + 1, z, ib, q_sym, q_ib, q_plab, q_depth, q_lab, q_head,
                q_len, q_count, tlab, plab, lvl_rank, rl, rr, rlen, fb,
                hkl, hkr, hval, ev_var, ev_len, ev_off, meta, sigma, itr,
            )
        if q_len[k] == 1:
            return q_sym[k, q_head[k]]
    return np.int64(-2)


@njit(cache=True)
def expand_chunk(left, right, sigma, stack, sp_box, out):
    """Resumable expansion: pop-and-descend until out is full or done."""
    sp = sp_box[0]
    w = 0
    while sp > 0 and w < out.size:
        sp -= 1
        sym = stack[sp]
        while sym >= sigma:
            stack[sp] = right[sym - sigma]
            sp += 1
            sym = left[sym - sigma]
        out[w] = sym
        w += 1
    sp_box[0] = sp
    return w


@njit(cache=True)
def lcp_kasai(data, sa):
    """LCP array: lcp[i] = longest common prefix of suffixes sa[i-1], sa[i]."""
    n = sa.size
    rank = np.empty(n, np.int64)
    for i in range(n):
        rank[sa[i]] = i
    lcp = np.zeros(n, np.int64)
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and data[i + h] == data[j + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


@njit(cache=True)
def tree_starts(rl, rr, rlen, sigma, root, out_sym, out_start, st_sym, st_start):
    """Record (symbol, start) for every internal node of the parse tree."""
    if root < sigma:
        return 0
    cnt = 0
    st_sym[0] = root
    st_start[0] = 0
    sp = 1
    while sp > 0:
        sp -= 1
        sym = st_sym[sp]
        start = st_start[sp]
        out_sym[cnt] = sym
        out_start[cnt] = start
        cnt += 1
        l = rl[sym - sigma]
        r = rr[sym - sigma]
        llen = np.int64(1) if l < sigma else rlen[l - sigma]
        if r >= sigma:
            st_sym[sp] = r
            st_start[sp] = start + llen
            sp += 1
        if l >= sigma:
            st_sym[sp] = l
            st_start[sp] = start
            sp += 1
    return cnt
