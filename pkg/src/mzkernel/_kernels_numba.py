"""Compiled kernels for the subset scan and the definitional oracle.

Imported only when the numba backend is active, so the package works
without numba installed.  Every kernel releases the GIL and caches its
compilation on disk.  Each has a numpy/python twin elsewhere; the pair
must stay observationally identical.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def gray_zero_scan(cols, negcols, mods, start, end, hit_buf):
    """Scan subset masks gray(i) for i in [start, end).

    cols/negcols: (lanes, t) int64 column residues and their negations;
    mods: per-lane moduli.  Returns (hit_count, best_key, best_mask,
    buffered) where key = (popcount << t) | (all_ones - bitrev(mask))
    realizes the smallest-size-then-lexicographic witness order; up to
    hit_buf.size hit masks are stored in visit order.
    """
    lanes, t = cols.shape
    run = np.zeros(lanes, dtype=np.int64)
    mask = start ^ (start >> 1)
    for b in range(t):
        if (mask >> b) & 1:
            for ln in range(lanes):
                v = run[ln] + cols[ln, b]
                if v >= mods[ln]:
                    v -= mods[ln]
                run[ln] = v
    count = 0
    best_key = np.int64(0x7FFFFFFFFFFFFFFF)
    best_mask = np.int64(-1)
    buffered = 0
    all_ones = (np.int64(1) << t) - 1
    i = start
    while True:
        if mask != 0:
            hit = True
            for ln in range(lanes):
                if run[ln] != 0:
                    hit = False
                    break
            if hit:
                count += 1
                pc = np.int64(0)
                rev = np.int64(0)
                for b in range(t):
                    if (mask >> b) & 1:
                        pc += 1
                        rev |= np.int64(1) << (t - 1 - b)
                key = (pc << t) | (all_ones - rev)
                if key < best_key:
                    best_key = key
                    best_mask = mask
                if buffered < hit_buf.shape[0]:
                    hit_buf[buffered] = mask
                    buffered += 1
        i += 1
        if i >= end:
            break
        b = 0
        v = i
        while v & 1 == 0:
            v >>= 1
            b += 1
        mask ^= np.int64(1) << b
        if (mask >> b) & 1:
            for ln in range(lanes):
                w = run[ln] + cols[ln, b]
                if w >= mods[ln]:
                    w -= mods[ln]
                run[ln] = w
        else:
            for ln in range(lanes):
                w = run[ln] + negcols[ln, b]
                if w >= mods[ln]:
                    w -= mods[ln]
                run[ln] = w
    return count, best_key, best_mask, buffered


@njit(cache=True, nogil=True, inline="always")
def _mul_encode(x_idx, u_digits, digits, gp, add_tab, mul_tab, qpows, buf):
    """Encoded index of (element x_idx) * (fixed element with u_digits)."""
    n = buf.shape[0]
    for j in range(n):
        buf[j] = 0
    for j in range(n):
        c = digits[x_idx, j]
        if c != 0:
            for k in range(n):
                d = u_digits[k]
                if d != 0:
                    tgt = gp[j, k]
                    buf[tgt] = add_tab[buf[tgt], mul_tab[c, d]]
    enc = np.int64(0)
    for j in range(n):
        enc += buf[j] * qpows[j]
    return enc


@njit(cache=True, nogil=True)
def oracle_power_walk(start, stop, inker, gp, add_tab, mul_tab, qpows,
                      digits, is_root, pre, per):
    """Classify elements [start, stop) of K[G].

    For each u in the kernel, walks u, u^2, ... with Brent cycle
    detection, recording whether every power stays in the kernel
    (is_root), the least preperiod s >= 1 and least period c >= 1 with
    u^(s+c) = u^s.  Elements outside the kernel get zeros.
    """
    n = digits.shape[1]
    buf = np.zeros(n, dtype=np.int32)
    u_digits = np.zeros(n, dtype=np.int32)
    for u in range(start, stop):
        if inker[u] == 0:
            is_root[u] = 0
            pre[u] = 0
            per[u] = 0
            continue
        for j in range(n):
            u_digits[j] = digits[u, j]
        all_in = True
        # Brent: find the minimal period lam of m -> u^(m+1) from u^1
        power_limit = np.int64(1)
        lam = np.int64(0)
        tort = np.int64(u)
        hare = np.int64(u)
        while True:
            hare = _mul_encode(hare, u_digits, digits, gp, add_tab, mul_tab, qpows, buf)
            lam += 1
            if inker[hare] == 0:
                all_in = False
            if hare == tort:
                break
            if lam == power_limit:
                tort = hare
                power_limit <<= 1
                lam = 0
        # preperiod: walk two pointers lam apart until they meet
        p1 = np.int64(u)
        p2 = np.int64(u)
        for _ in range(lam):
            p2 = _mul_encode(p2, u_digits, digits, gp, add_tab, mul_tab, qpows, buf)
        s = np.int64(1)
        while p1 != p2:
            p1 = _mul_encode(p1, u_digits, digits, gp, add_tab, mul_tab, qpows, buf)
            p2 = _mul_encode(p2, u_digits, digits, gp, add_tab, mul_tab, qpows, buf)
            s += 1
        is_root[u] = 1 if all_in else 0
        pre[u] = s
        per[u] = lam


@njit(cache=True, nogil=True)
def oracle_escape_scan(w_digits, inker, gp, add_tab, mul_tab, qpows, digits):
    """First element index c with c*w outside the kernel, else -1."""
    n = digits.shape[1]
    buf = np.zeros(n, dtype=np.int32)
    ncand = digits.shape[0]
    for c in range(ncand):
        enc = _mul_encode(c, w_digits, digits, gp, add_tab, mul_tab, qpows, buf)
        if inker[enc] == 0:
            return c
    return np.int64(-1)
