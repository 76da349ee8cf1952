"""Walsh-Hadamard and Moebius butterflies.

Every kernel exists twice: a numba loop (``*_nb``) and a vectorised numpy
version (``*_np``). The public names at the bottom pick one according to
:mod:`boolfn._backend`.
"""

from __future__ import annotations

import numpy as np

from .._backend import njit, pick

# In-word Moebius masks: bit i of MASKS[s] is set iff bit s of i is set.
WORD_MASKS = np.array(
    [
        0xAAAAAAAAAAAAAAAA,
        0xCCCCCCCCCCCCCCCC,
        0xF0F0F0F0F0F0F0F0,
        0xFF00FF00FF00FF00,
        0xFFFF0000FFFF0000,
        0xFFFFFFFF00000000,
    ],
    dtype=np.uint64,
)


@njit
def fwht_nb(a):
    n = a.shape[0]
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h *= 2


def fwht_np(a):
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(-1, 2, h)
        x = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = x - v[:, 1, :]
        h *= 2


@njit
def moebius_nb(a):
    n = a.shape[0]
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                a[j + h] ^= a[j]
        h *= 2


def moebius_np(a):
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(-1, 2, h)
        v[:, 1, :] ^= v[:, 0, :]
        h *= 2


@njit
def walsh_nb(t):
    out = np.empty(t.shape[0], dtype=np.int32)
    for i in range(t.shape[0]):
        out[i] = 1 - 2 * np.int32(t[i])
    fwht_nb(out)
    return out


def walsh_np(t):
    out = 1 - 2 * t.astype(np.int32)
    fwht_np(out)
    return out


@njit
def max_abs_nb(a):
    m = 0
    for i in range(a.shape[0]):
        v = a[i]
        if v < 0:
            v = -v
        if v > m:
            m = v
    return m


def max_abs_np(a):
    return int(np.abs(a).max())


@njit
def moebius_packed_nb(words, n):
    """Moebius transform of a bit-packed table (bit i of the table is bit
    ``i & 63`` of ``words[i >> 6]``)."""
    inword = n if n < 6 else 6
    for w in range(words.shape[0]):
        x = words[w]
        for s in range(inword):
            x ^= (x << np.uint64(1 << s)) & WORD_MASKS[s]
        words[w] = x
    h = 1
    nw = words.shape[0]
    while h < nw:
        for i in range(0, nw, 2 * h):
            for j in range(i, i + h):
                words[j + h] ^= words[j]
        h *= 2


def moebius_packed_np(words, n):
    inword = min(n, 6)
    for s in range(inword):
        words ^= (words << np.uint64(1 << s)) & WORD_MASKS[s]
    h = 1
    nw = words.shape[0]
    while h < nw:
        v = words.reshape(-1, 2, h)
        v[:, 1, :] ^= v[:, 0, :]
        h *= 2


# Large tables: split the index as (high, low) with a 14-bit low part, so the
# first pass fits int16 (|values| <= 2**14) and the matrix costs 2 bytes/entry.
_LOW_BITS = 14
_COL_BLOCK = 64


@njit
def walsh_max_abs_packed_nb(words, n):
    n1 = n if n < _LOW_BITS else _LOW_BITS
    cols = 1 << n1
    rows = 1 << (n - n1)
    mat = np.empty((rows, cols), dtype=np.int16)
    buf = np.empty(cols, dtype=np.int32)
    for r in range(rows):
        base = r * cols
        for c in range(cols):
            i = base + c
            bit = (words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1)
            buf[c] = 1 - 2 * np.int32(bit)
        fwht_nb(buf)
        for c in range(cols):
            mat[r, c] = buf[c]
    best = 0
    blk = _COL_BLOCK if cols >= _COL_BLOCK else cols
    tmp = np.empty((rows, blk), dtype=np.int32)
    for c0 in range(0, cols, blk):
        for r in range(rows):
            for c in range(blk):
                tmp[r, c] = mat[r, c0 + c]
        h = 1
        while h < rows:
            for i in range(0, rows, 2 * h):
                for j in range(i, i + h):
                    for c in range(blk):
                        x = tmp[j, c]
                        y = tmp[j + h, c]
                        tmp[j, c] = x + y
                        tmp[j + h, c] = x - y
            h *= 2
        for r in range(rows):
            for c in range(blk):
                v = tmp[r, c]
                if v < 0:
                    v = -v
                if v > best:
                    best = v
    return best


def walsh_max_abs_packed_np(words, n):
    n1 = min(n, _LOW_BITS)
    cols = 1 << n1
    rows = 1 << (n - n1)
    bytes_ = words.view(np.uint8)
    mat = np.empty((rows, cols), dtype=np.int16)
    row_bytes = max(cols // 8, 1)
    for r in range(rows):
        chunk = bytes_[r * row_bytes : (r + 1) * row_bytes]
        bits = np.unpackbits(chunk, bitorder="little")[:cols]
        buf = 1 - 2 * bits.astype(np.int32)
        fwht_np(buf)
        mat[r] = buf
    best = 0
    blk = min(cols, 4096)
    for c0 in range(0, cols, blk):
        tmp = mat[:, c0 : c0 + blk].astype(np.int32)
        h = 1
        while h < rows:
            v = tmp.reshape(-1, 2, h, blk)
            x = v[:, 0].copy()
            v[:, 0] += v[:, 1]
            v[:, 1] = x - v[:, 1]
            h *= 2
        best = max(best, int(np.abs(tmp).max()))
    return best


fwht = pick(fwht_nb, fwht_np)
moebius = pick(moebius_nb, moebius_np)
walsh = pick(walsh_nb, walsh_np)
max_abs = pick(max_abs_nb, max_abs_np)
moebius_packed = pick(moebius_packed_nb, moebius_packed_np)
walsh_max_abs_packed = pick(walsh_max_abs_packed_nb, walsh_max_abs_packed_np)
