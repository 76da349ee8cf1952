"""Matrix builders feeding the GF(2) elimination kernels."""

from __future__ import annotations

import numpy as np

from .._backend import njit, pick
from .transforms import WORD_MASKS, moebius_np, moebius_packed_nb

_ONE = np.uint64(1)


def n_words(ncols: int) -> int:
    return max(1, (ncols + 63) >> 6)


@njit
def fill_reduced_nb(rows, cols, wt, cpar, k):
    m = np.zeros((rows.shape[0], n_words_nb(cols.shape[0])), dtype=np.uint64)
    for r in range(rows.shape[0]):
        x = rows[r]
        wx = wt[x]
        for c in range(cols.shape[0]):
            z = cols[c]
            if (z & ~x) == 0:
                wz = wt[z]
                if cpar[wx - wz, k - wz]:
                    m[r, c >> 6] |= _ONE << np.uint64(c & 63)
    return m


@njit
def n_words_nb(ncols):
    w = (ncols + 63) >> 6
    return w if w > 0 else 1


def _pack_rows(bits):
    """Pack a (rows, cols) 0/1 array into uint64 words, little-endian bits."""
    nrows, ncols = bits.shape
    nw = n_words(ncols)
    padded = np.zeros((nrows, nw * 64), dtype=np.uint8)
    padded[:, :ncols] = bits
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).reshape(nrows, nw)


def fill_reduced_np(rows, cols, wt, cpar, k):
    nw = n_words(cols.shape[0])
    m = np.zeros((rows.shape[0], nw), dtype=np.uint64)
    wz = wt[cols]
    step = 2048
    for r0 in range(0, rows.shape[0], step):
        xs = rows[r0 : r0 + step]
        sub = (cols[None, :] & ~xs[:, None]) == 0
        par = cpar[wt[xs][:, None] - wz[None, :], k - wz[None, :]].astype(bool)
        m[r0 : r0 + step] = _pack_rows((sub & par).astype(np.uint8))
    return m


@njit
def fill_subset_nb(rows, cols):
    m = np.zeros((rows.shape[0], n_words_nb(cols.shape[0])), dtype=np.uint64)
    for r in range(rows.shape[0]):
        x = rows[r]
        for c in range(cols.shape[0]):
            if (cols[c] & ~x) == 0:
                m[r, c >> 6] |= _ONE << np.uint64(c & 63)
    return m


def fill_subset_np(rows, cols):
    nw = n_words(cols.shape[0])
    m = np.zeros((rows.shape[0], nw), dtype=np.uint64)
    step = 2048
    for r0 in range(0, rows.shape[0], step):
        xs = rows[r0 : r0 + step]
        m[r0 : r0 + step] = _pack_rows(((cols[None, :] & ~xs[:, None]) == 0).astype(np.uint8))
    return m


@njit
def _low_mask_nb(g):
    mask = ~np.uint64(0)
    for j in range(6):
        if (g >> j) & 1:
            mask &= WORD_MASKS[j]
    return mask


@njit
def fill_faa_nb(fwords, n, gammas, col_order):
    """Row ``i`` holds the ANF of ``X^gammas[i] * f`` read in ``col_order``."""
    nw_tab = fwords.shape[0]
    ncols = col_order.shape[0]
    m = np.zeros((gammas.shape[0], n_words_nb(ncols)), dtype=np.uint64)
    buf = np.empty(nw_tab, dtype=np.uint64)
    for i in range(gammas.shape[0]):
        g = gammas[i]
        hi = g >> 6
        lo = _low_mask_nb(g & 63)
        for w in range(nw_tab):
            if (w & hi) == hi:
                buf[w] = fwords[w] & lo
            else:
                buf[w] = 0
        moebius_packed_nb(buf, n)
        for p in range(ncols):
            b = col_order[p]
            if (buf[b >> 6] >> np.uint64(b & 63)) & _ONE:
                m[i, p >> 6] |= _ONE << np.uint64(p & 63)
    return m


def fill_faa_np(fwords, n, gammas, col_order):
    size = 1 << n
    bits = np.unpackbits(fwords.view(np.uint8), bitorder="little")[:size]
    idx = np.arange(size, dtype=np.int64)
    ncols = col_order.shape[0]
    m = np.zeros((gammas.shape[0], n_words(ncols)), dtype=np.uint64)
    for i, g in enumerate(gammas):
        prod = bits & ((idx & g) == g)
        moebius_np(prod)
        m[i] = _pack_rows(prod[col_order][None, :])[0]
    return m


fill_reduced = pick(fill_reduced_nb, fill_reduced_np)
fill_subset = pick(fill_subset_nb, fill_subset_np)
fill_faa = pick(fill_faa_nb, fill_faa_np)
