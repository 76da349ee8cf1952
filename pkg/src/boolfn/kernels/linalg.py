"""Bit-packed GF(2) elimination.

Matrices are ``uint64`` arrays of shape ``(rows, words)``; column ``c`` is bit
``c & 63`` of word ``c >> 6``. Both kernels modify the matrix in place and
pivot on the first row (in index order) holding the current column, which
keeps the result deterministic.
"""

from __future__ import annotations

import numpy as np

from .._backend import njit, pick

_ONE = np.uint64(1)


@njit
def rank_profile_nb(m, ncols, group_ends):
    """Forward elimination over columns ``0..ncols-1``.

    Returns ``ranks`` with ``ranks[g]`` the rank of the column prefix
    ``[0, group_ends[g])``. Stops early once every row holds a pivot.
    """
    nrows, nwords = m.shape
    ngroups = group_ends.shape[0]
    ranks = np.full(ngroups, -1, dtype=np.int64)
    rank = 0
    g = 0
    while g < ngroups and group_ends[g] == 0:
        ranks[g] = 0
        g += 1
    for c in range(ncols):
        if rank == nrows:
            break
        w = c >> 6
        b = _ONE << np.uint64(c & 63)
        piv = -1
        for r in range(rank, nrows):
            if m[r, w] & b:
                piv = r
                break
        if piv >= 0:
            if piv != rank:
                for k in range(w, nwords):
                    tmp = m[rank, k]
                    m[rank, k] = m[piv, k]
                    m[piv, k] = tmp
            for r in range(piv + 1, nrows):
                if m[r, w] & b:
                    for k in range(w, nwords):
                        m[r, k] ^= m[rank, k]
            rank += 1
        while g < ngroups and group_ends[g] == c + 1:
            ranks[g] = rank
            g += 1
    while g < ngroups:
        ranks[g] = rank
        g += 1
    return ranks


def rank_profile_np(m, ncols, group_ends):
    nrows = m.shape[0]
    ngroups = len(group_ends)
    ranks = np.full(ngroups, -1, dtype=np.int64)
    rank = 0
    g = 0
    while g < ngroups and group_ends[g] == 0:
        ranks[g] = 0
        g += 1
    for c in range(ncols):
        if rank == nrows:
            break
        w = c >> 6
        b = np.uint64(c & 63)
        hits = np.flatnonzero((m[rank:, w] >> b) & _ONE)
        if hits.size:
            piv = rank + hits[0]
            if piv != rank:
                m[[rank, piv], w:] = m[[piv, rank], w:]
            below = rank + hits[1:]
            if below.size:
                m[below, w:] ^= m[rank, w:]
            rank += 1
        while g < ngroups and group_ends[g] == c + 1:
            ranks[g] = rank
            g += 1
    while g < ngroups:
        ranks[g] = rank
        g += 1
    return ranks


@njit
def nullspace_vector_nb(m, ncols):
    """Gauss-Jordan reduction; returns a non-zero kernel vector (uint8 of
    length ``ncols``) built from the first free column, or an empty array
    when the columns are independent."""
    nrows, nwords = m.shape
    pivcol = np.full(nrows, -1, dtype=np.int64)
    rank = 0
    free = -1
    for c in range(ncols):
        w = c >> 6
        b = _ONE << np.uint64(c & 63)
        piv = -1
        if rank < nrows:
            for r in range(rank, nrows):
                if m[r, w] & b:
                    piv = r
                    break
        if piv < 0:
            free = c
            break
        if piv != rank:
            for k in range(nwords):
                tmp = m[rank, k]
                m[rank, k] = m[piv, k]
                m[piv, k] = tmp
        for r in range(nrows):
            if r != rank and (m[r, w] & b):
                for k in range(w, nwords):
                    m[r, k] ^= m[rank, k]
        pivcol[rank] = c
        rank += 1
    if free < 0:
        return np.zeros(0, dtype=np.uint8)
    vec = np.zeros(ncols, dtype=np.uint8)
    vec[free] = 1
    w = free >> 6
    b = _ONE << np.uint64(free & 63)
    for r in range(rank):
        if m[r, w] & b:
            vec[pivcol[r]] = 1
    return vec


def nullspace_vector_np(m, ncols):
    nrows = m.shape[0]
    pivcol = []
    rank = 0
    free = -1
    for c in range(ncols):
        w = c >> 6
        b = np.uint64(c & 63)
        hits = np.flatnonzero((m[rank:, w] >> b) & _ONE) if rank < nrows else []
        if len(hits) == 0:
            free = c
            break
        piv = rank + hits[0]
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        others = np.flatnonzero((m[:, w] >> b) & _ONE)
        others = others[others != rank]
        if others.size:
            m[others, w:] ^= m[rank, w:]
        pivcol.append(c)
        rank += 1
    if free < 0:
        return np.zeros(0, dtype=np.uint8)
    vec = np.zeros(ncols, dtype=np.uint8)
    vec[free] = 1
    w = free >> 6
    b = np.uint64(free & 63)
    for r in range(rank):
        if (m[r, w] >> b) & _ONE:
            vec[pivcol[r]] = 1
    return vec


rank_profile = pick(rank_profile_nb, rank_profile_np)
nullspace_vector = pick(nullspace_vector_nb, nullspace_vector_np)
