"""Table construction and search inner loops.

Conventions: bit ``j - 1`` of a table index is the coordinate ``x_j``; an
r-bit window word carries its leftmost coordinate in bit 0.
"""

from __future__ import annotations

import numpy as np

from .._backend import njit, pick
from .transforms import fwht_nb, fwht_np, max_abs_nb

_ONE = np.uint64(1)

REV8 = np.array([int(f"{i:08b}"[::-1], 2) for i in range(256)], dtype=np.int64)


# ---------------------------------------------------------------- bit helpers


@njit
def popcount_nb(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def reverse_bits_nb(i, n):
    r = (
        (REV8[i & 255] << 24)
        | (REV8[(i >> 8) & 255] << 16)
        | (REV8[(i >> 16) & 255] << 8)
        | REV8[(i >> 24) & 255]
    )
    return r >> (32 - n)


def reverse_bits_np(i, n):
    i = np.asarray(i, dtype=np.int64)
    r = (
        (REV8[i & 255] << 24)
        | (REV8[(i >> 8) & 255] << 16)
        | (REV8[(i >> 16) & 255] << 8)
        | REV8[(i >> 24) & 255]
    )
    return r >> (32 - n)


@njit
def interval_bijection_nb(i, n, w0, s):
    full = (1 << n) - 1
    sh = n - s
    if i >= w0:
        k = (i - w0) >> sh
    else:
        k = (i + (1 << n) - w0) >> sh
    wk = (w0 + (k << sh)) & full
    a = (i - wk) & full
    b = (a * (2 * k + 1)) & ((1 << sh) - 1)
    return (b + wk) & full


def interval_bijection_np(i, n, w0, s):
    i = np.asarray(i, dtype=np.int64)
    full = (1 << n) - 1
    sh = n - s
    k = np.where(i >= w0, (i - w0) >> sh, (i + (1 << n) - w0) >> sh)
    wk = (w0 + (k << sh)) & full
    a = (i - wk) & full
    b = (a * (2 * k + 1)) & ((1 << sh) - 1)
    return (b + wk) & full


@njit
def phi_nb(i, n, w0, s):
    j = interval_bijection_nb(i, n, w0, s)
    j = reverse_bits_nb(j, n)
    return interval_bijection_nb(j, n, w0, s)


@njit
def hwb_word_nb(z, n, r):
    w = popcount_nb(z)
    if r % 2 == 1:
        ell = w - r // 2
    else:
        ell = w - r // 2 + 1
    q = (ell - 1) % n
    if q < 0:
        q += n
    full = (1 << n) - 1
    rot = ((z >> q) | (z << (n - q))) & full
    return rot & ((1 << r) - 1)


# -------------------------------------------------------------- table builders


@njit
def phi_table_nb(n, w0, s):
    out = np.empty(1 << n, dtype=np.int64)
    for i in range(1 << n):
        out[i] = phi_nb(i, n, w0, s)
    return out


def phi_table_np(n, w0, s):
    i = np.arange(1 << n, dtype=np.int64)
    j = interval_bijection_np(i, n, w0, s)
    j = reverse_bits_np(j, n)
    return interval_bijection_np(j, n, w0, s)


@njit
def hwb_words_nb(n, r):
    out = np.empty(1 << n, dtype=np.int64)
    for z in range(1 << n):
        out[z] = hwb_word_nb(z, n, r)
    return out


def hwb_words_np(n, r):
    z = np.arange(1 << n, dtype=np.int64)
    w = np.bitwise_count(z).astype(np.int64)
    ell = w - r // 2 if r % 2 else w - r // 2 + 1
    q = np.mod(ell - 1, n)
    full = (1 << n) - 1
    rot = ((z >> q) | (z << (n - q))) & full
    return rot & ((1 << r) - 1)


@njit
def inthwb_packed_nb(n, w0, s, lam, r):
    size = 1 << n
    words = np.zeros(max(1, size >> 6), dtype=np.uint64)
    for x in range(size):
        z = phi_nb(x, n, w0, s)
        if lam[hwb_word_nb(z, n, r)]:
            words[x >> 6] |= _ONE << np.uint64(x & 63)
    return words


def inthwb_packed_np(n, w0, s, lam, r):
    size = 1 << n
    step = 1 << min(n, 22)
    out = np.zeros(max(size, 64) // 8, dtype=np.uint8)
    full = (1 << n) - 1
    for x0 in range(0, size, step):
        x = np.arange(x0, x0 + step, dtype=np.int64)
        j = interval_bijection_np(x, n, w0, s)
        z = interval_bijection_np(reverse_bits_np(j, n), n, w0, s)
        w = np.bitwise_count(z).astype(np.int64)
        ell = w - r // 2 if r % 2 else w - r // 2 + 1
        q = np.mod(ell - 1, n)
        word = (((z >> q) | (z << (n - q))) & full) & ((1 << r) - 1)
        bits = lam[word]
        out[x0 // 8 : (x0 + step) // 8 or 1] = np.packbits(bits, bitorder="little")
    return out.view(np.uint64)


@njit
def cf_support_nb(n, tau, packed):
    """Indicator of ``{0} U {x^i mod tau : 0 <= i <= 2^(n-1) - 2}``; a
    polynomial sits at the table index equal to its coefficient integer."""
    size = 1 << n
    if packed:
        out = np.zeros(max(1, size >> 6), dtype=np.uint64)
    else:
        out = np.zeros(size, dtype=np.uint64)
    a = 1
    top = 1 << n
    idx = 0
    for i in range((1 << (n - 1)) - 1 + 1):
        if i == 0:
            idx = 0  # the zero polynomial
        else:
            idx = a
            a <<= 1
            if a & top:
                a ^= tau
        if packed:
            out[idx >> 6] |= _ONE << np.uint64(idx & 63)
        else:
            out[idx] = 1
    return out


def cf_support_np(n, tau, packed):
    size = 1 << n
    tab = np.zeros(size, dtype=np.uint8)
    tab[0] = 1
    a = 1
    top = 1 << n
    for _ in range((1 << (n - 1)) - 1):
        tab[a] = 1
        a <<= 1
        if a & top:
            a ^= tau
    if packed:
        return np.packbits(np.concatenate([tab, np.zeros((-size) % 64, np.uint8)]), bitorder="little").view(np.uint64)
    return tab.astype(np.uint64)


@njit
def gf2_inverse_nb(a, poly):
    """Inverse of ``a`` modulo an irreducible ``poly`` by the binary extended
    Euclidean algorithm; ``a = 0`` maps to 0."""
    if a == 0:
        return 0
    u = a
    v = poly
    g1 = 1
    g2 = 0
    while u != 1:
        du = 0
        t = u
        while t > 1:
            t >>= 1
            du += 1
        dv = 0
        t = v
        while t > 1:
            t >>= 1
            dv += 1
        j = du - dv
        if j < 0:
            u, v = v, u
            g1, g2 = g2, g1
            j = -j
        u ^= v << j
        g1 ^= g2 << j
    return g1


def gf2_inverse_py(a, poly):
    if a == 0:
        return 0
    u, v, g1, g2 = a, poly, 1, 0
    while u != 1:
        j = u.bit_length() - v.bit_length()
        if j < 0:
            u, v, g1, g2 = v, u, g2, g1
            j = -j
        u ^= v << j
        g1 ^= g2 << j
    return g1


@njit
def inverse_table_nb(n, poly):
    out = np.empty(1 << n, dtype=np.int64)
    for a in range(1 << n):
        out[a] = gf2_inverse_nb(a, poly)
    return out


def inverse_table_np(n, poly):
    return np.array([gf2_inverse_py(a, poly) for a in range(1 << n)], dtype=np.int64)


# ----------------------------------------------------------------- scan loops


@njit
def _measure_nb(buf, wacc, xacc, n):
    fwht_nb(buf)
    nl = (1 << (n - 1)) - max_abs_nb(buf) // 2
    if wacc & 1:
        top = n
    elif xacc != 0:
        top = n - 1
    else:
        top = -1
    return nl, top


@njit
def scan_inthwb_nb(n, s, w0s, lam, hww, rev):
    """nl and degree hint for each ``w0`` in ``w0s``.

    The hint is ``n`` (odd weight), ``n - 1`` or ``-1`` (degree below n - 1):
    for even weight, the ANF coefficients of degree n - 1 are the bits of the
    XOR of all support points.
    """
    size = 1 << n
    nls = np.empty(w0s.shape[0], dtype=np.int64)
    tops = np.empty(w0s.shape[0], dtype=np.int64)
    buf = np.empty(size, dtype=np.int32)
    for t in range(w0s.shape[0]):
        w0 = w0s[t]
        wacc = 0
        xacc = 0
        for x in range(size):
            j = interval_bijection_nb(x, n, w0, s)
            z = interval_bijection_nb(rev[j], n, w0, s)
            v = lam[hww[z]]
            if v:
                wacc += 1
                xacc ^= x
                buf[x] = -1
            else:
                buf[x] = 1
        nls[t], tops[t] = _measure_nb(buf, wacc, xacc, n)
    return nls, tops


def _measure_np(f, n):
    buf = 1 - 2 * f.astype(np.int32)
    fwht_np(buf)
    nl = (1 << (n - 1)) - int(np.abs(buf).max()) // 2
    supp = np.flatnonzero(f)
    if supp.size & 1:
        return nl, n
    acc = int(np.bitwise_xor.reduce(supp)) if supp.size else 0
    return nl, (n - 1 if acc else -1)


def scan_inthwb_np(n, s, w0s, lam, hww, rev):
    x = np.arange(1 << n, dtype=np.int64)
    nls = np.empty(len(w0s), dtype=np.int64)
    tops = np.empty(len(w0s), dtype=np.int64)
    for t, w0 in enumerate(w0s):
        j = interval_bijection_np(x, n, int(w0), s)
        z = interval_bijection_np(rev[j], n, int(w0), s)
        nls[t], tops[t] = _measure_np(lam[hww[z]], n)
    return nls, tops


@njit
def scan_lambda_nb(n, hww, lams):
    size = 1 << n
    count = lams.shape[0]
    nls = np.empty(count, dtype=np.int64)
    tops = np.empty(count, dtype=np.int64)
    buf = np.empty(size, dtype=np.int32)
    for t in range(count):
        wacc = 0
        xacc = 0
        for x in range(size):
            if lams[t, hww[x]]:
                wacc += 1
                xacc ^= x
                buf[x] = -1
            else:
                buf[x] = 1
        nls[t], tops[t] = _measure_nb(buf, wacc, xacc, n)
    return nls, tops


def scan_lambda_np(n, hww, lams):
    nls = np.empty(lams.shape[0], dtype=np.int64)
    tops = np.empty(lams.shape[0], dtype=np.int64)
    for t in range(lams.shape[0]):
        nls[t], tops[t] = _measure_np(lams[t][hww], n)
    return nls, tops


# ------------------------------------------------- balanced 5-variable stream


@njit
def next_same_popcount_nb(v):
    t = v | (v - 1)
    return (t + 1) | (((~t & -~t) - 1) >> (_ctz_nb(v) + 1))


@njit
def _ctz_nb(v):
    c = 0
    while (v & 1) == 0:
        v >>= 1
        c += 1
    return c


@njit
def balanced_chunk_nb(start, count, nbits):
    """``count`` integers with popcount ``nbits/2`` in increasing order,
    starting at ``start``. Returns (values, next_start) with next_start = -1
    once the last value has been emitted."""
    last = ((1 << (nbits // 2)) - 1) << (nbits // 2)
    out = np.empty(count, dtype=np.int64)
    v = start
    k = 0
    while k < count:
        out[k] = v
        k += 1
        if v == last:
            return out[:k], -1
        v = next_same_popcount_nb(v)
    return out, v


def balanced_chunk_np(start, count, nbits):
    last = ((1 << (nbits // 2)) - 1) << (nbits // 2)
    out = []
    v = start
    while len(out) < count:
        out.append(v)
        if v == last:
            return np.array(out, dtype=np.int64), -1
        t = v | (v - 1)
        ctz = (v & -v).bit_length() - 1
        v = (t + 1) | (((~t & -~t) - 1) >> (ctz + 1))
    return np.array(out, dtype=np.int64), v


@njit
def _walsh4_nb():
    """Walsh spectra, weights and degree-3 ANF parts of every 4-variable
    function (index = 16-bit truth table, bit i = f(i))."""
    spec = np.empty((65536, 16), dtype=np.int64)
    wt = np.empty(65536, dtype=np.int64)
    d3 = np.empty(65536, dtype=np.int64)
    buf = np.empty(16, dtype=np.int64)
    anf = np.empty(16, dtype=np.int64)
    for g in range(65536):
        c = 0
        for i in range(16):
            b = (g >> i) & 1
            c += b
            buf[i] = 1 - 2 * b
            anf[i] = b
        fwht_nb(buf)
        h = 1
        while h < 16:
            for i in range(0, 16, 2 * h):
                for j in range(i, i + h):
                    anf[j + h] ^= anf[j]
            h *= 2
        spec[g, :] = buf
        wt[g] = c
        d3[g] = anf[7] | (anf[11] << 1) | (anf[13] << 2) | (anf[14] << 3)
    return spec, wt, d3


@njit
def deg4_nl12_pairs_nb(balanced_only):
    """Split a 5-variable function as f = (f0 on x_5 = 0, f1 on x_5 = 1).

    Then W_f(a, a5) = W_f0(a) + (-1)^a5 W_f1(a), so max|W_f| <= 8 iff
    |W_f0(a)| + |W_f1(a)| <= 8 for every a; the degree-4 ANF coefficients are
    parity(wt f0) and d3(f0) ^ d3(f1), the degree-5 one is parity(wt f).
    """
    spec, wt, d3 = _walsh4_nb()
    absmax = np.empty(65536, dtype=np.int64)
    for g in range(65536):
        m = 0
        for a in range(16):
            v = abs(spec[g, a])
            if v > m:
                m = v
        absmax[g] = m
    cands = np.empty(65536, dtype=np.int64)
    nc = 0
    for g in range(65536):
        if absmax[g] <= 8:
            cands[nc] = g
            nc += 1
    cands = cands[:nc]
    # group candidates by weight so only compatible weights are paired
    order = np.argsort(wt[cands], kind="mergesort")
    cands = cands[order]
    starts = np.zeros(18, dtype=np.int64)
    for i in range(nc):
        starts[wt[cands[i]] + 1] += 1
    for w in range(1, 18):
        starts[w] += starts[w - 1]
    total = 0
    out = np.empty(0, dtype=np.int64)
    for phase in range(2):
        if phase == 1:
            out = np.empty(total, dtype=np.int64)
        k = 0
        for ia in range(nc):
            f0 = cands[ia]
            w0 = wt[f0]
            for w1 in range(17):
                if balanced_only:
                    if w0 + w1 != 16:
                        continue
                elif (w0 + w1) & 1:
                    continue
                for ib in range(starts[w1], starts[w1 + 1]):
                    f1 = cands[ib]
                    if not ((w0 & 1) or d3[f0] != d3[f1]):
                        continue
                    ok = True
                    for a in range(16):
                        if abs(spec[f0, a]) + abs(spec[f1, a]) > 8:
                            ok = False
                            break
                    if ok:
                        if phase == 1:
                            out[k] = f0 | (f1 << 16)
                        k += 1
        total = k
    return out


def deg4_nl12_pairs_np(balanced_only):
    g = np.arange(65536, dtype=np.int64)
    bits = ((g[:, None] >> np.arange(16)) & 1).astype(np.uint8)
    spec = 1 - 2 * bits.astype(np.int64)
    h = 1
    while h < 16:
        v = spec.reshape(65536, -1, 2, h)
        x = v[:, :, 0, :].copy()
        v[:, :, 0, :] += v[:, :, 1, :]
        v[:, :, 1, :] = x - v[:, :, 1, :]
        h *= 2
    anf = bits.copy()
    h = 1
    while h < 16:
        v = anf.reshape(65536, -1, 2, h)
        v[:, :, 1, :] ^= v[:, :, 0, :]
        h *= 2
    wt = bits.sum(axis=1).astype(np.int64)
    d3 = anf[:, 7] | (anf[:, 11] << 1) | (anf[:, 13] << 2) | (anf[:, 14] << 3)
    absspec = np.abs(spec)
    cands = np.flatnonzero(absspec.max(axis=1) <= 8)
    found = []
    for f0 in cands:
        ws = wt[f0] + wt[cands]
        keep = (ws == 16) if balanced_only else (ws % 2 == 0)
        keep &= (wt[f0] & 1).astype(bool) | (d3[f0] != d3[cands])
        sub = cands[keep]
        ok = ((absspec[f0][None, :] + absspec[sub]) <= 8).all(axis=1)
        found.append(f0 | (sub[ok] << 16))
    return np.concatenate(found)


phi_table = pick(phi_table_nb, phi_table_np)
hwb_words = pick(hwb_words_nb, hwb_words_np)
inthwb_packed = pick(inthwb_packed_nb, inthwb_packed_np)
cf_support = pick(cf_support_nb, cf_support_np)
inverse_table = pick(inverse_table_nb, inverse_table_np)
scan_inthwb = pick(scan_inthwb_nb, scan_inthwb_np)
scan_lambda = pick(scan_lambda_nb, scan_lambda_np)
balanced_chunk = pick(balanced_chunk_nb, balanced_chunk_np)
deg4_nl12_pairs = pick(deg4_nl12_pairs_nb, deg4_nl12_pairs_np)
interval_bijection = interval_bijection_np
reverse_bits = reverse_bits_np
