"""Every numba kernel against its numpy twin, on identical inputs.

The package binds one of the two at import time (``BOOLFN_DISABLE_NUMBA``);
both are importable under their suffixed names, so the fallback is covered
here whichever backend is active.
"""

from __future__ import annotations

import numpy as np
import pytest

from boolfn import algres, core
from boolfn.kernels import BACKEND, builders, linalg, scans, transforms

from oracles import naive_anf, naive_walsh


def test_backend_flag_is_known():
    assert BACKEND in ("numba", "numpy")


@pytest.mark.parametrize("n", [1, 3, 6, 10, 14])
def test_transforms_parity(rng, n):
    t = rng.integers(0, 2, 1 << n, dtype=np.uint8)
    w_nb, w_np = transforms.walsh_nb(t), transforms.walsh_np(t)
    assert np.array_equal(w_nb, w_np)
    if n <= 10:
        assert np.array_equal(w_np, naive_walsh(t, n))
    assert transforms.max_abs_nb(w_nb) == transforms.max_abs_np(w_np)
    a_nb, a_np = t.copy(), t.copy()
    transforms.moebius_nb(a_nb)
    transforms.moebius_np(a_np)
    assert np.array_equal(a_nb, a_np)
    if n <= 10:
        assert np.array_equal(a_np, naive_anf(t, n))


@pytest.mark.parametrize("n", [1, 2, 5, 6, 7, 12, 17])
def test_packed_transforms_parity(rng, n):
    t = rng.integers(0, 2, 1 << n, dtype=np.uint8)
    words = core.pack_bits(t)
    want = core.moebius_array(t)
    for fn in (transforms.moebius_packed_nb, transforms.moebius_packed_np):
        w = words.copy()
        fn(w, n)
        assert np.array_equal(core.unpack_bits(w, n), want)
    ref = int(np.abs(transforms.walsh_np(t)).max())
    assert transforms.walsh_max_abs_packed_nb(words, n) == ref
    assert transforms.walsh_max_abs_packed_np(words, n) == ref


def _random_matrix(rng, rows, cols):
    bits = rng.integers(0, 2, (rows, cols), dtype=np.uint8)
    return bits, builders._pack_rows(bits)


def _rank_oracle(bits):
    m = bits.copy() % 2
    r = 0
    for c in range(m.shape[1]):
        piv = [i for i in range(r, m.shape[0]) if m[i, c]]
        if not piv:
            continue
        m[[r, piv[0]]] = m[[piv[0], r]]
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


@pytest.mark.parametrize("rows, cols", [(5, 9), (40, 40), (70, 130), (130, 70), (1, 1)])
def test_rank_profile_parity(rng, rows, cols):
    for _ in range(5):
        bits, m = _random_matrix(rng, rows, cols)
        if rng.random() < 0.5:
            bits[rows // 2 :] = bits[: rows - rows // 2]  # force dependencies
            m = builders._pack_rows(bits)
        ends = np.array(sorted({0, cols // 3, cols // 2, cols}), dtype=np.int64)
        r_nb = linalg.rank_profile_nb(m.copy(), cols, ends)
        r_np = linalg.rank_profile_np(m.copy(), cols, ends)
        assert np.array_equal(r_nb, r_np)
        assert [int(x) for x in r_np] == [_rank_oracle(bits[:, :e]) for e in ends]


@pytest.mark.parametrize("rows, cols", [(5, 9), (40, 40), (70, 130), (130, 70)])
def test_nullspace_parity(rng, rows, cols):
    for _ in range(5):
        bits, m = _random_matrix(rng, rows, cols)
        v_nb = linalg.nullspace_vector_nb(m.copy(), cols)
        v_np = linalg.nullspace_vector_np(m.copy(), cols)
        assert np.array_equal(v_nb, v_np)
        has = _rank_oracle(bits) < cols
        assert (v_np.size > 0) == has
        if has:
            assert v_np.any() and not np.any((bits.astype(np.int64) @ v_np) % 2)


@pytest.mark.parametrize("n, k", [(6, 2), (8, 3), (9, 4)])
def test_builders_parity(rng, n, k):
    t = core.TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))
    rows, cols = algres._reduced_problem(t, k)
    wt, cpar = algres._weights(n), algres._cpar(n)
    assert np.array_equal(builders.fill_reduced_nb(rows, cols, wt, cpar, k), builders.fill_reduced_np(rows, cols, wt, cpar, k))
    sup, mons = t.support().astype(np.int64), algres.graded_monomials(n, k)
    assert np.array_equal(builders.fill_subset_nb(sup, mons), builders.fill_subset_np(sup, mons))
    order, _ = algres._faa_columns(n)
    fw = core.pack_bits(t.table)
    a = builders.fill_faa_nb(fw, n, mons, order)
    b = builders.fill_faa_np(fw, n, mons, order)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("n, s, w0", [(6, 1, 0), (8, 3, 77), (10, 4, 1000), (12, 11, 4095)])
def test_interval_and_phi_parity(n, s, w0):
    i = np.arange(1 << n, dtype=np.int64)
    b_np = scans.interval_bijection_np(i, n, w0, s)
    b_nb = np.array([scans.interval_bijection_nb(int(x), n, w0, s) for x in i])
    assert np.array_equal(b_np, b_nb)
    assert np.array_equal(scans.phi_table_nb(n, w0, s), scans.phi_table_np(n, w0, s))
    assert np.array_equal(scans.reverse_bits_np(i, n), np.array([scans.reverse_bits_nb(int(x), n) for x in i]))


@pytest.mark.parametrize("n, r", [(5, 1), (8, 3), (9, 5), (12, 4), (7, 7)])
def test_hwb_words_parity(n, r):
    assert np.array_equal(scans.hwb_words_nb(n, r), scans.hwb_words_np(n, r))


@pytest.mark.parametrize("n, w0, s", [(9, 17, 2), (13, 254, 4), (14, 999, 5)])
def test_inthwb_packed_parity(n, w0, s):
    from boolfn.catalog import lambda_by_id

    lam = np.ascontiguousarray(lambda_by_id("5,2").table)
    assert np.array_equal(scans.inthwb_packed_nb(n, w0, s, lam, 5), scans.inthwb_packed_np(n, w0, s, lam, 5))


@pytest.mark.parametrize("n, bits", [(5, 0b100101), (8, 0b100011101), (13, 0b10000000011011)])
def test_cf_and_inverse_parity(n, bits):
    for packed in (False, True):
        assert np.array_equal(scans.cf_support_nb(n, bits, packed), scans.cf_support_np(n, bits, packed))
    assert np.array_equal(scans.inverse_table_nb(n, bits), scans.inverse_table_np(n, bits))
    for a in range(1, min(1 << n, 300)):
        assert scans.gf2_inverse_nb(a, bits) == scans.gf2_inverse_py(a, bits)


def test_scan_parity(rng):
    n, s = 10, 3
    lam = np.ascontiguousarray(rng.integers(0, 2, 32, dtype=np.uint8))
    hww = scans.hwb_words_np(n, 5)
    rev = scans.reverse_bits_np(np.arange(1 << n, dtype=np.int64), n)
    w0s = np.arange(0, 200, dtype=np.int64)
    a = scans.scan_inthwb_nb(n, s, w0s, lam, hww, rev)
    b = scans.scan_inthwb_np(n, s, w0s, lam, hww, rev)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    lams = rng.integers(0, 2, (64, 32), dtype=np.uint8)
    a = scans.scan_lambda_nb(n, hww, lams)
    b = scans.scan_lambda_np(n, hww, lams)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_scan_measure_matches_library(rng):
    """nl and the degree hint returned by a scan agree with direct calls."""
    n = 9
    hww = scans.hwb_words_np(n, 5)
    lams = rng.integers(0, 2, (200, 32), dtype=np.uint8)
    nls, tops = scans.scan_lambda(n, hww, lams)
    for lam, nl, top in zip(lams, nls, tops):
        f = core.TruthTable(n, lam[hww])
        d = core.degree(f)
        assert nl == core.nonlinearity(f)
        assert top == (d if d >= n - 1 else -1)


@pytest.mark.parametrize("nbits", [4, 8, 16])
def test_balanced_chunk_parity(nbits):
    start = (1 << (nbits // 2)) - 1
    a_vals, a_next = scans.balanced_chunk_nb(start, 37, nbits)
    b_vals, b_next = scans.balanced_chunk_np(start, 37, nbits)
    assert np.array_equal(a_vals, b_vals) and a_next == b_next


@pytest.mark.slow
def test_deg4_nl12_parity():
    a = np.sort(np.asarray(scans.deg4_nl12_pairs_nb(True)))
    b = np.sort(np.asarray(scans.deg4_nl12_pairs_np(True)))
    assert np.array_equal(a, b)
