from __future__ import annotations

import json
from math import comb

import numpy as np
import pytest

from boolfn import catalog, search
from boolfn.constructions import IntervalParams, hwb, int_hwb, lambda_hwb
from boolfn.core import TruthTable, degree, nonlinearity
from boolfn.search import (
    ResultsError,
    ResultsStore,
    SearchOutcome,
    SearchRecord,
    SweepSpec,
    count_balanced,
    draw_w0,
    enumerate_balanced,
    sample_w0,
    search_inthwb,
    search_lambda,
    verify_outcome,
)

PAIR13 = ["5,1", "5,2", "~5,1", "~5,2"]

# ---------------------------------------------------------------- enumeration


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_enumerate_balanced_counts_and_order(r):
    rows = [t.to_string() for t in enumerate_balanced(r)]
    assert len(rows) == comb(1 << r, 1 << (r - 1)) == count_balanced(r)
    assert rows == sorted(rows) and len(set(rows)) == len(rows)
    assert all(s.count("1") == 1 << (r - 1) for s in rows)


def test_balanced_r2_is_nonconstant_affine():
    x = np.arange(4)
    affine = {
        "".join(str(((int(a & xi).bit_count()) & 1) ^ c) for xi in x)
        for a in range(1, 4)
        for c in (0, 1)
    }
    assert {t.to_string() for t in enumerate_balanced(2)} == affine


def test_enumerate_balanced_refuses_large_r():
    with pytest.raises(ValueError, match="explodes"):
        next(enumerate_balanced(6))


@pytest.mark.slow
def test_deg4_nl12_stream():
    rows = search.deg4_nl12_tables()
    assert rows.shape == (1_666_560, 32)
    assert np.all(rows.sum(axis=1) == 16)
    keys = {bytes(r) for r in rows}
    assert len(keys) == rows.shape[0]
    for name, lam in catalog.lambda_catalog().items():
        assert bytes(lam.table) in keys, name
    # sampled rows really have deg 4 and nl 12
    for i in range(0, rows.shape[0], 16661):
        t = TruthTable(5, rows[i])
        assert degree(t) == 4 and nonlinearity(t) == 12
    assert search.deg4_nl12_tables(balanced=False).shape[0] == 13_332_480


# ------------------------------------------------------------- lambda search


def test_search_lambda_empty():
    out = search_lambda(10, [])
    assert out.maxnl == 0 and out.argmax == ()


def test_search_lambda_single_matches_direct():
    for name in ("5,3", "5,8"):
        lam = catalog.lambda_by_id(name)
        f = lambda_hwb(11, lam)
        out = search_lambda(11, [lam])
        if degree(f) == 10:
            assert out.maxnl == nonlinearity(f) and out.argmax == ((name,),)
        else:
            assert out.argmax == ()


def test_search_lambda_r2_equals_hwb():
    out = search_lambda(13, enumerate_balanced(2), 2)
    assert out.maxnl == nonlinearity(hwb(13)) == 3172
    for (label,) in out.argmax:
        assert nonlinearity(lambda_hwb(13, search.from_hex(label, 2))) == out.maxnl


def test_search_lambda_monotone_in_r():
    best = {r: search_lambda(13, enumerate_balanced(r), r).maxnl for r in (3, 4)}
    assert best[3] < best[4] < 3780


def test_search_lambda_order_and_threads_independent(rng):
    rows = np.stack([t.table for t in enumerate_balanced(4)])
    a = search_lambda(10, rows, threads=1)
    b = search_lambda(10, rows[rng.permutation(rows.shape[0])], threads=3)
    c = search_lambda(10, [TruthTable(4, r) for r in rows[::-1]], 4, threads=2)
    assert a == b == c and len(a.argmax) >= 1
    for (label,) in a.argmax:
        f = lambda_hwb(10, search.from_hex(label, 4))
        assert nonlinearity(f) == a.maxnl and degree(f) == 9


def test_search_lambda_rejects_wrong_arity():
    with pytest.raises(ValueError):
        search_lambda(10, [TruthTable.from_string("0110")], 3)


@pytest.mark.slow
def test_search_lambda_r5_n13():
    out = search_lambda(13, search.deg4_nl12_tables(), 5)
    assert out.maxnl == 3780
    assert set(out.argmax) == {("5,1",), ("5,2",), ("~5,1",), ("~5,2",)}


# ------------------------------------------------------------- IntHWB sweep


def _sweep(tmp_path, name, **kw):
    kw.setdefault("w0_range", (0, 1 << 10))
    kw.setdefault("block", 128)
    return search_inthwb(10, PAIR13, results=tmp_path / name, **kw)


def _brute_sweep(n, lambdas, s_values):
    cands = []
    for lam in lambdas:
        for s in s_values:
            for w0 in range(1 << n):
                f = int_hwb(IntervalParams(n, w0, s), lam)
                if degree(f) == n - 1:
                    cands.append((nonlinearity(f), (lam, s, w0)))
    return SearchOutcome.from_candidates(cands)


def test_search_inthwb_matches_brute_force():
    got = search_inthwb(8, ["5,2", "~5,7"], block=50)
    assert got == _brute_sweep(8, ["5,2", "~5,7"], range(1, 5))
    assert verify_outcome(8, got)


def test_search_inthwb_kill_and_resume(tmp_path):
    full = _sweep(tmp_path, "full.jsonl")
    assert verify_outcome(10, full)
    for stop in (1, 7, 33):
        path = tmp_path / f"part{stop}.jsonl"
        search_inthwb(10, PAIR13, w0_range=(0, 1 << 10), block=128, results=path, stop_after=stop)
        assert not search.sweep_complete(10, path, L=PAIR13, w0_range=(0, 1 << 10), block=128)
        assert _sweep(tmp_path, f"part{stop}.jsonl") == full
        assert search.sweep_complete(10, path, L=PAIR13, w0_range=(0, 1 << 10), block=128)
    assert _strip(tmp_path / "full.jsonl") == _strip(tmp_path / "part7.jsonl")


def _strip(path):
    out = []
    for line in path.read_text().splitlines():
        obj = json.loads(line)
        obj.pop("elapsed_ms", None)
        out.append(obj)
    return out


def test_search_inthwb_thread_counts_identical(tmp_path):
    a = _sweep(tmp_path, "t1.jsonl", threads=1)
    b = _sweep(tmp_path, "t4.jsonl", threads=4)
    assert a == b
    assert _strip(tmp_path / "t1.jsonl") == _strip(tmp_path / "t4.jsonl")
    assert a == search_inthwb(10, PAIR13, w0_range=(0, 1 << 10), block=97, threads=2)


def test_resume_completed_sweep_is_noop(tmp_path):
    a = _sweep(tmp_path, "r.jsonl")
    before = (tmp_path / "r.jsonl").read_text()
    assert _sweep(tmp_path, "r.jsonl") == a
    assert (tmp_path / "r.jsonl").read_text() == before


def test_empty_results_file_is_fresh_start(tmp_path):
    (tmp_path / "e.jsonl").write_text("")
    assert _sweep(tmp_path, "e.jsonl") == _sweep(tmp_path, "f.jsonl")


def test_corrupt_trailing_line_truncated(tmp_path, caplog):
    path = tmp_path / "c.jsonl"
    search_inthwb(10, PAIR13, w0_range=(0, 1 << 10), block=128, results=path, stop_after=5)
    good = path.read_text()
    path.write_text(good + '{"kind": "inthwb", "n": 1')  # torn write
    with caplog.at_level("WARNING"):
        out = _sweep(tmp_path, "c.jsonl")
    assert "corrupt trailing line" in caplog.text
    assert out == _sweep(tmp_path, "clean.jsonl")
    assert all(json.loads(x) for x in path.read_text().splitlines())


def test_corrupt_middle_line_raises(tmp_path):
    path = tmp_path / "m.jsonl"
    search_inthwb(10, PAIR13, w0_range=(0, 1 << 10), block=128, results=path, stop_after=5)
    lines = path.read_text().splitlines()
    lines[2] = "{not json"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ResultsError, match="line 3"):
        _sweep(tmp_path, "m.jsonl")


def test_spec_hash_mismatch_raises(tmp_path):
    _sweep(tmp_path, "h.jsonl")
    with pytest.raises(ResultsError, match="spec hash"):
        _sweep(tmp_path, "h.jsonl", block=64)


def test_duplicate_records_deduplicated(tmp_path):
    path = tmp_path / "d.jsonl"
    spec = SweepSpec(10, ("5,2",), (3,), 0, 16, 16)
    store = ResultsStore(path, spec.header())
    rec = SearchRecord("inthwb", 10, 5, 400, 9, lambda_id="5,2", s=3, w0=5)
    marker = {"kind": "block", "lambda_id": "5,2", "s": 3, "w0": 0}
    store.write_block([rec], marker)
    store.write_block([rec], marker)
    with open(path, "a") as fh:
        fh.write(rec.to_json() + "\n")
    again = ResultsStore(path, spec.header())
    assert len(again.records) == 1 and again.outcome().argmax == (("5,2", 3, 5),)


def test_search_record_round_trip_and_verify():
    f = int_hwb(IntervalParams(11, 300, 3), "~5,4")
    rec = SearchRecord("inthwb", 11, 5, nonlinearity(f), degree(f), lambda_id="~5,4", s=3, w0=300)
    back = SearchRecord.from_dict(json.loads(rec.to_json()))
    assert back == rec and back.verify() and back.rebuild() == f
    lam = catalog.lambda_by_id("5,9")
    g = lambda_hwb(12, lam)
    rec2 = SearchRecord("lambda-hwb", 12, 5, nonlinearity(g), degree(g), lambda_hex=search.to_hex(lam))
    assert rec2.verify()
    bad = SearchRecord("inthwb", 11, 5, rec.nl + 2, rec.deg, lambda_id="~5,4", s=3, w0=300)
    assert not bad.verify()
    with pytest.raises(ResultsError):
        SearchRecord.from_dict({**rec.to_dict(), "colour": "red"})


def test_outcome_aggregation_is_order_insensitive(rng):
    cands = [(int(rng.integers(0, 5)), (f"x{i}",)) for i in range(200)]
    a = SearchOutcome.from_candidates(cands)
    b = SearchOutcome.from_candidates(cands[::-1])
    assert a == b and a.maxnl == 4
    assert SearchOutcome.from_candidates([]) == SearchOutcome(0, ())


# ---------------------------------------------------------------- sampling


def test_draw_w0_is_pcg64():
    want = np.random.Generator(np.random.PCG64(7)).integers(0, 1 << 13, size=5, dtype=np.int64)
    assert draw_w0(13, 5, 7) == [int(w) for w in want]
    assert draw_w0(13, 5, 7) != draw_w0(13, 5, 8)


def test_sample_w0_deterministic():
    a = sample_w0(10, 3, "5,6", 6, seed=11, threads=1)
    b = sample_w0(10, 3, "5,6", 6, seed=11, threads=3)
    strip = lambda rs: [{k: v for k, v in r.to_dict().items() if k != "elapsed_ms"} for r in rs]
    assert strip(a) == strip(b)
    assert [r.w0 for r in a] == draw_w0(10, 6, 11)
    for r in a:
        assert r.ai is not None and r.seed == 11 and r.verify()
    assert all(r.ai is None for r in sample_w0(10, 3, "5,6", 2, seed=1, with_ai=False))


def test_write_records(tmp_path):
    recs = sample_w0(9, 2, "5,1", 3, seed=2, with_ai=False)
    search.write_records(tmp_path / "s" / "x.jsonl", {"seed": 2}, recs)
    lines = (tmp_path / "s" / "x.jsonl").read_text().splitlines()
    assert json.loads(lines[0]) == {"kind": "header", "seed": 2}
    assert [SearchRecord.from_dict(json.loads(x)) for x in lines[1:]] == recs
