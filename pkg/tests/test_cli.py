"""CLI golden tests: every number printed equals the direct library result."""

from __future__ import annotations

import json

import pytest

from boolfn import catalog, search
from boolfn.algres import algebraic_immunity, faa_profile
from boolfn.cli import _nrange, analyze, main
from boolfn.constructions import IntervalParams, cf_function, hwb, int_hwb
from boolfn.core import TruthTable, degree, load, nonlinearity, save


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_construct_hwb_then_analyze(tmp_path, capsys):
    path = tmp_path / "hwb8.tt"
    code, out, _ = run(capsys, "construct", "hwb", "--n", "8", "-o", str(path))
    assert code == 0 and "wrote" in out
    assert load(path) == hwb(8)
    res = run_json(capsys, "analyze", str(path), "--metrics", "nl,deg,balanced,llb")
    assert res == {"n": 8, "nl": 88, "deg": degree(hwb(8)), "balanced": True, "llb": round(analyze(hwb(8), ["llb"], None)["llb"], 2)}


def test_construct_cf_13(tmp_path, capsys):
    path = tmp_path / "cf13.hex"
    assert run(capsys, "construct", "cf", "--n", "13", "-o", str(path))[0] == 0
    f = load(path)
    assert f == cf_function(13, catalog.poly_for(13))
    assert run_json(capsys, "analyze", str(path), "--metrics", "nl")["nl"] == 3988


def test_construct_inthwb_13_analyze(tmp_path, capsys):
    path = tmp_path / "i13.tt"
    code, _, _ = run(capsys, "construct", "inthwb", "--n", "13", "--s", "4", "--w0", "254", "--lambda", "5,2", "-o", str(path))
    assert code == 0
    f = load(path)
    assert f.n == 13 and len(f.table) == 8192
    assert f == int_hwb(IntervalParams(13, 254, 4), "5,2")
    res = run_json(capsys, "analyze", str(path), "--metrics", "nl,deg,ai,faa,fai")
    assert (res["nl"], res["deg"], res["ai"]) == (3952, 12, 6)
    assert res["faa"] == [[1, 11], [2, 9], [3, 9], [4, 7], [5, 7]]
    assert res["faa"] == [list(p) for p in faa_profile(f, ai=6).as_list()]
    assert res["fai"] == 12
    code, text, _ = run(capsys, "analyze", str(path), "--metrics", "faa")
    assert "(1,11), (2,9), (3,9), (4,7), (5,7)" in text


def test_construct_to_stdout_and_other_kinds(capsys):
    code, out, _ = run(capsys, "construct", "lambda", "--lambda", "~5,1")
    assert code == 0 and out.splitlines() == ["n=5", catalog.lambda_by_id("~5,1").to_string()]
    for argv in (
        ["construct", "lambda-hwb", "--n", "9", "--lambda", "0110"],
        ["construct", "cw", "--n", "9", "--direction", "left"],
        ["construct", "inverse", "--n", "9", "--alpha", "5"],
        ["construct", "inthwb", "--n", "9", "--s", "2", "--w0", "3", "--lambda", "10011001"],
    ):
        code, out, err = run(capsys, *argv)
        assert code == 0, err
        assert out.startswith("n=9\n") and len(out.splitlines()[1]) == 512


def test_constant_zero_file(tmp_path, capsys):
    path = tmp_path / "z.tt"
    save(TruthTable.constant(6, 0), path)
    res = run_json(capsys, "analyze", str(path), "--metrics", "nl,ai")
    assert res["nl"] == 0 and res["ai"] == 0 and res["ai_side"] == "f"


def test_analyze_matches_library_random(tmp_path, capsys, rng):
    for n in (5, 8, 10):
        f = TruthTable(n, rng.integers(0, 2, 1 << n, dtype="uint8"))
        path = tmp_path / f"r{n}.tt"
        save(f, path)
        res = run_json(capsys, "analyze", str(path), "--metrics", "nl,deg,balanced,ai,faa,fai")
        assert res == json.loads(json.dumps(analyze(f, ["nl", "deg", "balanced", "ai", "faa", "fai"], None)))
        assert res["nl"] == nonlinearity(f) and res["ai"] == algebraic_immunity(f).ai


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "inthwb", "--n", "13", "--s", "13", "--w0", "0", "--lambda", "5,2"],
        ["construct", "inthwb", "--n", "13", "--s", "4"],
        ["construct", "hwb"],
        ["construct", "hwb", "--n", "31"],
        ["construct", "cf", "--n", "5", "--poly", "x^5+x^4+1"],
        ["construct", "cf", "--n", "5", "--poly", "y^2"],
        ["construct", "lambda", "--lambda", "5,99"],
        ["construct", "nope"],
        ["analyze", "x.tt", "--metrics", "nl,colour"],
        ["search", "lambda", "--n", "10", "--r", "4", "--stream", "deg4nl12"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with_exit = None
    try:
        code = main(argv)
    except SystemExit as exc:
        with_exit = exc.code
        code = with_exit
    assert code == 1
    assert capsys.readouterr().err


def test_malformed_file_exit_3(tmp_path, capsys):
    path = tmp_path / "bad.tt"
    path.write_text("n=3\n0101")
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 3 and "cannot read" in err
    assert run(capsys, "analyze", str(tmp_path / "missing.tt"))[0] == 3


def test_budget_exceeded_exit_2(tmp_path, capsys):
    path = tmp_path / "f.tt"
    save(int_hwb(IntervalParams(11, 9, 3), "5,1"), path)
    code, out, _ = run(capsys, "analyze", str(path), "--metrics", "ai", "--budget", "100", "--json")
    assert code == 2 and json.loads(out)["error"] == "budget exceeded"


def test_corrupt_results_exit_3(tmp_path, capsys):
    path = tmp_path / "r.jsonl"
    path.write_text('{"kind": "header", "spec_hash": "nope"}\n')
    code, _, err = run(capsys, "search", "inthwb", "--n", "9", "--lambdas", "5,1", "--results", str(path), "--resume")
    assert code == 3 and "spec hash" in err


def test_search_inthwb_golden(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("BOOLFN_RESULTS_DIR", str(tmp_path / "res"))
    res = run_json(capsys, "search", "inthwb", "--n", "9", "--lambdas", "5,1|~5,2", "--s", "1-4", "--block", "64")
    want = search.search_inthwb(9, ["5,1", "~5,2"], s_values=range(1, 5), block=64)
    assert res["maxnl"] == want.maxnl
    assert [tuple(a) for a in res["argmax"]] == list(want.argmax)
    assert res["results"] == str(tmp_path / "res" / "inthwb-n9.jsonl")
    assert (tmp_path / "res" / "inthwb-n9.jsonl").exists()
    # a second run refuses to clobber, --resume reuses
    code, _, err = run(capsys, "search", "inthwb", "--n", "9", "--lambdas", "5,1|~5,2", "--s", "1-4", "--block", "64")
    assert code == 1 and "--resume" in err
    again = run_json(capsys, "search", "inthwb", "--n", "9", "--lambdas", "5,1|~5,2", "--s", "1-4", "--block", "64", "--resume")
    assert again["argmax"] == res["argmax"]


def test_search_lambda_golden(capsys):
    res = run_json(capsys, "search", "lambda", "--n", "10", "--r", "3", "--threads", "2")
    want = search.search_lambda(10, search.enumerate_balanced(3), 3)
    assert res["maxnl"] == want.maxnl and [tuple(a) for a in res["argmax"]] == list(want.argmax)


def test_sample_golden(tmp_path, capsys):
    out = tmp_path / "s.jsonl"
    code, text, _ = run(capsys, "sample", "w0", "--n", "10", "--s", "3", "--lambda", "5,4", "--count", "5", "--seed", "1", "--json", "--out", str(out))
    assert code == 0
    recs = [json.loads(x) for x in text.splitlines()]
    lib = sample_dicts(search.sample_w0(10, 3, "5,4", 5, 1))
    assert [strip(r) for r in recs] == lib
    lines = out.read_text().splitlines()
    head = json.loads(lines[0])
    assert head["seed"] == 1 and head["generator"] == "PCG64"
    assert [strip(json.loads(x)) for x in lines[1:]] == lib
    code, text, _ = run(capsys, "sample", "w0", "--n", "10", "--s", "3", "--lambda", "5,4", "--count", "5", "--seed", "1")
    assert "AI histogram" in text


def strip(d):
    return {k: v for k, v in d.items() if k != "elapsed_ms"}


def sample_dicts(recs):
    return [strip(r.to_dict()) for r in recs]


def test_table_nl_golden(capsys):
    res = run_json(capsys, "table", "nl", "--n", "13-14")
    assert res["header"][:3] == ["n", "IntHWB nl", "LLB"]
    rows = {int(r[0]): r for r in res["rows"]}
    assert rows[13][1:3] == ["3952", "-5.83"]
    assert rows[13][3] == "3988"
    assert rows[14][1] == "7974*"
    assert any("n=14" in note for note in res["notes"])


def test_table_nl_cited(capsys):
    code, text, _ = run(capsys, "table", "nl", "--n", "14", "--include-cited")
    assert code == 0
    assert "7816[a]" in text and "7842[b]" in text and "cited, not recomputed" in text


def test_table_ai_skips_exit_2(capsys):
    code, text, _ = run(capsys, "table", "ai", "--n", "13", "--max-ai-n", "12")
    assert code == 2 and "skipped" in text


def test_table_ai_13(capsys):
    res = run_json(capsys, "table", "ai", "--n", "13")
    assert res["rows"][0][1:] == ["(12,6)", "(12,7)"]


def test_table_high_n(capsys):
    res = run_json(capsys, "table", "high-n", "--n", "21", "--no-cf")
    row = res["rows"][0]
    assert row[0] == "21" and row[2] == row[4] == "1045280"


def test_catalog_commands(capsys):
    code, out, _ = run(capsys, "catalog", "verify")
    assert code == 0 and out.strip().endswith("catalog ok")
    code, out, _ = run(capsys, "catalog", "dump")
    assert code == 0 and "10111111010100010001101000001110" in out


def test_nrange():
    assert _nrange("13-16") == [13, 14, 15, 16]
    assert _nrange("3,5-6") == [3, 5, 6]


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "boolfn" in capsys.readouterr().out
