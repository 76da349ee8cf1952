"""``boolfn`` command line: construct, analyze, search, sample, table, catalog.

Exit codes: 0 success, 1 usage error, 2 computation budget exceeded,
3 data validation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import BACKEND, CONVENTION, __version__, catalog, search
from .algres import DEFAULT_BUDGET, BudgetExceeded, algebraic_immunity, faa_profile, fai
from .catalog import CatalogError
from .constructions import (
    IntervalParams,
    cf_function,
    cyclic_weightwise,
    hwb,
    int_hwb,
    inverse_map_component,
    lambda_hwb,
    quadratic_g,
)
from .core import TruthTable, degree, fmt2, llb, load, nonlinearity, save
from .gf2poly import Gf2Poly
from .search import ResultsError
from .tables import ai_table, high_n_table, nl_table

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_DATA = 0, 1, 2, 3

METRICS = ("nl", "llb", "deg", "balanced", "ai", "faa", "fai")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _nrange(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out += list(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def _w0_range(text: str) -> tuple[int, int]:
    a, b = text.split(":")
    return int(a), int(b)


# ------------------------------------------------------------------ construct


def build_function(a) -> TruthTable:
    kind = a.kind
    if a.n is None and kind != "lambda":
        raise UsageError(f"construct {kind} needs --n")
    if kind == "hwb":
        return hwb(a.n)
    if kind == "lambda":
        return catalog.lambda_by_id(a.lam or "5,1")
    if kind == "lambda-hwb":
        if not a.lam:
            raise UsageError("lambda-hwb needs --lambda (catalog id or 0/1 string)")
        return lambda_hwb(a.n, _lambda_arg(a.lam))
    if kind == "inthwb":
        if a.s is None or a.w0 is None or not a.lam:
            raise UsageError("inthwb needs --s, --w0 and --lambda")
        return int_hwb(IntervalParams(a.n, a.w0, a.s), _lambda_arg(a.lam))
    if kind == "cf":
        tau = Gf2Poly.parse(a.poly) if a.poly else catalog.poly_for(a.n)
        return cf_function(a.n, tau)
    if kind == "cw":
        return cyclic_weightwise(a.n, quadratic_g(a.n), a.direction)
    if kind == "inverse":
        rho = Gf2Poly.parse(a.poly) if a.poly else catalog.poly_for(a.n)
        return inverse_map_component(a.n, rho, a.alpha)
    raise UsageError(f"unknown kind {kind!r}")


def _lambda_arg(text: str) -> TruthTable:
    if set(text) <= {"0", "1"} and len(text) > 3:
        return TruthTable.from_string(text)
    return catalog.lambda_by_id(text)


def cmd_construct(a) -> int:
    try:
        f = build_function(a)
    except CatalogError:
        raise
    except KeyError as exc:
        raise UsageError(f"unknown lambda {exc.args[0]!r}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Path(a.out) if a.out else None
    if out is None:
        print(f"n={f.n}\n{f.to_string()}")
    else:
        save(f, out)
        print(f"wrote {out} (n={f.n}, {1 << f.n} bits)")
    return EXIT_OK


# -------------------------------------------------------------------- analyze


def analyze(f: TruthTable, metrics, budget: int | None) -> dict:
    out: dict = {"n": f.n}
    ai = None
    if "nl" in metrics or "llb" in metrics:
        nl = nonlinearity(f)
        if "nl" in metrics:
            out["nl"] = nl
        if "llb" in metrics:
            out["llb"] = round(llb(nl=nl, n=f.n), 2) if 2 * nl < 1 << f.n else None
    if "deg" in metrics:
        out["deg"] = degree(f)
    if "balanced" in metrics:
        out["balanced"] = f.is_balanced
    if {"ai", "faa", "fai"} & set(metrics):
        rep = algebraic_immunity(f, budget=budget)
        ai = rep.ai
        if "ai" in metrics:
            out["ai"] = ai
            out["ai_side"] = rep.witness_side
    if {"faa", "fai"} & set(metrics) and ai is not None:
        prof = faa_profile(f, ai=ai, budget=budget) if ai >= 2 else None
        if "faa" in metrics:
            out["faa"] = prof.as_list() if prof else []
        if "fai" in metrics:
            out["fai"] = fai(f, ai=ai, profile=prof) if prof else 2 * ai
    return out


def cmd_analyze(a) -> int:
    metrics = [m.strip() for m in a.metrics.split(",") if m.strip()]
    bad = set(metrics) - set(METRICS)
    if bad:
        raise UsageError(f"unknown metrics {sorted(bad)}; choose from {', '.join(METRICS)}")
    try:
        f = load(a.path)
    except (OSError, ValueError) as exc:
        print(f"cannot read {a.path}: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        res = analyze(f, metrics, a.budget)
    except BudgetExceeded as exc:
        res = {"n": f.n, "error": "budget exceeded", "detail": str(exc)}
        _emit(res, a.json)
        return EXIT_BUDGET
    _emit(res, a.json)
    return EXIT_OK


def _emit(res: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(res, sort_keys=True))
        return
    width = max(len(k) for k in res)
    for k, v in res.items():
        if k == "faa":
            v = ", ".join(f"({e},{d})" for e, d in v)
        elif k == "llb" and v is not None:
            v = fmt2(v)
        print(f"{k.ljust(width)}  {v}")


# --------------------------------------------------------------- search/sample


def _results_path(a, default_name: str) -> Path:
    if a.results:
        return Path(a.results)
    return search.results_dir() / default_name


def cmd_search(a) -> int:
    t0 = time.perf_counter()
    if a.what == "lambda":
        r = a.r
        if a.stream == "deg4nl12":
            if r != 5:
                raise UsageError("--stream deg4nl12 implies --r 5")
            S = search.deg4_nl12_tables(True)
        else:
            S = search.balanced_chunks(r)
        out = search.search_lambda(a.n, S, r, threads=a.threads)
        summary = {"kind": "lambda-hwb", "n": a.n, "r": r, "stream": a.stream, **out.to_dict()}
    else:
        lambdas = a.lambdas.split("|") if a.lambdas else None
        s_values = _nrange(a.s) if a.s else None
        w0r = _w0_range(a.w0_range) if a.w0_range else None
        path = _results_path(a, f"inthwb-n{a.n}.jsonl")
        if path.exists() and not a.resume:
            raise UsageError(f"{path} exists; pass --resume to continue it or choose another --results file")
        out = search.search_inthwb(
            a.n, lambdas, s_values=s_values, w0_range=w0r, block=a.block, threads=a.threads, results=path
        )
        summary = {"kind": "inthwb", "n": a.n, "results": str(path), **out.to_dict()}
    summary["elapsed_s"] = round(time.perf_counter() - t0, 2)
    print(json.dumps(summary, sort_keys=True) if a.json else _outcome_text(summary))
    return EXIT_OK


def _outcome_text(s: dict) -> str:
    lines = [f"maxnl {s['maxnl']}  ({len(s['argmax'])} maximiser(s), {s['elapsed_s']} s)"]
    lines += ["  " + " ".join(str(x) for x in m) for m in s["argmax"]]
    if "results" in s:
        lines.append(f"records: {s['results']}")
    return "\n".join(lines)


def cmd_sample(a) -> int:
    with_ai = None if a.ai is None else a.ai
    recs = search.sample_w0(a.n, a.s, a.lam, a.count, a.seed, with_ai=with_ai, threads=a.threads)
    header = {"tool": "boolfn", "version": __version__, "convention": CONVENTION, "seed": a.seed, "generator": "PCG64"}
    if a.out:
        search.write_records(a.out, header, recs)
    if a.json:
        for r in recs:
            print(r.to_json())
    else:
        ais = [r.ai for r in recs if r.ai is not None]
        print(f"{len(recs)} draws, seed {a.seed}: max nl {max(r.nl for r in recs)}")
        if ais:
            hist = {k: ais.count(k) for k in sorted(set(ais))}
            print("AI histogram: " + ", ".join(f"{k}: {v}" for k, v in hist.items()))
    return EXIT_OK


# ---------------------------------------------------------------------- table


def cmd_table(a) -> int:
    ns = _nrange(a.n) if a.n else None
    if a.which == "nl":
        t = nl_table(ns or range(13, 21), include_cited=a.include_cited)
    elif a.which == "ai":
        t = ai_table(ns or range(13, 17), include_cited=a.include_cited, max_ai_n=a.max_ai_n, budget=a.budget)
    else:
        t = high_n_table(ns or range(21, 31), with_cf=not a.no_cf)
    print(json.dumps(t.to_dict()) if a.json else t.render())
    return EXIT_BUDGET if t.skipped else EXIT_OK


def cmd_catalog(a) -> int:
    if a.action == "verify":
        for line in catalog.verify_all():
            print(line)
        print("catalog ok")
        return EXIT_OK
    for rec in catalog.records():
        fp = ";".join(f"{k}={v}" if v else k for k, v in rec.fingerprint.items())
        print(f"{rec.kind:8} {rec.name:10} {rec.n:3} {rec.rep} {fp}")
    return EXIT_OK


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boolfn", description="Constructions and metrics for cryptographic Boolean functions")
    p.add_argument("--version", action="version", version=f"boolfn {__version__} ({BACKEND} kernels)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build a function and write its truth table")
    c.add_argument("kind", choices=["hwb", "lambda", "lambda-hwb", "inthwb", "cf", "cw", "inverse"])
    c.add_argument("--n", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--w0", type=int)
    c.add_argument("--lambda", dest="lam")
    c.add_argument("--poly", help="polynomial, e.g. 'x^13+x^4+x^3+x+1' (default: catalog)")
    c.add_argument("--alpha", type=int, default=1, help="component mask for the inverse map")
    c.add_argument("--direction", choices=["right", "left"], default="right")
    c.add_argument("-o", "--out", help="output path (.tt or .hex); stdout if omitted")
    c.set_defaults(func=cmd_construct)

    an = sub.add_parser("analyze", help="report metrics of a truth-table file")
    an.add_argument("path")
    an.add_argument("--metrics", default="nl,llb,deg,balanced")
    an.add_argument("--json", action="store_true")
    an.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max GF(2) matrix cells for ai/faa")
    an.set_defaults(func=cmd_analyze)

    s = sub.add_parser("search", help="lambda search over balanced r-variable functions, or the IntHWB parameter sweep")
    s.add_argument("what", choices=["lambda", "inthwb"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, default=5)
    s.add_argument("--stream", choices=["balanced", "deg4nl12"], default="balanced")
    s.add_argument("--lambdas", help="'|'-separated lambda ids, '~' marks a complement")
    s.add_argument("--s", help="s values, e.g. 1-6")
    s.add_argument("--w0-range", help="start:stop")
    s.add_argument("--block", type=int, default=1024)
    s.add_argument("--results", help="JSON-lines results file")
    s.add_argument("--resume", action="store_true")
    s.add_argument("--threads", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_search)

    sm = sub.add_parser("sample", help="random w0 draws for fixed (n, s, lambda)")
    sm.add_argument("what", choices=["w0"])
    sm.add_argument("--n", type=int, required=True)
    sm.add_argument("--s", type=int, required=True)
    sm.add_argument("--lambda", dest="lam", required=True)
    sm.add_argument("--count", type=int, default=100)
    sm.add_argument("--seed", type=int, required=True)
    g = sm.add_mutually_exclusive_group()
    g.add_argument("--ai", dest="ai", action="store_true", default=None)
    g.add_argument("--no-ai", dest="ai", action="store_false")
    sm.add_argument("--out")
    sm.add_argument("--threads", type=int)
    sm.add_argument("--json", action="store_true")
    sm.set_defaults(func=cmd_sample)

    t = sub.add_parser("table", help="regenerate a comparison table")
    t.add_argument("which", choices=["nl", "ai", "high-n"])
    t.add_argument("--n", help="range such as 13-16")
    t.add_argument("--include-cited", action="store_true")
    t.add_argument("--max-ai-n", type=int, default=16)
    t.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    t.add_argument("--no-cf", action="store_true", help="skip the CF columns (high-n)")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_table)

    ca = sub.add_parser("catalog", help="dump or verify the embedded catalogs")
    ca.add_argument("action", choices=["dump", "verify"])
    ca.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return a.func(a)
    except UsageError as exc:
        print(f"boolfn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"boolfn: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CatalogError, ResultsError) as exc:
        print(f"boolfn: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
