"""Comparison tables: nonlinearity, degree/AI and high-n spot checks.

Every numeric cell is recomputed, except the prior-work columns which are
read from ``data/cited.txt`` and footnoted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import catalog
from .algres import BudgetExceeded, DEFAULT_BUDGET, algebraic_immunity
from .constructions import IntervalParams, cf_function, cf_nonlinearity, int_hwb, int_hwb_nonlinearity
from .core import crb, degree, fmt2, lcrb, llb


@dataclass
class Table:
    title: str
    header: list[str]
    rows: list[list[str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    skipped: int = 0

    def render(self) -> str:
        widths = [max(len(h), *(len(r[i]) for r in self.rows)) if self.rows else len(h) for i, h in enumerate(self.header)]
        line = "  ".join(h.rjust(w) for h, w in zip(self.header, widths))
        out = [self.title, line, "-" * len(line)]
        out += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in self.rows]
        out += self.notes
        return "\n".join(out)

    def to_dict(self) -> dict:
        return {"title": self.title, "header": self.header, "rows": self.rows, "notes": self.notes}


def sweep_params(n: int) -> catalog.InthwbParams:
    """The catalogued maximiser for n (first one when there are two)."""
    for name in (f"sweep-{n}", f"sweep-{n}a"):
        p = catalog.inthwb_params().get(name)
        if p is not None:
            return p
    raise KeyError(f"no catalogued IntHWB parameters for n={n}")


def _relabel_note(params: list[catalog.InthwbParams]) -> list[str]:
    out = []
    for p in params:
        if p.relabelled:
            out.append(
                f"  [*] n={p.n}: computed with lambda {p.use}; the listed label {p.lambda_id} gives a different value"
            )
    return out


def _cited(table: str, col: str, n: int, include: bool, used: set[str]) -> list[str]:
    vals = catalog.cited()["values"]
    hit = vals.get((table, col, n))
    if not include:
        return []
    if hit is None:
        return ["--"] * (2 if table == "nl" else 1)
    used.add(hit[1])
    parts = hit[0].split(";")
    return [p + hit[1] if i == 0 else p for i, p in enumerate(parts)]


def _footnotes(used: set[str]) -> list[str]:
    notes = catalog.cited()["notes"]
    return [f"  {u} {notes[u.strip('[]')]} (cited, not recomputed)" for u in sorted(used)]


def nl_table(ns, *, include_cited: bool = False) -> Table:
    header = ["n"]
    if include_cited:
        header += ["cw nl", "cw LLB", "ww nl", "ww LLB"]
    header += ["IntHWB nl", "LLB", "CF nl", "LLB", "CRB", "LCRB"]
    t = Table("Nonlinearity comparison", header)
    used: set[str] = set()
    params = []
    for n in ns:
        p = sweep_params(n)
        params.append(p)
        nl = int_hwb_nonlinearity(IntervalParams(n, p.w0, p.s), p.use)
        cf = cf_nonlinearity(n, catalog.primitive_poly_catalog("cf")[n])
        row = [str(n)]
        row += _cited("nl", "mo24", n, include_cited, used) + _cited("nl", "ww24", n, include_cited, used)
        mark = "*" if p.relabelled else ""
        row += [f"{nl}{mark}", fmt2(llb(nl=nl, n=n)), str(cf), fmt2(llb(nl=cf, n=n)), str(crb(n)), fmt2(lcrb(n))]
        t.rows.append(row)
    t.notes = _relabel_note(params) + _footnotes(used)
    return t


def ai_table(ns, *, include_cited: bool = False, max_ai_n: int = 16, budget: int | None = DEFAULT_BUDGET) -> Table:
    header = ["n"]
    if include_cited:
        header += ["cw", "ww"]
    header += ["IntHWB (deg,AI)", "CF (deg,AI)"]
    t = Table("Degree and algebraic immunity", header)
    used: set[str] = set()
    params = []

    def cell(f) -> str:
        d = degree(f)
        if f.n > max_ai_n:
            t.skipped += 1
            return f"({d},skipped)"
        try:
            return f"({d},{algebraic_immunity(f, witness=False, budget=budget).ai})"
        except BudgetExceeded:
            t.skipped += 1
            return f"({d},budget)"

    for n in ns:
        p = sweep_params(n)
        params.append(p)
        f = int_hwb(IntervalParams(n, p.w0, p.s), p.use)
        row = [str(n)] + _cited("ai", "mo24", n, include_cited, used) + _cited("ai", "ww24", n, include_cited, used)
        row += [cell(f) + ("*" if p.relabelled else ""), cell(cf_function(n, catalog.primitive_poly_catalog("cf")[n]))]
        t.rows.append(row)
    t.notes = _relabel_note(params) + _footnotes(used)
    if t.skipped:
        t.notes.append(f"  {t.skipped} AI cell(s) skipped: beyond n={max_ai_n} or the rank budget (raise --max-ai-n/--budget)")
    return t


def high_n_table(ns, *, with_cf: bool = True) -> Table:
    t = Table("High-n IntHWB spot checks", ["n", "w0", "IntHWB nl", "LLB", "listed nl", "CF nl", "LLB", "CRB", "LCRB"])
    for n in ns:
        p = catalog.inthwb_params()[f"hi-{n}"]
        nl = int_hwb_nonlinearity(IntervalParams(n, p.w0, p.s), p.use)
        if with_cf:
            cf = cf_nonlinearity(n, catalog.primitive_poly_catalog("cf")[n])
            cfc = [str(cf), fmt2(llb(nl=cf, n=n))]
        else:
            cfc = ["--", "--"]
        t.rows.append([str(n), str(p.w0), str(nl), fmt2(llb(nl=nl, n=n)), str(p.stated_nl), *cfc, str(crb(n)), fmt2(lcrb(n))])
    t.notes.append("  listed nl: catalogue value for the same parameters, shown for comparison")
    return t
