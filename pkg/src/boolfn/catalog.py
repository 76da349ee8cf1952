"""Embedded data: the twelve 5-variable lambdas, primitive polynomials and
named IntHWB parameter sets. Everything is validated when first loaded."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .core import AnfCoefficients, TruthTable, degree, moebius, nonlinearity
from .gf2poly import Gf2Poly


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class Record:
    kind: str
    name: str
    n: int
    rep: str
    fingerprint: dict[str, str]


@dataclass(frozen=True)
class InthwbParams:
    name: str
    n: int
    s: int
    w0: int
    lambda_id: str  # as printed
    stated_nl: int
    use: str  # lambda that reproduces stated_nl

    @property
    def relabelled(self) -> bool:
        return self.use != self.lambda_id


@dataclass(frozen=True)
class LambdaCatalog:
    tables: dict[str, TruthTable]
    anfs: dict[str, AnfCoefficients]

    def __getitem__(self, key: str) -> TruthTable:
        return self.tables[normalize_lambda_id(key)]

    def __iter__(self):
        return iter(self.tables)

    def __len__(self) -> int:
        return len(self.tables)

    def items(self):
        return self.tables.items()


def normalize_lambda_id(key: str) -> str:
    """Accepts ``5,2``, ``5.2``, ``lambda_5_2`` and the complement marker
    ``~5,2``."""
    k = key.strip().replace("lambda", "").replace("_", ",").replace(".", ",").strip(",")
    neg = k.startswith("~")
    k = k.lstrip("~")
    parts = [p for p in k.split(",") if p]
    if len(parts) == 1:
        parts = ["5", parts[0]]
    out = f"{int(parts[0])},{int(parts[1])}"
    return "~" + out if neg else out


def _fingerprint(text: str) -> dict[str, str]:
    out = {}
    for item in text.split(";"):
        if "=" in item:
            k, v = item.split("=", 1)
            out[k] = v
        elif item:
            out[item] = ""
    return out


def _read(name: str) -> list[list[str]]:
    rows = []
    text = resources.files("boolfn.data").joinpath(name).read_text()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            rows.append(line.split(None, 4))
    return rows


@lru_cache(maxsize=None)
def records() -> tuple[Record, ...]:
    out = []
    for parts in _read("catalog.txt"):
        if len(parts) < 4:
            raise CatalogError(f"malformed catalog line: {' '.join(parts)}")
        fp = _fingerprint(parts[4]) if len(parts) > 4 else {}
        out.append(Record(parts[0], parts[1], int(parts[2]), parts[3], fp))
    return tuple(out)


@lru_cache(maxsize=None)
def lambda_catalog() -> LambdaCatalog:
    tables: dict[str, TruthTable] = {}
    anfs: dict[str, AnfCoefficients] = {}
    for rec in records():
        if rec.kind == "lambda":
            t = TruthTable.from_string(rec.rep)
            want = {k: int(v) for k, v in rec.fingerprint.items()}
            got = {"wt": t.weight, "deg": degree(t), "nl": nonlinearity(t)}
            if any(got[k] != want[k] for k in want):
                raise CatalogError(f"lambda {rec.name}: expected {want}, found {got}")
            tables[rec.name] = t
        elif rec.kind == "anf":
            anfs[rec.name] = AnfCoefficients.from_text(rec.n, rec.rep)
    for name, a in anfs.items():
        if name not in tables or moebius(tables[name]) != a:
            raise CatalogError(f"ANF of lambda {name} does not match its truth table")
    return LambdaCatalog(tables, anfs)


def lambda_by_id(key: str) -> TruthTable:
    k = normalize_lambda_id(key)
    t = lambda_catalog()[k.lstrip("~")]
    return t.complement() if k.startswith("~") else t


@lru_cache(maxsize=None)
def primitive_poly_catalog(tag: str | None = None) -> dict[int, Gf2Poly]:
    """Degree -> primitive polynomial; ``tag="cf"`` keeps the 13..30 set used
    for the Carlet-Feng tables."""
    out = {}
    for rec in records():
        if rec.kind != "poly" or (tag is not None and tag not in rec.fingerprint):
            continue
        p = Gf2Poly.parse(rec.rep)
        if p.degree != rec.n:
            raise CatalogError(f"poly {rec.name}: degree {p.degree} != {rec.n}")
        if "primitive" in rec.fingerprint and not p.is_primitive():
            raise CatalogError(f"poly {rec.name} ({p.to_text()}) is not primitive")
        out[rec.n] = p
    return out


def poly_for(n: int) -> Gf2Poly:
    cat = primitive_poly_catalog()
    if n not in cat:
        raise CatalogError(f"no catalog polynomial of degree {n}")
    return cat[n]


@lru_cache(maxsize=None)
def inthwb_params() -> dict[str, InthwbParams]:
    out = {}
    for rec in records():
        if rec.kind != "inthwb":
            continue
        kv = _fingerprint(rec.rep)
        lam = normalize_lambda_id(kv["lambda"])
        use = normalize_lambda_id(rec.fingerprint.get("use", lam))
        out[rec.name] = InthwbParams(
            rec.name, rec.n, int(kv["s"]), int(kv["w0"]), lam, int(rec.fingerprint["nl"]), use
        )
    return out


@lru_cache(maxsize=None)
def lhwb_pairs() -> dict[int, tuple[tuple[str, ...], int]]:
    """n -> (lambda ids, stated nl) for the r = 5 post-processing search."""
    out = {}
    for rec in records():
        if rec.kind == "lhwb":
            ids = tuple(normalize_lambda_id(x) for x in _fingerprint(rec.rep)["lambdas"].split("|"))
            out[rec.n] = (ids, int(rec.fingerprint["nl"]))
    return out


@lru_cache(maxsize=None)
def cited() -> dict:
    """Values from prior work: {(table, column, n): value} plus footnotes."""
    vals: dict = {}
    notes: dict = {}
    for parts in _read("cited.txt"):
        if parts[0] == "note":
            notes[parts[1]] = " ".join(parts[3:])
        else:
            vals[(parts[0], parts[1], int(parts[2]))] = (parts[3], parts[4] if len(parts) > 4 else "")
    return {"values": vals, "notes": notes}


def verify_all() -> list[str]:
    """Load and validate every catalog; returns one line per checked entry."""
    lines = []
    cat = lambda_catalog()
    for name, t in cat.items():
        lines.append(f"lambda {name}: wt={t.weight} deg={degree(t)} nl={nonlinearity(t)} anf=ok")
    for n, p in sorted(primitive_poly_catalog().items()):
        lines.append(f"poly {n}: {p.to_text()} primitive")
    for name, p in inthwb_params().items():
        lines.append(f"inthwb {name}: n={p.n} s={p.s} w0={p.w0} lambda={p.lambda_id} stated nl={p.stated_nl}")
    return lines
