"""Parameter searches, enumeration filters, w0 sampling and result files.

Sweeps are cut into blocks of consecutive w0 values. Workers evaluate blocks
concurrently (the kernels release the GIL) while the calling thread writes
finished blocks to the results file strictly in coordinate order, so a file
is identical whatever the thread count apart from wall-time fields. A block is persisted as its local
argmax candidates followed by a ``block`` marker; resuming skips every block
whose marker is present.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from collections.abc import Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb
from pathlib import Path

import numpy as np

from . import __version__, CONVENTION, catalog
from .constructions import IntervalParams, hwb_vec, int_hwb, lambda_hwb
from .core import TruthTable, degree, from_hex, nonlinearity, to_hex
from .kernels import scans

log = logging.getLogger(__name__)

MAX_ENUM_R = 5


class ResultsError(ValueError):
    """A results file cannot be trusted (bad header or corrupt record)."""


# -------------------------------------------------------------------- records


@dataclass
class SearchRecord:
    kind: str
    n: int
    r: int
    nl: int
    deg: int
    lambda_id: str | None = None
    lambda_hex: str | None = None
    s: int | None = None
    w0: int | None = None
    ai: int | None = None
    seed: int | None = None
    elapsed_ms: float = 0.0

    def key(self) -> tuple:
        return (self.kind, self.n, self.r, self.lambda_id or self.lambda_hex, self.s, self.w0)

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "SearchRecord":
        fields_ = cls.__dataclass_fields__
        unknown = set(d) - set(fields_)
        if unknown:
            raise ResultsError(f"unknown record fields {sorted(unknown)}")
        return cls(**d)

    def lambda_table(self) -> TruthTable:
        if self.lambda_id is not None:
            return catalog.lambda_by_id(self.lambda_id)
        return from_hex(self.lambda_hex, self.r)

    def rebuild(self) -> TruthTable:
        lam = self.lambda_table()
        if self.kind == "inthwb":
            return int_hwb(IntervalParams(self.n, self.w0, self.s), lam)
        if self.kind == "lambda-hwb":
            return lambda_hwb(self.n, lam)
        raise ValueError(f"cannot rebuild a {self.kind!r} record")

    def verify(self) -> bool:
        """Re-derive nl and deg from the recorded parameters."""
        f = self.rebuild()
        return nonlinearity(f) == self.nl and degree(f) == self.deg


@dataclass(frozen=True)
class SearchOutcome:
    maxnl: int
    argmax: tuple[tuple, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {"maxnl": self.maxnl, "argmax": [list(a) for a in self.argmax]}

    @classmethod
    def from_candidates(cls, cands: Iterable[tuple[int, tuple]]) -> "SearchOutcome":
        best = -1
        members: set[tuple] = set()
        for nl, key in cands:
            if nl > best:
                best, members = nl, {key}
            elif nl == best:
                members.add(key)
        return cls(best if members else 0, tuple(sorted(members)))


# ---------------------------------------------------------------- enumeration


def _table_bits(values: np.ndarray, nbits: int) -> np.ndarray:
    """Strings read as integers with f_0 as the most significant bit."""
    shifts = np.arange(nbits - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8)


def balanced_chunks(r: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """Balanced r-variable tables in lexicographic order of their strings,
    as uint8 arrays of shape (m, 2^r)."""
    if not 1 <= r <= MAX_ENUM_R:
        raise ValueError(f"balanced enumeration supports 1 <= r <= {MAX_ENUM_R}; C(2^r, 2^(r-1)) explodes beyond")
    nbits = 1 << r
    v = (1 << (nbits // 2)) - 1
    while v != -1:
        vals, v = scans.balanced_chunk(v, chunk, nbits)
        yield _table_bits(np.asarray(vals, dtype=np.int64), nbits)


def enumerate_balanced(r: int) -> Iterator[TruthTable]:
    for block in balanced_chunks(r):
        for row in block:
            yield TruthTable(r, row)


def count_balanced(r: int) -> int:
    return comb(1 << r, 1 << (r - 1))


def deg4_nl12_tables(balanced: bool = True) -> np.ndarray:
    """All 5-variable functions of degree 4 and nonlinearity 12 (balanced
    ones by default), as a (count, 32) uint8 array in lexicographic order.

    Built from the split f = (f0, f1) on x_5; see ``scans.deg4_nl12_pairs``.
    """
    packed = np.asarray(scans.deg4_nl12_pairs(balanced), dtype=np.int64)
    # bit i of ``packed`` is f_i; the lexicographic key puts f_0 first
    key = scans.reverse_bits_np(packed, 32)
    order = np.argsort(key, kind="stable")
    bits = ((packed[order][:, None] >> np.arange(32, dtype=np.int64)) & 1).astype(np.uint8)
    return bits


def enumerate_deg4_nl12(balanced: bool = True) -> Iterator[TruthTable]:
    for row in deg4_nl12_tables(balanced):
        yield TruthTable(5, row)


# ------------------------------------------------------------------ helpers


def _threads(threads: int | None) -> int:
    return max(1, threads or os.cpu_count() or 1)


def _as_rows(S, r: int | None) -> Iterator[np.ndarray]:
    """Normalise a stream of lambdas into uint8 blocks of rows."""
    if isinstance(S, np.ndarray):
        if S.ndim != 2:
            raise ValueError("expected a (count, 2^r) array")
        step = 1 << 14
        for i in range(0, S.shape[0], step):
            yield np.ascontiguousarray(S[i : i + step], dtype=np.uint8)
        return
    buf: list[np.ndarray] = []
    for item in S:
        if isinstance(item, np.ndarray) and item.ndim == 2:
            if buf:
                yield np.stack(buf)
                buf = []
            yield np.ascontiguousarray(item, dtype=np.uint8)
            continue
        t = item if isinstance(item, TruthTable) else TruthTable.from_string(str(item))
        if r is not None and t.n != r:
            raise ValueError(f"lambda with {t.n} variables in an r={r} search")
        buf.append(t.table)
        if len(buf) == 1 << 12:
            yield np.stack(buf)
            buf = []
    if buf:
        yield np.stack(buf)


def lambda_label(table: np.ndarray, r: int) -> str:
    """Catalog id (``5,2`` or ``~5,2``) when known, else the hex string."""
    t = TruthTable(r, table)
    if r == 5:
        for name, lam in catalog.lambda_catalog().items():
            if lam == t:
                return name
            if lam.complement() == t:
                return "~" + name
    return to_hex(t)


# ------------------------------------------------------------------ lambda search


def search_lambda(n: int, S, r: int | None = None, *, threads: int | None = None) -> SearchOutcome:
    """Maximum nl of lambda-HWB_{n,r} over the candidates with degree n-1,
    and every lambda reaching it (reported by catalog id or hex)."""
    hww_cache: dict[int, np.ndarray] = {}
    jobs = []
    with ThreadPoolExecutor(_threads(threads)) as pool:
        for block in _as_rows(S, r):
            rr = block.shape[1].bit_length() - 1
            if rr > n:
                raise ValueError("r exceeds n")
            if rr not in hww_cache:
                hww_cache[rr] = np.ascontiguousarray(hwb_vec(n, rr).entries)
            jobs.append((block, rr, pool.submit(scans.scan_lambda, n, hww_cache[rr], block)))
        cands = []
        for block, rr, fut in jobs:
            nls, tops = fut.result()
            ok = np.flatnonzero(np.asarray(tops) == n - 1)
            if ok.size == 0:
                continue
            best = int(np.asarray(nls)[ok].max())
            for i in ok[np.asarray(nls)[ok] == best]:
                cands.append((best, (lambda_label(block[i], rr),)))
    return SearchOutcome.from_candidates(cands)


# ----------------------------------------------------------- results storage


class ResultsStore:
    """JSON-lines file: a header line, then records and block markers."""

    def __init__(self, path: str | Path, header: dict):
        self.path = Path(path)
        self.header = dict(header)
        self.records: dict[tuple, SearchRecord] = {}
        self.done: set[tuple] = set()
        self._load()

    def _load(self) -> None:
        if not self.path.exists() or self.path.stat().st_size == 0:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(json.dumps({"kind": "header", **self.header}, sort_keys=True) + "\n")
            return
        raw = self.path.read_bytes()
        lines = raw.split(b"\n")
        good_end = 0
        parsed = []
        truncated = False
        for idx, line in enumerate(lines):
            if not line.strip():
                good_end += len(line) + 1
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict) or "kind" not in obj:
                    raise ValueError("not a record")
            except ValueError:
                if all(not rest.strip() for rest in lines[idx + 1 :]):
                    log.warning("%s: dropping corrupt trailing line %d", self.path, idx + 1)
                    with open(self.path, "r+b") as fh:
                        fh.truncate(good_end)
                    truncated = True
                    break
                raise ResultsError(f"{self.path}: corrupt record on line {idx + 1}") from None
            parsed.append(obj)
            good_end += len(line) + 1
        if not truncated and not raw.endswith(b"\n") and parsed:
            with open(self.path, "ab") as fh:
                fh.write(b"\n")
        if not parsed:
            self.path.write_text(json.dumps({"kind": "header", **self.header}, sort_keys=True) + "\n")
            return
        head = parsed[0]
        if head.get("kind") != "header":
            raise ResultsError(f"{self.path}: missing header line")
        if head.get("spec_hash") != self.header.get("spec_hash"):
            raise ResultsError(f"{self.path}: results belong to a different sweep (spec hash mismatch)")
        for obj in parsed[1:]:
            if obj["kind"] == "block":
                self.done.add(_block_key(obj))
            else:
                rec = SearchRecord.from_dict(obj)
                self.records.setdefault(rec.key(), rec)

    def write_block(self, recs: list[SearchRecord], marker: dict) -> None:
        out = []
        for rec in recs:
            if rec.key() not in self.records:
                self.records[rec.key()] = rec
                out.append(rec.to_json())
        out.append(json.dumps(marker, sort_keys=True))
        with open(self.path, "a") as fh:
            fh.write("\n".join(out) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self.done.add(_block_key(marker))

    def outcome(self) -> SearchOutcome:
        return SearchOutcome.from_candidates(
            (r.nl, (r.lambda_id, r.s, r.w0)) for r in self.records.values() if r.kind == "inthwb"
        )


def _block_key(obj: dict) -> tuple:
    return (obj["lambda_id"], obj["s"], obj["w0"])


def results_dir() -> Path:
    return Path(os.environ.get("BOOLFN_RESULTS_DIR", "results"))


# ------------------------------------------------------------------ IntHWB sweep


@dataclass(frozen=True)
class SweepSpec:
    n: int
    lambdas: tuple[str, ...]
    s_values: tuple[int, ...]
    w0_start: int
    w0_stop: int
    block: int

    def to_dict(self) -> dict:
        return {
            "kind": "inthwb-sweep",
            "n": self.n,
            "lambdas": list(self.lambdas),
            "s_values": list(self.s_values),
            "w0_start": self.w0_start,
            "w0_stop": self.w0_stop,
            "block": self.block,
            "convention": CONVENTION,
        }

    def hash(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()[:16]

    def header(self) -> dict:
        return {"tool": "boolfn", "version": __version__, "convention": CONVENTION, "spec_hash": self.hash(), "spec": self.to_dict()}

    def blocks(self) -> Iterator[tuple[str, int, int, int]]:
        for lam in self.lambdas:
            for s in self.s_values:
                for start in range(self.w0_start, self.w0_stop, self.block):
                    yield lam, s, start, min(start + self.block, self.w0_stop)


def default_lambdas(n: int) -> tuple[str, ...]:
    """The lambda pair listed for n together with both complements."""
    pairs = catalog.lhwb_pairs()
    if n not in pairs:
        raise ValueError(f"no catalogued lambda pair for n={n}")
    ids = pairs[n][0]
    return tuple(ids) + tuple("~" + i for i in ids)


def _scan_block(n: int, lam_id: str, s: int, start: int, stop: int, hww: np.ndarray, rev: np.ndarray):
    t0 = time.perf_counter()
    lam = np.ascontiguousarray(catalog.lambda_by_id(lam_id).table)
    w0s = np.arange(start, stop, dtype=np.int64)
    nls, tops = scans.scan_inthwb(n, s, w0s, lam, hww, rev)
    nls = np.asarray(nls)
    ok = np.flatnonzero(np.asarray(tops) == n - 1)
    best = int(nls[ok].max()) if ok.size else -1
    hits = w0s[ok[nls[ok] == best]] if ok.size else w0s[:0]
    return best, [int(w) for w in hits], (time.perf_counter() - t0) * 1e3


def search_inthwb(
    n: int,
    L: Iterable[str] | None = None,
    *,
    s_values: Iterable[int] | None = None,
    w0_range: tuple[int, int] | None = None,
    block: int = 1024,
    threads: int | None = None,
    results: str | Path | None = None,
    stop_after: int | None = None,
) -> SearchOutcome:
    """IntHWB sweep: lambda in L, s in 1..floor(n/2), w0 over Z_(2^n); keeps the
    maximum nl among functions of degree n - 1 and every triple reaching it.

    ``results`` names a JSON-lines file to persist to and resume from.
    ``stop_after`` stops once that many new blocks are written (used to test
    interrupted runs)."""
    lambdas = tuple(catalog.normalize_lambda_id(x) for x in (L or default_lambdas(n)))
    svals = tuple(s_values or range(1, n // 2 + 1))
    lo, hi = w0_range or (0, 1 << n)
    spec = SweepSpec(n, lambdas, svals, lo, hi, block)
    store = ResultsStore(results, spec.header()) if results is not None else None
    hww = np.ascontiguousarray(hwb_vec(n, 5).entries)
    rev = scans.reverse_bits_np(np.arange(1 << n, dtype=np.int64), n)
    todo = [b for b in spec.blocks() if store is None or (b[0], b[1], b[2]) not in store.done]
    if stop_after is not None:
        todo = todo[:stop_after]
    cands: list[tuple[int, tuple]] = []
    width = _threads(threads)
    with ThreadPoolExecutor(width) as pool:
        futures = []
        it = iter(todo)
        for b in it:
            futures.append((b, pool.submit(_scan_block, n, *b, hww, rev)))
            if len(futures) >= 2 * width:
                break
        while futures:
            b, fut = futures.pop(0)
            nxt = next(it, None)
            if nxt is not None:
                futures.append((nxt, pool.submit(_scan_block, n, *nxt, hww, rev)))
            best, hits, ms = fut.result()
            lam, s, start, stop = b
            per = round(ms / max(1, stop - start), 3)
            recs = [SearchRecord("inthwb", n, 5, best, n - 1, lambda_id=lam, s=s, w0=w, elapsed_ms=per) for w in hits]
            if store is not None:
                marker = {"kind": "block", "n": n, "lambda_id": lam, "s": s, "w0": start, "stop": stop, "nl": best, "count": len(hits), "elapsed_ms": round(ms, 3)}
                store.write_block(recs, marker)
            cands.extend((r.nl, (r.lambda_id, r.s, r.w0)) for r in recs)
    if store is not None:
        return store.outcome()
    return SearchOutcome.from_candidates(cands)


def sweep_complete(n: int, results: str | Path, **kw) -> bool:
    lambdas = tuple(catalog.normalize_lambda_id(x) for x in (kw.get("L") or default_lambdas(n)))
    svals = tuple(kw.get("s_values") or range(1, n // 2 + 1))
    lo, hi = kw.get("w0_range") or (0, 1 << n)
    spec = SweepSpec(n, lambdas, svals, lo, hi, kw.get("block", 1024))
    store = ResultsStore(results, spec.header())
    return all((b[0], b[1], b[2]) in store.done for b in spec.blocks())


def verify_outcome(n: int, outcome: SearchOutcome) -> bool:
    """Rebuild every IntHWB argmax member and recheck nl and deg = n - 1."""
    for lam, s, w0 in outcome.argmax:
        f = int_hwb(IntervalParams(n, w0, s), lam)
        if nonlinearity(f) != outcome.maxnl or degree(f) != n - 1:
            return False
    return True


# -------------------------------------------------------------- w0 sampling


def _sample_one(n: int, s: int, lam_id: str, w0: int, with_ai: bool, seed: int) -> SearchRecord:
    from .algres import algebraic_immunity

    t0 = time.perf_counter()
    f = int_hwb(IntervalParams(n, w0, s), lam_id)
    ai = algebraic_immunity(f, witness=False).ai if with_ai else None
    ms = (time.perf_counter() - t0) * 1e3
    return SearchRecord("inthwb", n, 5, nonlinearity(f), degree(f), lambda_id=lam_id, s=s, w0=w0, ai=ai, seed=seed, elapsed_ms=round(ms, 3))


def draw_w0(n: int, count: int, seed: int) -> list[int]:
    """Uniform draws from Z_(2^n) with numpy's PCG64 generator."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return [int(w) for w in rng.integers(0, 1 << n, size=count, dtype=np.int64)]


def sample_w0(
    n: int,
    s: int,
    lam: str,
    count: int,
    seed: int,
    *,
    with_ai: bool | None = None,
    threads: int | None = None,
) -> list[SearchRecord]:
    lam_id = catalog.normalize_lambda_id(lam)
    with_ai = n <= 16 if with_ai is None else with_ai
    w0s = draw_w0(n, count, seed)
    with ThreadPoolExecutor(_threads(threads)) as pool:
        return list(pool.map(lambda w: _sample_one(n, s, lam_id, w, with_ai, seed), w0s))


def write_records(path: str | Path, header: dict, recs: Iterable[SearchRecord]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(json.dumps({"kind": "header", **header}, sort_keys=True) + "\n")
        for r in recs:
            fh.write(r.to_json() + "\n")
