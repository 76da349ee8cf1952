from __future__ import annotations

import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from boolfn import TruthTable  # noqa: E402

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def tables(draw, min_n: int = 1, max_n: int = 8, balanced: bool = False) -> TruthTable:
    n = draw(st.integers(min_n, max_n))
    N = 1 << n
    if balanced:
        perm = draw(st.permutations(range(N)))
        bits = np.zeros(N, dtype=np.uint8)
        bits[list(perm[: N // 2])] = 1
        return TruthTable(n, bits)
    raw = draw(st.binary(min_size=(N + 7) // 8, max_size=(N + 7) // 8))
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:N]
    return TruthTable(n, bits)


def random_table(rng: np.random.Generator, n: int) -> TruthTable:
    return TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def results_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("BOOLFN_RESULTS_DIR", str(tmp_path))
    return tmp_path


# ------------------------------------------------------- acceptance report

ACCEPTANCE: list[str] = []


@pytest.fixture
def accept():
    """``accept(cid, ok, detail)`` records one PASS/FAIL line and asserts;
    with ``strict=False`` it only records and returns ``ok``."""

    def report(cid: str, ok: bool, detail: str, strict: bool = True) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {cid}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
        if strict:
            assert ok, line
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
