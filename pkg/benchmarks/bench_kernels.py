"""Compare the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because the choice is fixed at
import time by ``BOOLFN_DISABLE_NUMBA``. The numba column excludes JIT
compilation (one warm-up call per workload).

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def workloads(quick: bool):
    import numpy as np

    from boolfn import TruthTable, moebius, nonlinearity, walsh_transform
    from boolfn.algres import algebraic_immunity, faa_profile
    from boolfn.constructions import IntervalParams, cf_nonlinearity, int_hwb, int_hwb_nonlinearity
    from boolfn.search import balanced_chunks, search_lambda

    rng = np.random.default_rng(7)
    big = 16 if quick else 20
    f_big = TruthTable(big, rng.integers(0, 2, 1 << big, dtype=np.uint8))
    p13 = IntervalParams(13, 254, 4)
    f11 = int_hwb(IntervalParams(11, 100, 3), "5,2")
    lam4 = list(balanced_chunks(4))[0][:512]
    return {
        f"walsh n={big}": lambda: walsh_transform(f_big),
        f"moebius n={big}": lambda: moebius(f_big),
        f"nl n={big}": lambda: nonlinearity(f_big),
        "inthwb nl n=18 (packed)": lambda: int_hwb_nonlinearity(IntervalParams(18, 1234, 5), "5,7"),
        "cf nl n=18 (packed)": lambda: cf_nonlinearity(18),
        "inthwb nl n=13 x32": lambda: [int_hwb_nonlinearity(IntervalParams(13, w, 4), "5,2") for w in range(32)],
        "lambda search n=12, 512 x r=4": lambda: search_lambda(12, lam4, 4, threads=1),
        "AI n=11": lambda: algebraic_immunity(f11),
        "FAA profile n=11": lambda: faa_profile(f11),
        **({} if quick else {"AI n=13": lambda: algebraic_immunity(int_hwb(p13, "5,2"), witness=False)}),
    }


def run_child(repeat: int, quick: bool) -> None:
    from boolfn import BACKEND

    out = {"backend": BACKEND, "times": {}}
    for name, fn in workloads(quick).items():
        fn()  # warm-up (JIT compile / caches)
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        out["times"][name] = best
    print(json.dumps(out))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller transforms, skip the n=13 AI")
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    a = ap.parse_args()
    if a.child:
        run_child(a.repeat, a.quick)
        return
    results = {}
    for backend, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, BOOLFN_DISABLE_NUMBA=flag)
        cmd = [sys.executable, __file__, "--child", "--repeat", str(a.repeat)] + (["--quick"] if a.quick else [])
        res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        data = json.loads(res.stdout.strip().splitlines()[-1])
        assert data["backend"] == backend, data["backend"]
        results[backend] = data["times"]
    names = list(results["numba"])
    w = max(len(s) for s in names)
    print(f"{'workload'.ljust(w)}  {'numba s':>9}  {'numpy s':>9}  {'speedup':>8}")
    for s in names:
        nb, npy = results["numba"][s], results["numpy"][s]
        print(f"{s.ljust(w)}  {nb:9.4f}  {npy:9.4f}  {npy / nb:7.1f}x")


if __name__ == "__main__":
    main()
