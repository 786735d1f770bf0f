"""Compare the numba and pure-numpy F_p kernels.

    python benchmarks/bench_kernels.py            # both kernels, in-process
    python benchmarks/bench_kernels.py --end-to-end

The kernel choice is passed explicitly to ``linalg.rref``; ``--end-to-end`` reruns a
full H^1 + Hecke computation in subprocesses with and without
``BIANCHI_MODL_DISABLE_NUMBA=1``.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import subprocess
import sys
import time

import numpy as np

from bianchi_modl import linalg
from bianchi_modl._accel import use_numba


def bench_rref(shapes, p: int, repeat: int, rng) -> list[tuple]:
    rows = []
    for m, n in shapes:
        A = rng.integers(0, p, size=(m, n), dtype=np.int64)
        R1, piv1 = linalg.rref(A, p, accel=False)
        timings = {}
        modes = [False] + ([True] if use_numba() else [])
        for accel in modes:
            linalg.rref(A, p, accel=accel)  # warm up / compile
            t = time.perf_counter()
            for _ in range(repeat):
                R, piv = linalg.rref(A, p, accel=accel)
            timings[accel] = (time.perf_counter() - t) / repeat
            assert np.array_equal(R, R1) and list(piv) == list(piv1)
        rows.append((m, n, p, timings[False], timings.get(True)))
    return rows


def end_to_end() -> None:
    cmd = [sys.executable, "-m", "bianchi_modl", "eigensystems", "--d", "2", "--ell", "11", "--level", "G0:11", "--primes-up-to", "20"]
    for label, env in (("numba", {}), ("numpy", {"BIANCHI_MODL_DISABLE_NUMBA": "1"})):
        t = time.perf_counter()
        out = subprocess.run(cmd, env={**os.environ, **env}, capture_output=True, check=True).stdout
        print("end-to-end %-6s %.2fs  output sha256 %s" % (label, time.perf_counter() - t, hashlib.sha256(out).hexdigest()[:12]))


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    shapes = [(50, 50), (200, 200), (400, 800), (1000, 600)]
    print("%6s %6s %4s %12s %12s %8s" % ("rows", "cols", "p", "numpy (s)", "numba (s)", "speedup"))
    for p in (3, 11):
        for m, n, p_, tn, tb in bench_rref(shapes, p, args.repeat, rng):
            sb = "%12.4f" % tb if tb is not None else "%12s" % "n/a"
            sp = "%7.1fx" % (tn / tb) if tb else "%8s" % "n/a"
            print("%6d %6d %4d %12.4f %s %s" % (m, n, p_, tn, sb, sp))
    if args.end_to_end:
        end_to_end()


if __name__ == "__main__":
    main()
