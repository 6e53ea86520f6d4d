#!/usr/bin/env python3
"""Throughput of the sampling kernels, numba vs the pure-numpy fallback.

Single-mode run (current process mode):

    python benchmarks/bench_kernels.py --samples 50000

Side-by-side comparison (spawns one subprocess per mode):

    python benchmarks/bench_kernels.py --compare
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

CASES = [
    ("cont-sys", 2, "rh"),
    ("cont-sys", 6, "eigen"),
    ("cont-eq", 8, "rh"),
    ("disc-eq", 8, "rh"),
    ("disc-sys", 3, "rh"),
]


def bench_current(samples: int) -> dict:
    from stabindex._accel import ACCEL_MODE
    from stabindex.models import ModelFamily, batch_indices

    rng = np.random.default_rng(0)
    rows = []
    for kind, n, method in CASES:
        family = ModelFamily(kind, n)
        params = rng.standard_normal((samples, family.param_count))
        batch_indices(family, params[:256], method)  # warm up / compile
        t0 = time.perf_counter()
        batch_indices(family, params, method)
        dt = time.perf_counter() - t0
        rows.append(
            {
                "case": f"{kind} n={n} [{method}]",
                "samples_per_s": samples / dt,
            }
        )
    return {"mode": ACCEL_MODE, "rows": rows}


def _spawn(samples: int, disable_numba: bool) -> dict:
    env = dict(os.environ)
    if disable_numba:
        env["STABINDEX_NO_NUMBA"] = "1"
    else:
        env.pop("STABINDEX_NO_NUMBA", None)
    proc = subprocess.run(
        [sys.executable, __file__, "--samples", str(samples), "--json"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(proc.stdout)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=50_000)
    parser.add_argument("--compare", action="store_true")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    args = parser.parse_args()

    if args.compare:
        fast = _spawn(args.samples, disable_numba=False)
        slow = _spawn(args.samples, disable_numba=True)
        print(f"samples per call: {args.samples}")
        print(f"{'case':<26} {fast['mode']:>14} {slow['mode']:>14} {'speedup':>9}")
        for a, b in zip(fast["rows"], slow["rows"]):
            ratio = a["samples_per_s"] / b["samples_per_s"]
            print(
                f"{a['case']:<26} {a['samples_per_s']:>12.0f}/s {b['samples_per_s']:>12.0f}/s "
                f"{ratio:>8.1f}x"
            )
        return 0

    result = bench_current(args.samples)
    if args.json:
        print(json.dumps(result))
        return 0
    print(f"mode: {result['mode']}, samples per call: {args.samples}")
    for row in result["rows"]:
        print(f"{row['case']:<26} {row['samples_per_s']:>12.0f} samples/s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
