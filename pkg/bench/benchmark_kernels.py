"""Benchmark the row-reduction kernel: numba panel vs pure-numpy panel.

The numpy backend is measured in a subprocess with SCROLLRES_BACKEND=numpy,
exactly the way a numba-less install would run.  Usage:

    python3 bench/benchmark_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

SIZES = [(300, 300), (1000, 800), (2800, 1000)]
P = 10007

WORKER = r"""
import json, sys, time
import numpy as np
from scrollres._kernels import BACKEND, rref_mod

sizes = json.loads(sys.argv[1])
repeat = int(sys.argv[2])
rng = np.random.default_rng(0)
out = {"backend": BACKEND, "times": {}}
for m, n in sizes:
    a = rng.integers(0, 10007, size=(m, n)).astype(np.int64)
    rref_mod(a.copy(), 10007)  # warm up (jit compile, caches)
    best = min(
        (lambda t0: (rref_mod(a.copy(), 10007), time.perf_counter() - t0)[1])(
            time.perf_counter()
        )
        for _ in range(repeat)
    )
    out["times"][f"{m}x{n}"] = best
print(json.dumps(out))
"""


def run_backend(backend, repeat):
    env = dict(os.environ, SCROLLRES_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(SIZES), str(repeat)],
        capture_output=True,
        text=True,
        env=env,
    )
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    return json.loads(out.stdout)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    fast = run_backend("auto", args.repeat)
    slow = run_backend("numpy", args.repeat)
    print(f"RREF over GF({P}), best of {args.repeat}")
    print(f"{'size':>12} {fast['backend']:>10} {'numpy':>10} {'speedup':>8}")
    for key in fast["times"]:
        tf, tn = fast["times"][key], slow["times"][key]
        print(f"{key:>12} {tf:>9.3f}s {tn:>9.3f}s {tn / tf:>7.2f}x")
    if fast["backend"] == "numpy":
        print("note: numba unavailable, both columns ran the numpy panel")


if __name__ == "__main__":
    main()
