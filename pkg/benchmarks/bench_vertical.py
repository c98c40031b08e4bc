"""Benchmark the vertical integrator: compiled kernel vs numpy fallback.

The kernel backend is chosen at import time from the SRGO_NO_NUMBA
environment variable, so each configuration runs in a subprocess and the
parent only aggregates timings.

Usage: python benchmarks/bench_vertical.py [--steps N] [--repeats R]
"""

import argparse
import json
import os
import subprocess
import sys
import textwrap

MODELS = ["heisenberg", "cartan", "free_step2_rank4", "free_step2_rank6"]

WORKER = textwrap.dedent("""
    import json, sys, time
    import numpy as np
    import srgo

    steps, repeats = int(sys.argv[1]), int(sys.argv[2])
    out = {}
    for name in json.loads(sys.argv[3]):
        s = srgo.load_model(name).structure
        rng = np.random.default_rng(0)
        p0 = srgo.Momentum(srgo.sample_momenta(s, 1, rng)[0], s)
        T = steps * 1e-3
        srgo.integrate_vertical(p0, T, 1e-3)  # warm-up / JIT compile
        best = min(
            (lambda t0: (srgo.integrate_vertical(p0, T, 1e-3), time.perf_counter() - t0))(
                time.perf_counter()
            )[1]
            for _ in range(repeats)
        )
        out[name] = best
    print(json.dumps(out))
""")


def run_backend(no_numba, steps, repeats):
    env = dict(os.environ)
    env["SRGO_NO_NUMBA"] = "1" if no_numba else ""
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(steps), str(repeats),
         json.dumps(MODELS)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=100_000,
                    help="RK4 steps per integration (default 100000)")
    ap.add_argument("--repeats", type=int, default=3,
                    help="repetitions per model; best time is kept")
    args = ap.parse_args()

    fast = run_backend(False, args.steps, args.repeats)
    slow = run_backend(True, args.steps, args.repeats)

    width = max(len(m) for m in MODELS)
    print(f"{args.steps} RK4 steps, best of {args.repeats}")
    print(f"{'model':<{width}}  {'compiled':>10}  {'numpy':>10}  {'speedup':>8}")
    for name in MODELS:
        print(f"{name:<{width}}  {fast[name]:>9.4f}s  {slow[name]:>9.4f}s"
              f"  {slow[name] / fast[name]:>7.1f}x")


if __name__ == "__main__":
    main()
