"""Benchmark the compiled kernels against the pure-numpy fallback.

Run from the repo root:

    python benchmarks/bench_kernels.py

Spawns a subprocess with LFMAX_PURE_PYTHON=1 for the fallback timings so
both backends are measured in a fresh interpreter.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import textwrap

WORKLOADS = textwrap.dedent(
    """
    import json, time
    import numpy as np
    from lfmax import kernels
    from lfmax import ensembles as es

    rng = np.random.default_rng(12345)
    results = {"backend": kernels.BACKEND}

    def clock(label, fn, repeats=3):
        best = min(_time_once(fn) for _ in range(repeats))
        results[label] = best

    def _time_once(fn):
        t0 = time.perf_counter()
        fn()
        return time.perf_counter() - t0

    angles = rng.random((256, 100)) * 2.0 * np.pi
    thetas = np.linspace(0.0, 2.0 * np.pi, 800, endpoint=False)
    clock("grid_eval", lambda: kernels.logabs_charpoly_grid(angles[0], thetas))
    clock("max_charpoly_batch", lambda: kernels.max_logabs_charpoly_batch(angles))

    alphas = es.sample_verblunsky(100, 256, rng)
    clock("max_szego_batch", lambda: kernels.max_logabs_szego_batch(alphas))

    ts = np.linspace(100.0, 5000.0, 2000)
    ths = np.ones_like(ts)
    clock("rs_main_sum", lambda: kernels.rs_main_sum(ts, ths))

    ns = np.arange(1, 200001, dtype=np.int64)
    clock("kronecker_many", lambda: kernels.kronecker_many(-163, ns))

    print(json.dumps(results))
    """
)


def run_backend(pure: bool) -> dict:
    env = dict(os.environ)
    if pure:
        env["LFMAX_PURE_PYTHON"] = "1"
    else:
        env.pop("LFMAX_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", WORKLOADS], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    compiled = run_backend(pure=False)
    fallback = run_backend(pure=True)
    if compiled["backend"] == fallback["backend"]:
        print("note: compiled extension unavailable; comparing numpy to itself")
    print(f"{'kernel':<22}{compiled['backend']:>12}{fallback['backend']:>12}{'speedup':>10}")
    for key in compiled:
        if key == "backend":
            continue
        a, b = compiled[key], fallback[key]
        print(f"{key:<22}{a:>12.5f}{b:>12.5f}{b / a:>10.2f}x")


if __name__ == "__main__":
    main()
