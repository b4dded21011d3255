"""Benchmark the fitness solver on both kernel paths.

The kernel (numba or pure numpy) is chosen when ecomplex is first
imported, so each path runs in its own subprocess with the
ECOMPLEX_NO_NUMBA flag set accordingly. Numba timings exclude the
one-time JIT compile via a warmup solve.

Usage: python benchmarks/bench_solver.py [--repeats 5]
"""

import argparse
import json
import os
import subprocess
import sys

PAYLOAD = r"""
import json
import sys
import time

import numpy as np

from ecomplex import _kernels
from ecomplex.efc import SolverConfig, solve_fitness
from ecomplex.matrixcore import BinaryBipartite

def random_connected(rng, n_rows, n_cols, density):
    while True:
        a = rng.random((n_rows, n_cols)) < density
        if a.any(axis=1).all() and a.any(axis=0).all():
            break
    return BinaryBipartite.from_pairs(
        "county", "industry",
        [(f"r{i:04d}", f"c{j:04d}")
         for i in range(n_rows) for j in range(n_cols) if a[i, j]],
    )

repeats = int(sys.argv[1])
cases = [(100, 80, 0.3), (500, 220, 0.15), (2000, 600, 0.05)]
rng = np.random.default_rng(0)
matrices = [random_connected(rng, *c) for c in cases]
cfg = SolverConfig(max_iterations=200, rel_tolerance=1e-300)

solve_fitness(matrices[0], cfg)  # warmup (JIT compile on the numba path)

out = {"kernel": "numba" if _kernels.HAVE_NUMBA else "numpy", "cases": []}
for (nr, nc, dens), m in zip(cases, matrices):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        solve_fitness(m, cfg)
        times.append(time.perf_counter() - t0)
    out["cases"].append({
        "shape": f"{nr}x{nc}", "links": len(m.cells),
        "best_s": min(times), "mean_s": sum(times) / len(times),
    })
print(json.dumps(out))
"""


def run_path(force_numpy, repeats):
    env = dict(os.environ, ECOMPLEX_NO_NUMBA="1" if force_numpy else "0")
    proc = subprocess.run(
        [sys.executable, "-c", PAYLOAD, str(repeats)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    results = [run_path(False, args.repeats), run_path(True, args.repeats)]
    if results[0]["kernel"] == results[1]["kernel"]:
        print("numba unavailable; both runs used the numpy path")

    print(f"{'shape':>10} {'links':>8} " + " ".join(
        f"{r['kernel'] + ' best':>12} {r['kernel'] + ' mean':>12}" for r in results
    ))
    for i, case in enumerate(results[0]["cases"]):
        row = f"{case['shape']:>10} {case['links']:>8}"
        for r in results:
            c = r["cases"][i]
            row += f" {c['best_s'] * 1e3:>10.2f}ms {c['mean_s'] * 1e3:>10.2f}ms"
        print(row)
    b0 = sum(c["best_s"] for c in results[0]["cases"])
    b1 = sum(c["best_s"] for c in results[1]["cases"])
    print(f"total best: {results[0]['kernel']} {b0 * 1e3:.2f}ms, "
          f"{results[1]['kernel']} {b1 * 1e3:.2f}ms "
          f"(ratio {b1 / b0:.2f}x)")


if __name__ == "__main__":
    main()
