"""Compare the compiled and numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import timeit

import numpy as np

from fracwave import kernels
from fracwave.harness import cubic_scenario
from fracwave.mittag_leffler import _ray_table, _series_coeffs
from fracwave.solver import solve


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    os.environ.setdefault("FRACWAVE_THREADS", "1")
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])

    x = np.geomspace(1.5, 1e6, 100_000)
    table = _ray_table(1.5, 1.5)
    z = np.linspace(-1.0, 1.0, 100_000)
    coeffs = _series_coeffs(1.5, 1.5)
    rng = np.random.default_rng(0)
    prim, forcing = rng.standard_normal((2, 512, 512))
    cases = {
        "ml_large (1e5 points)": lambda b: kernels.ml_large(x, table, b),
        "series_horner (1e5 points)": lambda b: kernels.series_horner(z, coeffs, b),
        "weighted_history (512 x 512)": lambda b: kernels.weighted_history(prim, forcing, b),
    }
    print(f"{'kernel':32s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases.items():
        times = [best(lambda: fn(b), args.repeat) for b in backends]
        row = f"{name:32s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)

    sc = cubic_scenario(n_steps=256)
    t = best(lambda: solve(sc.problem, sc.solver), max(1, args.repeat // 2))
    print(f"{'cubic solve, 256 steps':32s}{t * 1e3:10.2f}ms  (active backend: {kernels.BACKEND})")


if __name__ == "__main__":
    main()
