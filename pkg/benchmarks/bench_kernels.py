"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Each row reports the best wall time of N runs per backend, the speed-up,
and whether both backends returned identical results.
"""

import argparse
import time

import numpy as np

from sphquant.kernels import available_backends


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(rng):
    s = np.sort(rng.random(400)) * np.pi
    w = rng.random(400) + 0.1
    w /= w.sum()
    yield "segment_dp m=400 n=8", lambda k: k.segment_dp(s, w, 8)
    c = np.sort(rng.random(120)) * 2 * np.pi
    wc = np.full(120, 1 / 120)
    yield "circular_segment_dp m=120 n=5", lambda k: k.circular_segment_dp(c, wc, 5, 2 * np.pi)
    cost = rng.random(1 << 12)
    cost[0] = 0.0
    yield "subset_partition_dp m=12 n=4", lambda k: k.subset_partition_dp(cost, 12, 4)
    U = rng.normal(size=(200, 3)) + [4.0, 0, 0]
    U /= np.linalg.norm(U, axis=1)[:, None]
    wu = np.full(200, 1 / 200)
    yield "karcher_descent m=200", lambda k: k.karcher_descent(U, wu, U[0], 1.0, 1e-13, 2000, 1e-9)


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, list):
        return a == b
    return np.allclose(a, b, rtol=1e-12, atol=1e-15)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<32}{'python [s]':>12}{'compiled [s]':>14}{'speed-up':>10}  match")
    for name, fn in cases(rng):
        tp, outp = best_time(lambda: fn(backends["python"]), args.repeat)
        if "compiled" in backends:
            tc, outc = best_time(lambda: fn(backends["compiled"]), args.repeat)
            print(f"{name:<32}{tp:>12.4f}{tc:>14.4f}{tp / tc:>10.1f}  {same(outp, outc)}")
        else:
            print(f"{name:<32}{tp:>12.4f}{'-':>14}{'-':>10}  -")


if __name__ == "__main__":
    main()
