"""Compare the numba and pure-numpy boolean-matrix kernels.

Run:  python3 benchmarks/bench_kernels.py [--sizes 64,256,1024] [--repeat 5]

The numba path is what `dlpa.kernels` selects by default; DLPA_NO_NUMBA=1
switches the library to the numpy fallback measured here.
"""

import argparse
import time

import numpy as np

from dlpa import kernels
from dlpa.kernels import _compose_numpy


def bench(fn, a, b, repeat):
    fn(a, b)  # warm-up (numba compiles on first call)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(a, b)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="64,256,1024")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--density", type=float, default=0.05)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"numba available: {kernels.HAS_NUMBA}")
    print(f"{'n':>6} {'numpy (ms)':>12} {'selected (ms)':>14}")
    for n in (int(s) for s in args.sizes.split(",")):
        a = rng.random((n, n)) < args.density
        b = rng.random((n, n)) < args.density
        t_np = bench(_compose_numpy, a, b, args.repeat)
        t_sel = bench(kernels.compose, a, b, args.repeat)
        assert np.array_equal(_compose_numpy(a, b), kernels.compose(a, b))
        print(f"{n:>6} {1000 * t_np:>12.3f} {1000 * t_sel:>14.3f}")


if __name__ == "__main__":
    main()
