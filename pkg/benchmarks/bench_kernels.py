"""Time the numba and numpy kernel flavours side by side.

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --sizes 320x240 2048x1360 --repeat 50

JIT compilation is triggered before timing; reported numbers are the best
and median of ``--repeat`` calls, in milliseconds.
"""
import argparse
import statistics
import time

import numpy as np

from cbrw import _kernels


def timeit(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times) * 1e3, statistics.median(times) * 1e3


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", nargs="+", default=["320x240", "1000x776", "2048x1360"])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    _kernels.warmup()
    rng = np.random.default_rng(args.seed)

    print(f"{'kernel':<10} {'size':>10} {'numpy best/med':>18} {'numba best/med':>18} {'speedup':>8}")
    for size in args.sizes:
        w, h = (int(v) for v in size.lower().split("x"))
        n = w * h
        s = rng.integers(0, 256, n, dtype=np.uint8)
        t = rng.integers(0, 256, n, dtype=np.uint8)
        r = rng.integers(-(n // 2), n // 2 + 1, n).astype(np.int32)
        cases = {
            "rwm": (lambda: _kernels.rwm_numpy(s, r), lambda: _kernels.rwm_numba(s, r)),
            "enroll": (lambda: _kernels.enroll_numpy(s, r, True), lambda: _kernels.enroll_numba(s, r, True)),
            "pair_sums": (lambda: _kernels.pair_sums_numpy(s, t), lambda: _kernels.pair_sums_numba(s, t)),
        }
        for name, (np_fn, nb_fn) in cases.items():
            np_best, np_med = timeit(np_fn, args.repeat)
            nb_best, nb_med = timeit(nb_fn, args.repeat)
            print(f"{name:<10} {size:>10} {np_best:8.2f}/{np_med:<8.2f} {nb_best:8.2f}/{nb_med:<8.2f} "
                  f"{np_med / nb_med:7.1f}x")


if __name__ == "__main__":
    main()
