"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 5]

Each case is run once per backend to warm up (compile or load the cache),
then timed ``--repeat`` times; the best time is reported.
"""

import argparse
import time

from cubeshadow import kernels
from cubeshadow.constructions import level_set, majority, power
from cubeshadow.measure import mpv
from cubeshadow.search import exhaustive_min_mpv, random_partition


def cases():
    maj5_cubed = power(majority(5), 3)
    rand = random_partition(6, 8, 5, 0)
    levels = level_set(3, 64, 7)
    return [
        ("mpv (Maj5)^3, d=14", lambda: mpv(maj5_cubed, 14)),
        ("mpv random 8^6 c=5, d=3", lambda: mpv(rand, 3)),
        ("mpv level set 64^3 c=7, d=2", lambda: mpv(levels, 2)),
        ("search n=3 N=2 c=2 d=2", lambda: exhaustive_min_mpv(3, 2, 2, 2)),
        ("search n=2 N=3 c=3 d=1", lambda: exhaustive_min_mpv(2, 3, 3, 1)),
        ("brute force n=2 N=3 c=3 d=1", lambda: exhaustive_min_mpv(2, 3, 3, 1, prune=False)),
    ]


def best_of(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    previous = kernels.backend()
    rows = []
    for name, fn in cases():
        times = {}
        for b in kernels.BACKENDS:
            kernels.set_backend(b)
            times[b] = best_of(fn, args.repeat)
        rows.append((name, times))
    kernels.set_backend(previous)
    print(f"{'case':32s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, t in rows:
        print(f"{name:32s} {t['numba'] * 1e3:9.2f}ms {t['numpy'] * 1e3:9.2f}ms {t['numpy'] / t['numba']:7.1f}x")


if __name__ == "__main__":
    main()
