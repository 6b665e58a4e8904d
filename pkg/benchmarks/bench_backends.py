#!/usr/bin/env python3
"""Time the numba and numpy kernels side by side.

    python benchmarks/bench_backends.py [--repeat N] [--max-dim D]
"""
import argparse
import time

import numpy as np

from densig import _kernels
from densig._accel import HAVE_NUMBA


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compile on first call
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def rand_herm(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return np.ascontiguousarray((a + a.conj().T) / 2)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--max-dim", type=int, default=256, help="largest Jacobi matrix dimension")
    args = ap.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)

    print(f"{'kernel':<14}{'size':>10}{'numpy [ms]':>14}{'numba [ms]':>14}{'speedup':>10}")
    d = 4
    while d <= args.max_dim:
        h = rand_herm(rng, d)
        reps = args.repeat if d <= 64 else 1
        t_np = best_of(lambda: _kernels.jacobi_eigh_numpy(h, 1e-15, 100), reps)
        t_nb = best_of(lambda: _kernels.jacobi_eigh_numba(h, 1e-15, 100), reps)
        print(f"{'jacobi_eigh':<14}{d:>10}{t_np * 1e3:>14.3f}{t_nb * 1e3:>14.3f}{t_np / t_nb:>10.1f}")
        d *= 4 if d < 64 else 2

    for n, m in [(2, 2), (4, 4), (8, 8), (16, 16)]:
        c = rng.standard_normal((n * n, m, m)) + 1j * rng.standard_normal((n * n, m, m))
        t_np = best_of(lambda: _kernels.block_gram_numpy(c), args.repeat)
        t_nb = best_of(lambda: _kernels.block_gram_numba(c), args.repeat)
        print(f"{'block_gram':<14}{f'{n}x{m}':>10}{t_np * 1e3:>14.3f}{t_nb * 1e3:>14.3f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
