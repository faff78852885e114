"""Time the numba kernels against their numpy fallbacks.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Both paths are called directly, so the PPSQUARES_DISABLE_NUMBA flag does not
matter here.  The first numba call (compilation or cache load) is excluded.
"""

import argparse
import time

import numpy as np

from ppsquares import _kernels as K

CASES = [
    ("norm_ball D=-5460", "_norm_ball", (0, 1365, 400_000)),
    ("norm_pairs D=-5460", "_norm_pairs", None),
    ("count_reduced D=-5460", "_count_reduced", (-5460, 5460)),
    ("close_vectors D=-1848 a=40", "_close_vectors", (0, 462, 40, 7, 1, 40 * 240)),
    ("close_vectors D=-5460 a=60", "_close_vectors", (0, 1365, 60, 11, 1, 60 * 700)),
]


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t)
    return min(times), out


def same(x, y):
    if isinstance(x, tuple) and len(x) == 5:
        # raw close_vectors output; the public wrapper sorts it
        x = sorted(zip(*(c.tolist() for c in x)))
        y = sorted(zip(*(c.tolist() for c in y)))
        return x == y
    if isinstance(x, tuple):
        return all(np.array_equal(np.asarray(u), np.asarray(v)) for u, v in zip(x, y))
    return int(x) == int(y)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if not K._HAVE_NUMBA:
        print("numba not importable; nothing to compare")
        return
    norms = K.norm_ball(0, 1365, 200_000)[2]
    print(f"{'kernel':32s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for label, stem, kargs in CASES:
        if kargs is None:
            kargs = (norms, 200_000)
        jit = getattr(K, stem + "_jit")
        npy = getattr(K, stem + "_numpy")
        jargs = tuple(a if isinstance(a, np.ndarray) else np.int64(a) for a in kargs)
        jit(*jargs)
        t_np, r_np = best_of(npy, kargs, args.repeat)
        t_jit, r_jit = best_of(jit, jargs, args.repeat)
        ok = "" if same(r_np, r_jit) else "  MISMATCH"
        print(f"{label:32s} {1e3 * t_np:11.2f} {1e3 * t_jit:11.2f} {t_np / t_jit:8.1f}{ok}")


if __name__ == "__main__":
    main()
