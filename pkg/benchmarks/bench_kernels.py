"""Compare the numba and numpy ring kernels on elementwise and matrix products.

    python benchmarks/bench_kernels.py [--repeat 5]

Both paths are run in-process on identical inputs; results are checked equal
before timings are reported.
"""

import argparse
import time

import numpy as np

from metalift import _kernels as K
from metalift.group import new_group
from metalift.ring import make_ring

CASES = [
    # (p, h, m, alpha), N, e, batch, matrix dimension
    ((5, 2, 4, 7), 8, 2, 256, 8),
    ((3, 2, 2, 8), 8, 2, 256, 12),
    ((7, 1, 3, 2), 6, 3, 256, 8),
    ((13, 1, 3, 3), 4, 2, 256, 6),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        print("numba not importable; nothing to compare")
        return

    rng = np.random.default_rng(args.seed)
    print(f"{'group':>14} {'N':>3} {'e':>2} {'op':>8} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for key, N, e, batch, d in CASES:
        ctx = make_ring(new_group(*key), N, e)
        A = rng.integers(0, ctx.mod, size=(batch,) + ctx.shape, dtype=np.int64)
        B = rng.integers(0, ctx.mod, size=(batch,) + ctx.shape, dtype=np.int64)
        X = rng.integers(0, ctx.mod, size=(d, d) + ctx.shape, dtype=np.int64)
        Y = rng.integers(0, ctx.mod, size=(d, d) + ctx.shape, dtype=np.int64)
        ops = [
            ("mul", K.mul_np, K.mul_nb, A, B),
            ("matmul", K.matmul_np, K.matmul_nb, X, Y),
        ]
        for name, f_np, f_nb, U, V in ops:
            f_nb(U[:1], V[:1], ctx.mod, ctx.rx, ctx.ghat)  # compile outside the timing
            t_np, r_np = best_of(lambda: f_np(U, V, ctx.mod, ctx.rx, ctx.ghat), args.repeat)
            t_nb, r_nb = best_of(lambda: f_nb(U, V, ctx.mod, ctx.rx, ctx.ghat), args.repeat)
            if not np.array_equal(r_np % ctx.mod, r_nb % ctx.mod):
                raise SystemExit(f"kernel mismatch on {key} {name}")
            print(f"{str(key):>14} {N:>3} {e:>2} {name:>8} {1e3 * t_np:>10.2f} {1e3 * t_nb:>10.2f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
