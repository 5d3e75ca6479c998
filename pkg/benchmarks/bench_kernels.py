"""Time the numba and numpy packed-multiplication kernels.

    python3 benchmarks/bench_kernels.py [--sizes 200 1000 3000] [--repeat 5]

The second part runs an end-to-end zhat_inst in two subprocesses, one with
KBLOWUP_DISABLE_NUMBA=1, so both import-time backends are measured.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from kblowup.algebra import kernels

END_TO_END = """
import time
import numpy as np
from kblowup.algebra import kernels
from kblowup.blowup import zhat_inst
one = np.ones(1, np.int64)
kernels.mul_packed(one, one, one, one)
spent = [0.0]
inner = kernels.mul_packed
def timed(*args):
    t = time.perf_counter()
    out = inner(*args)
    spent[0] += time.perf_counter() - t
    return out
kernels.mul_packed = timed
t = time.perf_counter()
zhat_inst(2, 1, 0, 1, 8)
print(time.perf_counter() - t, spent[0])
"""


def random_packed(rng, n, span):
    keys = np.unique(rng.integers(-span, span, size=n)).astype(np.int64)
    vals = rng.integers(-50, 50, size=keys.size).astype(np.int64)
    return keys, vals


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_table(sizes, repeat, seed):
    rng = np.random.default_rng(seed)
    print(f"numba available: {kernels.HAVE_NUMBA}")
    print(f"{'terms':>7} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in sizes:
        ka, ca = random_packed(rng, n, 40 * n)
        kb, cb = random_packed(rng, n, 40 * n)
        ref = kernels.mul_packed_numpy(ka, ca, kb, cb)
        t_np = best_of(lambda: kernels.mul_packed_numpy(ka, ca, kb, cb), repeat)
        if kernels.HAVE_NUMBA:
            got = kernels._mul_packed_nb(ka, ca, kb, cb)  # first call compiles
            assert np.array_equal(got[0], ref[0]) and np.array_equal(got[1], ref[1])
            t_nb = best_of(lambda: kernels._mul_packed_nb(ka, ca, kb, cb), repeat)
            print(f"{ka.size:>7} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.2f}")
        else:
            print(f"{ka.size:>7} {t_np:>10.4f} {'-':>10} {'-':>8}")


def end_to_end(runs):
    print(f"\nzhat_inst(r=2, l=1, k=0, d=1, Lambda^8), kernels warmed up, median of {runs} runs:")
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, KBLOWUP_DISABLE_NUMBA=flag)
        rows = []
        for _ in range(runs):
            out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True,
                                 check=True)
            rows.append(tuple(map(float, out.stdout.split())))
        total, kern = np.median(np.array(rows), axis=0)
        print(f"  {label:<6} total {total:.2f} s, in kernels {kern:.3f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 500, 2000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--runs", type=int, default=5, help="end-to-end subprocess runs per backend")
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()
    kernel_table(args.sizes, args.repeat, args.seed)
    if not args.skip_end_to_end:
        end_to_end(args.runs)


if __name__ == "__main__":
    main()
