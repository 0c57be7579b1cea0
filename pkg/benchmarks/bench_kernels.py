"""Compare the numba and numpy backends of the finite-field kernels.

    python3 benchmarks/bench_kernels.py [--q 25] [--n 60] [--repeat 5]

Both backends are run on the same random matrices and their outputs are
checked for equality before timings are printed.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from eqrr import _kernels as K
from eqrr.fields import field_of_size


def _time(fn, repeat):
    fn()  # warm-up (triggers compilation on the numba path)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=25)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--d", type=int, default=8, help="module dimension for the conjugation sum")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    F = field_of_size(args.q)
    T = F.tables
    rng = np.random.default_rng(args.seed)
    A = rng.integers(0, args.q, (args.n, args.n))
    B = rng.integers(0, args.q, (args.n, args.n))
    mats = rng.integers(0, args.q, (5, args.d, args.d))
    invs = rng.integers(0, args.q, (5, args.d, args.d))

    jobs = {
        "matmul": lambda: K.matmul(A, B, T),
        "rref": lambda: K.rref(A, T)[0],
        "conj_sum": lambda: K.conj_sum_matrix(mats, invs, T),
    }
    backends = ["numpy"] + (["numba"] if K._HAVE_NUMBA else [])
    results = {}
    print(f"GF({args.q}), n = {args.n}, d = {args.d}, best of {args.repeat}")
    print(f"{'kernel':<10} " + " ".join(f"{b:>12}" for b in backends) + "   speedup")
    for name, fn in jobs.items():
        times = []
        for b in backends:
            K.set_backend(b)
            results[(name, b)] = fn()
            times.append(_time(fn, args.repeat))
        if len(backends) == 2 and not np.array_equal(results[(name, "numpy")], results[(name, "numba")]):
            raise SystemExit(f"{name}: backends disagree")
        speed = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else ""
        print(f"{name:<10} " + " ".join(f"{t * 1e3:10.2f}ms" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
