"""Compare the compiled and pure Python multiplication kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is timed on
random rational inputs; results of both backends are checked to be equal.
An end-to-end timing of the standard basis on one curve is reported for
each backend in a fresh interpreter.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from saitobasis.series import _pykernels

try:
    from saitobasis.series import _ckernels
except ImportError:
    _ckernels = None


def _rand_frac(rng):
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


def dense_input(rng, n):
    return [_rand_frac(rng) for _ in range(n)]


def sparse_input(rng, n, density=0.6):
    return {
        (i, d - i): _rand_frac(rng)
        for d in range(n)
        for i in range(d + 1)
        if rng.random() < density
    }


END_TO_END = """
import time
from saitobasis.series import BACKEND, parse_biseries, parse_tseries
from saitobasis.curve import lift_parametrization, validate_branch
from saitobasis.stdbasis import standard_basis
f = parse_biseries("y^3 - x^10 + x^8*y", 80)
cache = {}
def branch_at(L):
    if L not in cache:
        xs = parse_tseries("t^3", L)
        ys = lift_parametrization(f, xs, parse_tseries("t^10 - 1/3*t^14", L), L)
        cache[L] = validate_branch(xs, ys)
    return cache[L]
t0 = time.perf_counter()
standard_basis(f, branch_at)
print(BACKEND, time.perf_counter() - t0)
"""


def end_to_end(pure):
    env = dict(os.environ)
    if pure:
        env["SAITOBASIS_PURE_PYTHON"] = "1"
    else:
        env.pop("SAITOBASIS_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True
    )
    backend, secs = out.stdout.split()
    return backend, float(secs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=40, help="truncation order of the inputs")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare")
        return 1
    rng = random.Random(args.seed)
    n = args.size
    da, db = dense_input(rng, n), dense_input(rng, n)
    sa, sb = sparse_input(rng, n // 2), sparse_input(rng, n // 2)
    cases = {
        "dense_mul": lambda mod: mod.dense_mul(da, db, n),
        "sparse_mul": lambda mod: mod.sparse_mul(sa, sb, n // 2),
        "sparse_axpy": lambda mod: mod.sparse_axpy(dict(sa), Fraction(3, 7), sb, 1, 2, n // 2),
    }
    print(f"{'kernel':<12} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    for name, call in cases.items():
        if call(_pykernels) != call(_ckernels):
            print(f"{name}: backends disagree")
            return 2
        tp = min(timeit.repeat(lambda: call(_pykernels), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: call(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<12} {tp * 1e3:12.2f} {tc * 1e3:12.2f} {tp / tc:8.2f}")
    print()
    print("standard basis of y^3 - x^10 + x^8*y:")
    for pure in (True, False):
        backend, secs = end_to_end(pure)
        print(f"  {backend:<7} {secs:.3f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
