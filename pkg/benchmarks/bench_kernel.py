#!/usr/bin/env python3
"""Compare the compiled rational-vector kernel against the pure-Python twin.

Times the raw kernel loops and a law-check workload shaped like the
acceptance suite's hottest path, and also shows where fractions.Fraction
would land.  Run as:  python benchmarks/bench_kernel.py [--repeats N]
"""

import argparse
import random
import time
from fractions import Fraction
from math import gcd

from lbochner._kernel import _pykernel

try:
    from lbochner._kernel import _ckernel
except ImportError:
    _ckernel = None


def make_vectors(rng, count, d):
    out = []
    for _ in range(count):
        nums, dens = [], []
        for _ in range(d):
            n = rng.randint(-40, 40)
            m = rng.randint(1, 40)
            g = gcd(n, m)
            nums.append(n // g)
            dens.append(m // g)
        out.append((tuple(nums), tuple(dens)))
    return out


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_raw_ops(kernel, vectors):
    def run():
        prev = vectors[0]
        for cur in vectors:
            kernel.vadd(*prev, *cur)
            kernel.vmul(*prev, *cur)
            kernel.vsup(*prev, *cur)
            kernel.vleq(*prev, *cur)
            prev = cur
    return run


def bench_law_workload(kernel, vectors):
    # the shape of the ring/lattice acceptance loop: products of sums,
    # modulus multiplicativity, sup/inf decomposition
    def run():
        n = len(vectors)
        for i in range(n - 2):
            a, b, c = vectors[i], vectors[i + 1], vectors[i + 2]
            ab = kernel.vadd(*a, *b)
            kernel.vadd(*ab, *c)
            prod = kernel.vmul(*a, *b)
            kernel.vmul(*prod, *c)
            kernel.vabs(*prod)
            kernel.vadd(*kernel.vsup(*a, *b), *kernel.vinf(*a, *b))
    return run


def bench_fraction_mul(vectors):
    frac = [tuple(Fraction(n, m) for n, m in zip(*v)) for v in vectors]

    def run():
        prev = frac[0]
        for cur in frac:
            tuple(x + y for x, y in zip(prev, cur))
            tuple(x * y for x, y in zip(prev, cur))
            prev = cur
    return run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--count", type=int, default=4000)
    args = parser.parse_args()

    rng = random.Random(20240917)
    print(f"{'workload':<26} {'d':>2} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for d in (2, 4, 8):
        vectors = make_vectors(rng, args.count, d)
        rows = [
            ("raw add/mul/sup/leq", bench_raw_ops),
            ("law-check loop", bench_law_workload),
        ]
        for name, factory in rows:
            t_py = time_call(factory(_pykernel, vectors), args.repeats)
            if _ckernel is not None:
                t_c = time_call(factory(_ckernel, vectors), args.repeats)
                print(f"{name:<26} {d:>2} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms "
                      f"{t_py / t_c:>7.2f}x")
            else:
                print(f"{name:<26} {d:>2} {t_py * 1e3:>8.2f}ms {'n/a':>10} {'':>8}")
        t_frac = time_call(bench_fraction_mul(vectors), args.repeats)
        print(f"{'fractions.Fraction ref':<26} {d:>2} {t_frac * 1e3:>8.2f}ms"
              f" {'':>10} {'':>8}")
    if _ckernel is None:
        print("\ncompiled kernel unavailable; rebuild with"
              " `pip install -e . --no-build-isolation`")


if __name__ == "__main__":
    main()
