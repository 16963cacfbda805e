"""Compare the compiled and pure-Python plane kernels.

    python benchmarks/bench_kernels.py [--k 381] [--repeat 5]

Times one full solution count and one ideal-size count at n=3 (k planes,
512 products each), the pure-Python product-table build, and an n=4 count
where no product table exists (65536 products per plane).
"""

import argparse
import time

import numpy as np

from mobs import _purekernels, kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k", type=int, default=381)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    a = [int(v) for v in rng.integers(0, 512, size=args.k)]
    b = [int(v) for v in rng.integers(0, 512, size=args.k)]

    _purekernels._tables.clear()
    start = time.perf_counter()
    _purekernels.product_table(3)
    print(f"pure-python product table build (n=3): {1e3 * (time.perf_counter() - start):8.2f} ms")

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the pure-Python backend is timed")
    rows = []
    for name, mod in sorted(backends.items()):
        t_sol = best_of(lambda: mod.count_solutions_planes(b, a, 3), args.repeat)
        t_orb = best_of(lambda: mod.orbit_sizes_planes(a, 3), args.repeat)
        t_mul = best_of(lambda: mod.mat_mul_planes(a, b, 3), args.repeat)
        rows.append((name, t_sol, t_orb, t_mul))
    products = args.k * 512
    print(f"\nn=3, k={args.k} ({products} plane products per count), best of {args.repeat}")
    print(f"{'backend':<8} {'count_solutions':>16} {'orbit_sizes':>12} {'mat_mul':>10}")
    for name, t_sol, t_orb, t_mul in rows:
        print(f"{name:<8} {1e3 * t_sol:13.3f} ms {1e3 * t_orb:9.3f} ms {1e6 * t_mul:7.1f} us")
    if len(rows) == 2:
        (_, cs, co, cm), (_, ps, po, pm) = rows
        print(f"speedup  {ps / cs:15.1f}x {po / co:11.1f}x {pm / cm:9.1f}x")

    k4 = 8
    a4 = [int(v) for v in rng.integers(0, 1 << 16, size=k4)]
    b4 = [int(v) for v in rng.integers(0, 1 << 16, size=k4)]
    print(f"\nn=4, k={k4} ({k4 << 16} plane products per count), best of {args.repeat}")
    timings = {}
    for name, mod in sorted(backends.items()):
        timings[name] = best_of(lambda: mod.count_solutions_planes(b4, a4, 4), args.repeat)
        print(f"{name:<8} {1e3 * timings[name]:13.3f} ms")
    if len(timings) == 2:
        print(f"speedup  {timings['python'] / timings['cython']:15.1f}x")


if __name__ == "__main__":
    main()
