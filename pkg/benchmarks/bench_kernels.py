"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--probes N] [--zeros M] [--repeat R]

Reports the best-of-R wall time per backend and nanoseconds per
probe/zero pair, and checks that both backends agree.
"""

import argparse
import time

import numpy as np

from innerfn import kernels


def polar(rng, n):
    a = rng.uniform(-np.pi, np.pi, n)
    return np.cos(a), np.sin(a), rng.uniform(0.0, 1.0, n) ** 3


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--probes", type=int, default=200_000)
    p.add_argument("--zeros", type=int, default=64)
    p.add_argument("--atoms", type=int, default=4)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    probes = polar(rng, args.probes)
    zeros = (*polar(rng, args.zeros), np.ones(args.zeros))
    ac, as_, _ = polar(rng, args.atoms)
    atoms = (ac, as_, rng.uniform(0.1, 1.0, args.atoms))
    keys = rng.uniform(0, 1, args.probes)
    vals = rng.normal(size=args.probes)
    th = np.linspace(0.05, 0.95, 19)

    pairs = args.probes * (args.zeros + args.atoms)
    results = {}
    print(f"{args.probes} probes x ({args.zeros} zeros + {args.atoms} atoms), best of {args.repeat}")
    for name in sorted(kernels.BACKENDS):
        t_ps, out = best_time(lambda: kernels.point_sums(probes, zeros, atoms, backend=name), args.repeat)
        t_bm, _ = best_time(lambda: kernels.bucket_min(vals, keys, th, backend=name), args.repeat)
        results[name] = out
        print(f"  {name:7s} point_sums {t_ps * 1e3:9.2f} ms ({t_ps / pairs * 1e9:6.1f} ns/pair)"
              f"   bucket_min {t_bm * 1e3:7.2f} ms")
    if len(results) == 2:
        a, b = results["cython"], results["python"]
        err = max(float(np.max(np.abs(x - y) / np.maximum(np.abs(y), 1e-300))) for x, y in zip(a, b)
                  if np.all(np.isfinite(y)))
        print(f"  max relative difference between backends: {err:.1e}")
    else:
        print("  compiled extension not built; only the numpy backend is available")


if __name__ == "__main__":
    main()
