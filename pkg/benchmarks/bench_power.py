"""Time the compiled and numpy power-iteration kernels on random trust
matrices and check that they agree.

    python benchmarks/bench_power.py --sizes 50 200 1000 --repeat 5
"""

import argparse
import timeit

import numpy as np

from promisetrust import _backend


def random_trust_matrix(n: int, degree: int, rng) -> np.ndarray:
    """Each agent rates ``degree`` others, values uniform in (0, 1]."""
    m = np.zeros((n, n))
    for i in range(n):
        cols = rng.choice(n, size=min(degree, n), replace=False)
        m[i, cols] = 1.0 - rng.random(len(cols))
    return m


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[50, 200, 800])
    parser.add_argument("--degree", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    impls = _backend.IMPLEMENTATIONS
    print(f"default backend: {_backend.BACKEND}")
    header = f"{'n':>6} {'iters':>6} " + " ".join(f"{name + ' ms':>12}" for name in impls)
    if "cython" in impls:
        header += f" {'speedup':>8}"
    print(header)
    rng = np.random.default_rng(args.seed)
    for n in args.sizes:
        m = random_trust_matrix(n, args.degree, rng)
        times, results = {}, {}
        for name, fn in impls.items():
            results[name] = fn(m, args.tol, 10_000)
            t = timeit.repeat(lambda: fn(m, args.tol, 10_000), number=1, repeat=args.repeat)
            times[name] = min(t) * 1e3
        ref = results["python"]
        for name, (v, lam, it, conv) in results.items():
            if not (np.allclose(v, ref[0], atol=1e-12) and abs(lam - ref[1]) < 1e-12):
                raise SystemExit(f"{name} disagrees with python at n={n}")
        row = f"{n:>6} {ref[2]:>6} " + " ".join(f"{times[k]:>12.3f}" for k in impls)
        if "cython" in impls:
            row += f" {times['python'] / times['cython']:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
