"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--draws 10000000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from redsm import _pykernels

try:
    from redsm import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_sampling(mod, draws, cells, repeat):
    rng = np.random.default_rng(0)
    cdf = np.cumsum(rng.random(cells))
    u = rng.random(draws) * cdf[-1]

    def run():
        counts = np.zeros(cells, dtype=np.int64)
        mod.bisect_counts(cdf, u, counts)
        return counts

    return best_of(run, repeat), run()


def bench_jacobi(mod, dim, count, repeat):
    rng = np.random.default_rng(1)
    mats = []
    for _ in range(count):
        h = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        mats.append(np.ascontiguousarray(h + h.conj().T))

    def run():
        return [mod.jacobi_eigh(h.copy(), 1e-12, 60)[0] for h in mats]

    return best_of(run, repeat), run()


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--draws", type=int, default=10_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = [("python", _pykernels)] + ([("cython", _kernels)] if _kernels else [])
    if _kernels is None:
        print("compiled kernels not built; timing the fallback only")

    print(f"{'kernel':<28}{'backend':<10}{'seconds':>10}{'rate':>18}")
    for cells in (5, 17):
        ref = None
        for name, mod in backends:
            t, counts = bench_sampling(mod, args.draws, cells, args.repeat)
            ref = counts if ref is None else ref
            assert np.array_equal(ref, counts), "backends disagree"
            print(f"{f'bisect {cells} cells':<28}{name:<10}{t:>10.4f}{args.draws / t / 1e6:>14.1f} M/s")
    for dim, count in ((2, 2000), (8, 200)):
        for name, mod in backends:
            t, _ = bench_jacobi(mod, dim, count, args.repeat)
            print(f"{f'jacobi {dim}x{dim} (x{count})':<28}{name:<10}{t:>10.4f}{count / t:>14.0f} /s")


if __name__ == "__main__":
    main()
