"""Time the compiled and pure-Python kernels on the same workloads.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--number 200]
"""
import argparse
import random
import timeit
from itertools import combinations_with_replacement

from multiscale import _pykernels

try:
    from multiscale import _ckernels
except ImportError:
    _ckernels = None


def workloads(seed):
    rng = random.Random(seed)
    mats = [[[rng.randint(-30, 30) for _ in range(5)] for _ in range(5)] for _ in range(20)]
    twists = []
    for _ in range(20):
        L = rng.randint(2, 4)
        edges = []
        for i in range(L):
            lo = rng.randint(1, L)
            hi = rng.randint(lo, L)
            edges.append((rng.randint(1, 8), lo, hi))
        edges += [(rng.randint(1, 8), i, i) for i in range(1, L + 1)]
        kappas, lo, hi = (list(x) for x in zip(*edges))
        twists.append((kappas, lo, hi, L))
    sigs = [c for c in combinations_with_replacement(range(4, -5, -1), 7) if sum(c) == -2]
    return {
        "snf_diagonal": lambda m: [m.snf_diagonal(a) for a in mats],
        "ghost_order": lambda m: [m.ghost_order(*t) for t in twists],
        "prong_orbits": lambda m: [m.prong_orbits(*t) for t in twists],
        "find_unbalanced_cherry": lambda m: [m.find_unbalanced_cherry(list(s)) for s in sigs[:40]],
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _ckernels is None:
        print("compiled extension not built; only the Python backend is timed")
    print(f"{'kernel':<24}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, work in workloads(args.seed).items():
        if _ckernels is not None and work(_ckernels) != work(_pykernels):
            raise SystemExit(f"backends disagree on {name}")
        times = {}
        for label, mod in (("python", _pykernels), ("cython", _ckernels)):
            if mod is None:
                continue
            best = min(timeit.repeat(lambda: work(mod), repeat=args.repeat, number=args.number))
            times[label] = 1000 * best / args.number
        c = times.get("cython")
        speed = f"{times['python'] / c:9.1f}x" if c else "       -"
        c_text = f"{c:12.3f}" if c else f"{'-':>12}"
        print(f"{name:<24}{times['python']:12.3f}{c_text} {speed}")


if __name__ == "__main__":
    main()
