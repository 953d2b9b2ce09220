"""Benchmark: compiled vs pure-numpy all-subset row-counting kernel.

Usage:
    python3 benchmarks/bench_kernels.py [--max-n 14] [--repeats 3] [--seed 0]

Runs the same random truth tables through both backends (when the compiled
extension is available), verifies the counts agree, and prints a timing table.
The compiled backend is the one `ddlab.kernels` selects by default; setting
DDLAB_PURE=1 in the environment makes the package fall back to the numpy
implementation, which is what this script measures head-to-head.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from ddlab import _kernels_py

try:
    from ddlab import _kernels
except ImportError:
    _kernels = None


def time_backend(fn, table, n, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(table, n)
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=14)
    parser.add_argument("--min-n", type=int, default=6)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    print("backend availability: compiled=%s" % ("yes" if _kernels else "no"))
    header = "%4s %14s %14s %9s" % ("n", "numpy (s)", "compiled (s)", "speedup")
    print(header)
    print("-" * len(header))
    for n in range(args.min_n, args.max_n + 1):
        table = rng.integers(0, 2, size=1 << n, dtype=np.uint8)
        t_py, r_py = time_backend(_kernels_py.all_subset_costs, table, n, args.repeats)
        if _kernels is None:
            print("%4d %14.6f %14s %9s" % (n, t_py, "-", "-"))
            continue
        t_c, r_c = time_backend(_kernels.all_subset_costs, table, n, args.repeats)
        if not np.array_equal(r_py, r_c):
            print("backend disagreement at n=%d" % n, file=sys.stderr)
            return 1
        print("%4d %14.6f %14.6f %8.1fx" % (n, t_py, t_c, t_py / t_c if t_c else float("inf")))
    return 0


if __name__ == "__main__":
    sys.exit(main())
