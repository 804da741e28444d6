"""Compiled vs pure-Python subset-sum kernels.

    python3 benchmarks/bench_kernels.py --k 12 16 20 --seeds 3

Prints the timing CSV and a per-(solver, k) speedup summary.
"""

import argparse
import statistics
import sys
from collections import defaultdict

from polyssp.algebra import IntMatrix
from polyssp.bench import bench_csv, bench_rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, nargs="+", default=[12, 16, 20])
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args(argv)

    X0 = IntMatrix.from_rows([[2, 1], [1, 1]])
    rows = bench_rows(X0, args.k, range(args.seeds), families=("negative",))
    sys.stdout.write(bench_csv(rows))

    times = defaultdict(list)
    for family, k, seed, solver, backend, verdict, nodes, secs in rows:
        if secs:
            times[(solver, k, backend)].append(float(secs))
    print("\nsolver,k,python_s,compiled_s,speedup")
    for solver in ("brute", "mitm"):
        for k in args.k:
            py, cc = times.get((solver, k, "python")), times.get((solver, k, "compiled"))
            if py and cc:
                p, c = statistics.median(py), statistics.median(cc)
                print(f"{solver},{k},{p:.5f},{c:.5f},{p / c:.1f}x")


if __name__ == "__main__":
    main()
