"""Compare the compiled and the pure-numpy backends on the two hot
kernels: the gray-code zero-sum subset scan and the definitional
oracle's power-cycle classification.

Run from the repository root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --wide --threads 4

The subset-sum instances carry strictly positive column weights, so no
zero-sum subset exists and every scan pays for the full enumeration.
The first compiled run of each kernel is discarded as warm-up.
"""

import argparse
import random
import time

from mzkernel.characters import GammaMatrix
from mzkernel.fields import FieldSpec, field_make
from mzkernel.groups import GroupSpec
from mzkernel.oracle import OracleBudget, definitional_mz_check
from mzkernel.subsetsum import zero_sum_subset_search


def scan_instance(t, rows, seed):
    # sums stay below the field order, so positive weights never cancel
    fld = field_make(FieldSpec.parse("GF(65537)"))
    rng = random.Random(seed)
    entries = [[fld.from_int(rng.randint(16, 200)) for _ in range(t)]
               for _ in range(rows)]
    gamma = GammaMatrix(entries, GroupSpec((t,)), fld)
    return gamma, tuple(range(t))


def time_scan(gamma, live, backend, threads, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        res = zero_sum_subset_search(gamma, live, backend=backend, threads=threads)
        best = min(best, time.perf_counter() - t0)
        assert not res.found
    return best


def time_oracle(backend, threads, repeats):
    fld = field_make(FieldSpec.parse("GF(4)"))
    grp = GroupSpec.parse("Z6")
    rng = random.Random("bench-oracle")
    rows = [[fld.element(rng.randrange(4)) for _ in range(6)] for _ in range(2)]
    budget = OracleBudget(max_algebra_size=4096)
    best = float("inf")
    verdict = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        rep = definitional_mz_check(fld, grp, rows, budget=budget,
                                    backend=backend, threads=threads)
        best = min(best, time.perf_counter() - t0)
        verdict = rep.verdict
    return best, verdict


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--wide", action="store_true",
                    help="include the 26 and 28 column scans")
    ap.add_argument("--threads", type=int, default=1,
                    help="threads for the compiled backend (default 1)")
    ap.add_argument("--repeats", type=int, default=3,
                    help="timed repetitions per cell, best is kept")
    args = ap.parse_args()

    widths = [20, 22, 24] + ([26, 28] if args.wide else [])

    # warm-up: compiles the kernels so timings below exclude that cost
    g, live = scan_instance(16, 2, "warm")
    for backend in ("numba", "numpy"):
        zero_sum_subset_search(g, live, backend=backend, threads=args.threads)
        time_oracle(backend, args.threads, 1)

    print(f"{'kernel':<28}{'numba':>10}{'numpy':>10}{'speedup':>9}")
    for t in widths:
        gamma, live = scan_instance(t, 2, f"scan:{t}")
        nb = time_scan(gamma, live, "numba", args.threads, args.repeats)
        np_ = time_scan(gamma, live, "numpy", args.threads, args.repeats)
        print(f"{'subset scan, t=' + str(t):<28}{nb:>9.3f}s{np_:>9.3f}s"
              f"{np_ / nb:>8.1f}x")
    nb, verdict = time_oracle("numba", args.threads, args.repeats)
    np_, _ = time_oracle("numpy", args.threads, args.repeats)
    print(f"{'oracle classify, |A|=4096':<28}{nb:>9.3f}s{np_:>9.3f}s"
          f"{np_ / nb:>8.1f}x   (verdict {verdict})")


if __name__ == "__main__":
    main()
