"""Time the numba and numpy search backends on the same plans.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--workers 1,4] [--json out.json]

Every case runs on both backends; the counts must match or the script exits 1.
The numba timings exclude the first (compiling) call.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from singmod.endo.count import MnFilter, _charpoly_plan, _cubic_plan, derive_degree_bounds
from singmod.ffield import tower_for
from singmod.kernels import HAVE_NUMBA, run_search
from singmod.polyring import PrimeIdeal, parse_poly

# (q, radicand, n) at pi = T
CASES = [(3, "T^2+T", 1), (5, "T^2+T", 1), (3, "T^4+T", 1), (7, "T^2+T", 1)]


def make_plan(q, rad, n, mode):
    tower = tower_for(q, 3)
    P = PrimeIdeal(parse_poly("T", tower))
    f = parse_poly(rad, tower)
    b = derive_degree_bounds(f, P, 3)
    if mode == "charpoly":
        return _charpoly_plan(f, P, MnFilter(n), b, True)
    return _cubic_plan(f, P, MnFilter(n), b, True, "derived")


def timed(plan, backend, workers, repeat):
    times, count = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = run_search(plan, backend, workers)
        times.append(time.perf_counter() - t0)
        count = res.count
    return count, statistics.median(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--workers", default="1,4")
    ap.add_argument("--max-numpy", type=int, default=2_000_000,
                    help="skip the numpy backend on plans larger than this")
    ap.add_argument("--json", help="write the rows to this file")
    args = ap.parse_args(argv)
    workers = [int(w) for w in args.workers.split(",")]
    if not HAVE_NUMBA:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 2

    rows, mismatch = [], False
    print(f"{'case':<22}{'mode':<10}{'size':>12}{'workers':>8}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for q, rad, n in CASES:
        for mode in ("charpoly", "cubic"):
            plan = make_plan(q, rad, n, mode)
            run_search(make_plan(3, "T", 1, mode), "numba")  # compile outside the timings
            for w in workers:
                c_nb, t_nb = timed(plan, "numba", w, args.repeat)
                row = {"q": q, "radicand": rad, "n": n, "mode": mode, "size": plan.total,
                       "workers": w, "count": c_nb, "numba_s": t_nb, "numpy_s": None}
                if plan.total <= args.max_numpy:
                    c_np, t_np = timed(plan, "numpy", w, max(1, args.repeat // 2))
                    row["numpy_s"] = t_np
                    if c_np != c_nb:
                        mismatch = True
                        row["numpy_count"] = c_np
                rows.append(row)
                np_s = f"{row['numpy_s']:10.3f}" if row["numpy_s"] is not None else f"{'skip':>10}"
                speed = f"{row['numpy_s'] / t_nb:8.1f}x" if row["numpy_s"] else f"{'':>9}"
                print(f"{f'q={q} {rad} n={n}':<22}{mode:<10}{plan.total:>12}{w:>8}{t_nb:10.3f}{np_s}{speed}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    if mismatch:
        print("backend counts disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
