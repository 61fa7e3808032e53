"""Per-iteration cost of the exact and approximate updates against n, with log-log slopes.

    python3 scripts/complexity.py --kmin 10 --kmax 14 --h 1 3 7
"""

import argparse
import math
import time

import numpy as np

from maxent_layout.coarsening import build_hierarchy
from maxent_layout.engine import iterate_approx, iterate_exact, level_context
from maxent_layout.generators import delaunay_graph


def best_time(fn, reps):
    best = math.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kmin", type=int, default=10)
    p.add_argument("--kmax", type=int, default=14)
    p.add_argument("--h", type=int, nargs="+", default=[1, 3, 7])
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--threads", type=int, default=1)
    a = p.parse_args(argv)

    sizes = [2**k for k in range(a.kmin, a.kmax + 1)]
    times = {"exact": []} | {f"h={h}": [] for h in a.h}
    for n in sizes:
        g = delaunay_graph(n, seed=1)
        x = np.random.default_rng(n).random((n, 2)) * math.sqrt(n)
        ctx = level_context(g)
        iterate_exact(ctx, x, 0.1, threads=a.threads)
        times["exact"].append(best_time(lambda: iterate_exact(ctx, x, 0.1, threads=a.threads),
                                        a.reps))
        hier = build_hierarchy(g, seed=1)
        for h in a.h:
            actx = level_context(g, approx_map=hier.compose(0, min(h, hier.depth - 1)), x=x)
            iterate_approx(actx, x, 0.1, threads=a.threads)
            times[f"h={h}"].append(
                best_time(lambda: iterate_approx(actx, x, 0.1, threads=a.threads), a.reps))
        print(f"n={n}: " + ", ".join(f"{k} {v[-1] * 1e3:.1f}ms" for k, v in times.items()))
    for k, v in times.items():
        slope = float(np.polyfit(np.log(sizes), np.log(v), 1)[0])
        print(f"{k}: exponent {slope:.2f}")


if __name__ == "__main__":
    main()
