"""Running time and layout quality as a function of the approximation depth h.

    python3 scripts/influence_of_h.py --graph del12 del14 --h 0 1 2 4 7 --out results/h.csv
"""

import argparse
import sys
import time

from maxent_layout.cli import load_graph
from maxent_layout.engine import OptimizerParams, resolve_threads, run_multilevel
from maxent_layout.metrics import evaluate_layout
from maxent_layout.report import RunReport, write_reports


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--graph", nargs="+", default=["del12", "del13"])
    p.add_argument("--h", type=int, nargs="+", default=[0, 1, 2, 4, 7])
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=0)
    p.add_argument("--metrics-limit", type=int, default=20000,
                   help="skip F and M above this many nodes (all-pairs BFS cost)")
    p.add_argument("--out", default="-")
    a = p.parse_args(argv)
    a.threads = resolve_threads(a.threads)

    rows = []
    for spec in a.graph:
        g = load_graph(spec)
        base = None
        for h in a.h:
            t0 = time.perf_counter()
            res = run_multilevel(g, OptimizerParams(approx_depth=h), seed=a.seed, threads=a.threads)
            total = time.perf_counter() - t0
            q = evaluate_layout(g, res.layout) if g.n <= a.metrics_limit else None
            rows.append(RunReport(spec, g.n, g.m, h, a.threads, "static", a.seed, res.t_coarsen,
                                  res.t_optimize, total,
                                  *((q.full_stress, q.maxent_stress, q.scale) if q else ())))
            base = base or res.t_optimize
            print(f"{spec} h={h}: optimize {res.t_optimize:.2f}s "
                  f"(x{base / res.t_optimize:.2f} vs first h)", file=sys.stderr)
    if a.out == "-":
        write_reports(sys.stdout, rows)
    else:
        with open(a.out, "w", newline="") as fh:
            write_reports(fh, rows)


if __name__ == "__main__":
    main()
