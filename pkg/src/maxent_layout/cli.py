"""Command line interface: ``layout``, ``metrics``, ``dynamic`` and ``bench``.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors (unreadable or
malformed files, disconnected graphs, metric limits).

Besides file paths, ``--graph`` accepts a few synthetic instance names:
``delK`` (Delaunay triangulation of 2^K random points, seed 1),
``gridRxC`` and ``fe_pwt_like``.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
import time
from pathlib import Path


from .dynamic import PerturbationLog, PerturbationParams, perturb, run_update
from .engine import OptimizerParams, resolve_threads, run_multilevel
from .generators import delaunay_graph, fe_pwt_like, grid_graph
from .graph import Graph, GraphError
from .io import read_coords, read_graph, write_coords
from .metrics import MetricsError, apsp_unit, evaluate_layout
from .report import RunReport, write_reports
from .svg import write_svg

log = logging.getLogger("maxent_layout")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def load_graph(spec: str, fmt: str | None = None) -> Graph:
    path = Path(spec)
    if path.exists():
        return read_graph(path, fmt)
    if m := re.fullmatch(r"del(\d+)", spec):
        return delaunay_graph(2 ** int(m.group(1)), seed=1)
    if m := re.fullmatch(r"grid(\d+)x(\d+)", spec):
        return grid_graph(int(m.group(1)), int(m.group(2)))
    if spec == "fe_pwt_like":
        return fe_pwt_like()
    raise FileNotFoundError(f"no such graph file: {spec}")


def _graph_name(spec: str) -> str:
    return Path(spec).stem if Path(spec).exists() else spec


def _optimizer_args(p, many_h=False):
    if many_h:
        p.add_argument("--h", type=int, nargs="+", default=[0], help="approximation depths")
    else:
        p.add_argument("--h", type=int, default=0, help="approximation depth (0 = exact)")
    p.add_argument("--threads", type=int, default=0, help="worker threads (default: all)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--f", type=float, default=20.0, help="initial cluster size factor")
    p.add_argument("--b", type=float, default=2.0, help="cluster size base")
    p.add_argument("--lp-rounds", type=int, default=3)
    p.add_argument("--alpha-min", type=float, default=0.008)
    p.add_argument("--alpha-factor", type=float, default=0.3)
    p.add_argument("--iters-per-round", type=int, default=2)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--max-final-iters", type=int, default=200)


def _metric_args(p, default=True):
    p.add_argument("--metrics", action=argparse.BooleanOptionalAction, default=default,
                   help="compute full stress and maxent-stress of the scaled layout")
    p.add_argument("--metrics-limit", type=int, default=200_000,
                   help="largest n for the quadratic-memory distance matrix")


def _params(a, h=None) -> OptimizerParams:
    h = a.h if h is None else h
    try:
        return OptimizerParams(alpha_min=a.alpha_min, alpha0=max(1.0, a.alpha_min),
                               alpha_factor=a.alpha_factor, iters_per_round=a.iters_per_round,
                               epsilon=a.epsilon, approx_depth=h,
                               max_final_iters=a.max_final_iters)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="maxent-layout", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("layout", help="compute a layout")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=["metis", "edgelist"])
    _optimizer_args(p)
    p.add_argument("--out", help="coordinate file to write")
    p.add_argument("--svg", help="SVG drawing to write")
    _metric_args(p, default=True)

    p = sub.add_parser("metrics", help="evaluate a layout")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=["metis", "edgelist"])
    p.add_argument("--coords", required=True)
    p.add_argument("--alpha", type=float, default=0.008)
    p.add_argument("--no-scale", action="store_true", help="evaluate the layout as given")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=0)
    p.add_argument("--metrics-limit", type=int, default=200_000)

    p = sub.add_parser("dynamic", help="perturb a graph and re-layout it")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=["metis", "edgelist"])
    p.add_argument("--x", type=float, default=1.0, help="percent of edges removed and inserted")
    p.add_argument("--D", type=int, default=2, help="largest hop distance of inserted edges")
    p.add_argument("--prior-coords", help="layout of the unperturbed graph (computed if absent)")
    p.add_argument("--mode", choices=["update", "scratch"], default="update")
    _optimizer_args(p)
    p.add_argument("--out", help="coordinate file to write")
    p.add_argument("--csv", help="report file (default: stdout)")
    _metric_args(p, default=False)

    p = sub.add_parser("bench", help="run (graph, h) configurations and emit CSV")
    p.add_argument("--graph", required=True, nargs="+")
    p.add_argument("--format", choices=["metis", "edgelist"])
    _optimizer_args(p, many_h=True)
    p.add_argument("--out", help="CSV file (default: stdout)")
    _metric_args(p, default=True)
    return parser


def _quality(g, x, a, alpha=0.008, scale=True):
    if g.n > a.metrics_limit:
        log.warning("n=%d exceeds --metrics-limit=%d; metrics skipped", g.n, a.metrics_limit)
        return None
    dm = apsp_unit(g, limit=a.metrics_limit, threads=a.threads)
    return evaluate_layout(g, x, alpha=alpha, dm=dm, scale=scale, seed=a.seed, threads=a.threads)


def _report(name, g, h, threads, mode, seed, t_coarsen, t_opt, q) -> RunReport:
    r = RunReport(graph=name, n=g.n, m=g.m, h=h, threads=threads, mode=mode, seed=seed,
                  t_coarsen_s=t_coarsen, t_optimize_s=t_opt, t_total_s=t_coarsen + t_opt)
    if q is not None:
        r.F, r.M, r.scale = q.full_stress, q.maxent_stress, q.scale
    return r


def _emit(path, reports):
    if path:
        with open(path, "w", newline="") as fh:
            write_reports(fh, reports)
    else:
        write_reports(sys.stdout, reports)


def cmd_layout(a) -> int:
    g = load_graph(a.graph, a.format)
    params = _params(a)
    res = run_multilevel(g, params, f0=a.f, b=a.b, rounds=a.lp_rounds, seed=a.seed,
                         threads=a.threads)
    if a.out:
        write_coords(a.out, res.layout)
    if a.svg:
        write_svg(a.svg, g, res.layout)
    q = _quality(g, res.layout, a) if a.metrics else None
    r = _report(_graph_name(a.graph), g, a.h, a.threads, "static", a.seed, res.t_coarsen,
                res.t_optimize, q)
    _emit(None, [r])
    return 0


def cmd_metrics(a) -> int:
    g = load_graph(a.graph, a.format)
    x = read_coords(a.coords, n=g.n)
    q = _quality(g, x, a, alpha=a.alpha, scale=not a.no_scale)
    if q is None:
        return 2
    print(f"F={q.full_stress!r} M={q.maxent_stress!r} s={q.scale!r}")
    return 0


def cmd_dynamic(a) -> int:
    g = load_graph(a.graph, a.format)
    params = _params(a)
    if a.prior_coords:
        prior = read_coords(a.prior_coords, n=g.n)
    else:
        prior = run_multilevel(g, params, f0=a.f, b=a.b, rounds=a.lp_rounds, seed=a.seed,
                               threads=a.threads).layout
    plog = PerturbationLog()
    try:
        pp = PerturbationParams(x_percent=a.x, D=a.D, seed=a.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    q_graph = perturb(g, pp, plog)
    log.info("perturbation: removed %d, inserted %d, skipped %d",
             plog.removed, plog.inserted, plog.skipped)
    if a.mode == "update":
        res = run_update(q_graph, prior, params, f0=a.f, b=a.b, rounds=a.lp_rounds,
                         seed=a.seed, threads=a.threads)
    else:
        res = run_multilevel(q_graph, params, f0=a.f, b=a.b, rounds=a.lp_rounds, seed=a.seed,
                             threads=a.threads)
    if a.out:
        write_coords(a.out, res.layout)
    q = _quality(q_graph, res.layout, a) if a.metrics else None
    r = _report(_graph_name(a.graph), q_graph, a.h, a.threads, a.mode, a.seed, res.t_coarsen,
                res.t_optimize, q)
    _emit(a.csv, [r])
    return 0


def cmd_bench(a) -> int:
    reports = []
    for spec in a.graph:
        g = load_graph(spec, a.format)
        dm = None
        for h in a.h:
            t0 = time.perf_counter()
            res = run_multilevel(g, _params(a, h), f0=a.f, b=a.b, rounds=a.lp_rounds, seed=a.seed,
                                 threads=a.threads)
            log.info("%s h=%d: %.3fs", spec, h, time.perf_counter() - t0)
            q = None
            if a.metrics and g.n <= a.metrics_limit:
                dm = dm if dm is not None else apsp_unit(g, a.metrics_limit, a.threads)
                q = evaluate_layout(g, res.layout, dm=dm, seed=a.seed, threads=a.threads)
            reports.append(_report(_graph_name(spec), g, h, a.threads, "static", a.seed,
                                   res.t_coarsen, res.t_optimize, q))
    _emit(a.out, reports)
    return 0


COMMANDS = {"layout": cmd_layout, "metrics": cmd_metrics, "dynamic": cmd_dynamic,
            "bench": cmd_bench}


def main(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(a, "threads", None) is not None:
        a.threads = resolve_threads(a.threads)
    try:
        return COMMANDS[a.command](a)
    except UsageError as exc:
        print(f"maxent-layout: {exc}", file=sys.stderr)
        return 1
    except (GraphError, MetricsError, OSError) as exc:
        print(f"maxent-layout: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
