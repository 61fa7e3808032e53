"""Graph and coordinate files.

* METIS adjacency format: header ``n m [fmt [ncon]]``, then one line of
  1-indexed neighbors per node; ``%`` starts a comment line.
* Edge lists: ``u v [weight [length]]`` per line, 0-indexed, ``#`` comments.
* Coordinates: one ``x y`` pair per line in node order, written with
  shortest round-trip float formatting.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from .graph import BuildStats, Graph, GraphError, graph_from_arrays

log = logging.getLogger(__name__)


class ParseError(GraphError):
    def __init__(self, path, line, msg):
        super().__init__(f"{path}:{line}: {msg}")
        self.path = str(path)
        self.line = line


def _report(path, stats: BuildStats):
    if stats.self_loops or stats.duplicates:
        log.warning("%s: dropped %d self-loops, merged %d duplicate edges",
                    path, stats.self_loops, stats.duplicates)


def read_metis(path) -> Graph:
    path = Path(path)
    with open(path) as fh:
        lines = fh.read().splitlines()
    pos = 0
    while pos < len(lines) and (lines[pos].startswith("%") or not lines[pos].strip()):
        pos += 1
    if pos == len(lines):
        raise ParseError(path, pos, "missing header line")
    head = lines[pos].split()
    header_line = pos + 1
    try:
        nums = [int(t) for t in head]
    except ValueError:
        raise ParseError(path, header_line, f"malformed header {lines[pos]!r}") from None
    if not 2 <= len(nums) <= 4 or nums[0] < 1 or nums[1] < 0:
        raise ParseError(path, header_line, f"malformed header {lines[pos]!r}")
    n, m = nums[0], nums[1]
    fmt = head[2] if len(nums) > 2 else "0"
    if len(fmt) > 3 or any(ch not in "01" for ch in fmt):
        raise ParseError(path, header_line, f"unsupported fmt field {fmt!r}")
    fmt = fmt.rjust(3, "0")
    has_vsize, has_vwgt, has_ewgt = fmt[0] == "1", fmt[1] == "1", fmt[2] == "1"
    ncon = nums[3] if len(nums) > 3 else (1 if has_vwgt else 0)
    if ncon and not has_vwgt:
        raise ParseError(path, header_line, "ncon given without node weights in fmt")

    rows, cols, wts, line_of = [], [], [], []
    node_weight = np.ones(n)
    node = 0
    pos += 1
    while pos < len(lines):
        text = lines[pos]
        pos += 1
        if text.startswith("%"):
            continue
        if node >= n:
            if text.strip():
                raise ParseError(path, pos, f"more adjacency lines than the {n} nodes in the header")
            continue
        try:
            toks = [float(t) for t in text.split()]
        except ValueError:
            raise ParseError(path, pos, f"non-numeric token in {text!r}") from None
        skip = int(has_vsize) + ncon
        if len(toks) < skip:
            raise ParseError(path, pos, "node line shorter than its weight fields")
        if has_vwgt:
            node_weight[node] = toks[int(has_vsize)]
        rest = toks[skip:]
        step = 2 if has_ewgt else 1
        if len(rest) % step:
            raise ParseError(path, pos, "neighbor without edge weight")
        for j in range(0, len(rest), step):
            nb = rest[j]
            if nb != int(nb) or not 1 <= nb <= n:
                raise ParseError(path, pos, f"neighbor index {rest[j]:g} out of range 1..{n}")
            rows.append(node)
            cols.append(int(nb) - 1)
            wts.append(rest[j + 1] if has_ewgt else 1.0)
            line_of.append(pos)
        node += 1
    if node < n:
        raise ParseError(path, len(lines), f"expected {n} adjacency lines, found {node}")

    rows_a = np.asarray(rows, dtype=np.int64)
    cols_a = np.asarray(cols, dtype=np.int64)
    wts_a = np.asarray(wts, dtype=np.float64)
    if np.any(wts_a < 0):
        i = int(np.flatnonzero(wts_a < 0)[0])
        raise ParseError(path, line_of[i], "negative edge weight")
    # every directed entry needs its reverse
    fwd = set(zip(rows, cols))
    for i, (a, b) in enumerate(zip(rows, cols)):
        if a != b and (b, a) not in fwd:
            raise ParseError(path, line_of[i], f"asymmetric adjacency: {a + 1} lists {b + 1} "
                             f"but {b + 1} does not list {a + 1}")
    stats = BuildStats()
    g = graph_from_arrays(n, rows_a, cols_a, wts_a, None, node_weight=node_weight, stats=stats)
    # each undirected edge appears twice in a METIS file
    stats.duplicates -= g.m
    _report(path, stats)
    if g.m != m:
        log.warning("%s: header declares %d edges, adjacency holds %d", path, m, g.m)
    return g


def write_metis(path, g: Graph):
    with open(path, "w") as fh:
        weighted = not np.all(g.edge_weight == 1.0)
        fh.write(f"{g.n} {g.m}{' 1' if weighted else ''}\n")
        for v in range(g.n):
            lo, hi = g.indptr[v], g.indptr[v + 1]
            if weighted:
                toks = [f"{u + 1} {w:g}" for u, w in zip(g.indices[lo:hi], g.edge_weight[lo:hi])]
            else:
                toks = [str(u + 1) for u in g.indices[lo:hi]]
            fh.write(" ".join(toks) + "\n")


def read_edge_list(path, n: int | None = None) -> Graph:
    path = Path(path)
    src, dst, w, d = [], [], [], []
    with open(path) as fh:
        for lineno, text in enumerate(fh, 1):
            text = text.split("#", 1)[0].strip()
            if not text:
                continue
            toks = text.split()
            if not 2 <= len(toks) <= 4:
                raise ParseError(path, lineno, f"expected 2 to 4 tokens, found {len(toks)}")
            try:
                a, b = int(toks[0]), int(toks[1])
                wt = float(toks[2]) if len(toks) > 2 else 1.0
                ln = float(toks[3]) if len(toks) > 3 else 1.0
            except ValueError:
                raise ParseError(path, lineno, f"malformed edge {text!r}") from None
            if a < 0 or b < 0:
                raise ParseError(path, lineno, "negative node index")
            if ln <= 0:
                raise ParseError(path, lineno, f"non-positive target length {ln:g}")
            src.append(a)
            dst.append(b)
            w.append(wt)
            d.append(ln)
    size = (max(max(src), max(dst)) + 1) if src else 1
    if n is not None:
        if size > n:
            raise ParseError(path, 0, f"node index {size - 1} out of range for n={n}")
        size = n
    stats = BuildStats()
    g = graph_from_arrays(size, src, dst, w, d, stats=stats)
    _report(path, stats)
    return g


def write_edge_list(path, g: Graph):
    u, v, w, d = g.edges()
    with open(path, "w") as fh:
        for row in zip(u.tolist(), v.tolist(), w.tolist(), d.tolist()):
            fh.write("%d %d %r %r\n" % row)


def read_graph(path, fmt: str | None = None) -> Graph:
    """Dispatch on ``fmt`` ('metis' or 'edgelist'); guessed from the suffix if omitted."""
    if fmt is None:
        fmt = "metis" if Path(path).suffix in (".graph", ".metis") else "edgelist"
    if fmt == "metis":
        return read_metis(path)
    if fmt == "edgelist":
        return read_edge_list(path)
    raise ValueError(f"unknown graph format {fmt!r}")


def write_coords(path, x):
    x = np.asarray(x, dtype=np.float64)
    with open(path, "w") as fh:
        for a, b in x.tolist():
            fh.write(f"{a!r} {b!r}\n")


def read_coords(path, n: int | None = None) -> np.ndarray:
    path = Path(path)
    rows = []
    with open(path) as fh:
        for lineno, text in enumerate(fh, 1):
            toks = text.split()
            if not toks:
                continue
            if len(toks) != 2:
                raise ParseError(path, lineno, f"expected 2 coordinates, found {len(toks)}")
            try:
                rows.append((float(toks[0]), float(toks[1])))
            except ValueError:
                raise ParseError(path, lineno, f"malformed coordinate {text.strip()!r}") from None
    if n is not None and len(rows) != n:
        raise ParseError(path, len(rows), f"found {len(rows)} coordinates for a graph with {n} nodes")
    return np.array(rows, dtype=np.float64).reshape(-1, 2)
