"""Straight-line SVG drawings."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import Graph, check_layout


@dataclass
class SvgOptions:
    width: float = 1000.0
    margin: float = 0.02  # fraction of the drawing extent
    node_radius: float | None = None  # in output units; None draws no discs
    stroke: str = "#1f3b73"
    node_fill: str = "#c0392b"
    background: str | None = "#ffffff"
    precision: int = 2


def edge_style(m: int):
    """Stroke width and opacity, thinner and fainter as the edge count grows."""
    scale = math.log10(max(m, 1) + 9.0)  # 1 for a single edge
    return 1.5 / scale, min(1.0, 1.6 / scale)


def viewport(x, margin):
    lo = x.min(axis=0)
    hi = x.max(axis=0)
    extent = hi - lo
    pad = margin * max(float(extent.max()), 1e-12)
    return lo - pad, hi + pad


def render_svg(g: Graph, x, opts: SvgOptions | None = None) -> str:
    opts = opts or SvgOptions()
    x = check_layout(g, x)
    lo, hi = viewport(x, opts.margin)
    span = hi - lo
    scale = opts.width / max(float(span.max()), 1e-12)
    width = max(float(span[0]) * scale, 1.0)
    height = max(float(span[1]) * scale, 1.0)
    # flip y so the drawing reads like a plot
    px = (x[:, 0] - lo[0]) * scale
    py = (hi[1] - x[:, 1]) * scale
    p = opts.precision
    sw, op = edge_style(g.m)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.{p}f}" '
        f'height="{height:.{p}f}" viewBox="0 0 {width:.{p}f} {height:.{p}f}" '
        f'data-bbox="{" ".join(repr(float(t)) for t in (*lo, *hi))}">',
    ]
    if opts.background:
        out.append(f'<rect width="100%" height="100%" fill="{opts.background}"/>')
    out.append(f'<g stroke="{opts.stroke}" stroke-width="{sw:.3f}" stroke-opacity="{op:.3f}" '
               'stroke-linecap="round">')
    u, v, _, _ = g.edges()
    for a, b in zip(u.tolist(), v.tolist()):
        out.append(f'<line x1="{px[a]:.{p}f}" y1="{py[a]:.{p}f}" '
                   f'x2="{px[b]:.{p}f}" y2="{py[b]:.{p}f}"/>')
    out.append("</g>")
    if opts.node_radius:
        out.append(f'<g fill="{opts.node_fill}">')
        for a in range(g.n):
            out.append(f'<circle cx="{px[a]:.{p}f}" cy="{py[a]:.{p}f}" r="{opts.node_radius:g}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, g: Graph, x, opts: SvgOptions | None = None):
    with open(path, "w") as fh:
        fh.write(render_svg(g, x, opts))
