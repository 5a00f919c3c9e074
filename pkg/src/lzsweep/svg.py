"""A small SVG line-plot writer (axes, optional log scales, legend)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import InputError

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")
WIDTH, HEIGHT = 640, 440
MARGIN = (70, 20, 30, 55)  # left, right, top, bottom


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray


def _ticks(lo, hi, log):
    if log:
        a, b = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        step = max(1, (b - a) // 8)
        return [10.0**k for k in range(a, b + 1, step)]
    span = hi - lo
    raw = span / 6
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=mag)
    first = math.ceil(lo / step) * step
    return [first + i * step for i in range(int((hi - first) / step + 1e-9) + 1)]


def _label(v, log):
    if log:
        return f"1e{int(round(math.log10(v)))}"
    return f"{v:.4g}"


def _range(values, log):
    v = values[np.isfinite(values)]
    if log:
        v = v[v > 0]
    if v.size == 0:
        raise InputError("nothing to plot on this axis")
    lo, hi = float(v.min()), float(v.max())
    if log:
        lo, hi = 10 ** math.floor(math.log10(lo)), 10 ** math.ceil(math.log10(hi))
        if lo == hi:
            hi = lo * 10
    elif lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def line_plot(path, series, xlabel: str = "", ylabel: str = "", title: str = "",
              logx: bool = False, logy: bool = False) -> Path:
    """Write ``series`` (list of :class:`Series` or ``(label, x, y)``) as an SVG file.

    Non-finite points, and non-positive ones on a log axis, are skipped.
    """
    items = [s if isinstance(s, Series) else Series(*s) for s in series]
    if not items:
        raise InputError("no series to plot")
    for s in items:
        s.x, s.y = np.asarray(s.x, dtype=float), np.asarray(s.y, dtype=float)
        if s.x.shape != s.y.shape:
            raise InputError(f"series {s.label!r}: x and y differ in length")
    x0, x1 = _range(np.concatenate([s.x for s in items]), logx)
    y0, y1 = _range(np.concatenate([s.y for s in items]), logy)
    left, right, top, bottom = MARGIN
    pw, ph = WIDTH - left - right, HEIGHT - top - bottom

    def fx(x):
        u = (math.log10(x) - math.log10(x0)) / (math.log10(x1) - math.log10(x0)) if logx else (x - x0) / (x1 - x0)
        return left + u * pw

    def fy(y):
        u = (math.log10(y) - math.log10(y0)) / (math.log10(y1) - math.log10(y0)) if logy else (y - y0) / (y1 - y0)
        return top + (1 - u) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for v in _ticks(x0, x1, logx):
        if x0 <= v <= x1:
            px = fx(v)
            out.append(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{px:.2f}" y="{top + ph + 18}" text-anchor="middle">{_label(v, logx)}</text>')
    for v in _ticks(y0, y1, logy):
        if y0 <= v <= y1:
            py = fy(v)
            out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
            out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" text-anchor="end">{_label(v, logy)}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{top + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2})">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{left + pw / 2}" y="{top - 10}" text-anchor="middle">{escape(title)}</text>')
    for i, s in enumerate(items):
        ok = np.isfinite(s.x) & np.isfinite(s.y)
        if logx:
            ok &= s.x > 0
        if logy:
            ok &= s.y > 0
        pts = " ".join(f"{fx(a):.2f},{fy(b):.2f}" for a, b in zip(s.x[ok], s.y[ok]))
        color = COLORS[i % len(COLORS)]
        if pts:
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = top + 14 + 15 * i
        out.append(f'<line x1="{left + pw - 120}" y1="{ly - 4}" x2="{left + pw - 100}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw - 95}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    p = Path(path)
    p.write_text("\n".join(out) + "\n")
    return p
