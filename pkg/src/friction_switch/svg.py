"""Dependency-free SVG line chart for friction curves with sigma bands."""
from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

from .errors import InsufficientDataError
from .model import FrictionCurve

__all__ = ["render_curves", "nice_ticks"]

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
BAND_FILL = "#ffd700"


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions covering [lo, hi]."""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 10))
        v += step
    if ticks[-1] < hi:
        ticks.append(round(ticks[-1] + step, 10))
    return ticks


def _fmt(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:g}"


def render_curves(
    curves: Sequence[FrictionCurve],
    width: int = 640,
    height: int = 420,
    title: str | None = None,
) -> str:
    """One polyline per curve over a shaded +/- sigma polygon, legend in input order."""
    if not curves:
        raise InsufficientDataError("nothing to plot")
    for c in curves:
        if len(c) == 0:
            raise InsufficientDataError(f"curve {c.label!r} is empty")

    x_lo = min(float(c.loads.min()) for c in curves)
    x_hi = max(float(c.loads.max()) for c in curves)
    y_lo = min(0.0, min(float((c.friction - c.sigma).min()) for c in curves))
    y_hi = max(float((c.friction + c.sigma).max()) for c in curves)
    xt = nice_ticks(min(0.0, x_lo), x_hi)
    yt = nice_ticks(y_lo, y_hi)
    x0, x1, y0, y1 = xt[0], xt[-1], yt[0], yt[-1]

    left, right, top, bottom = 64, 150, 36 if title else 16, 52
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')

    out.append('<g class="axes" stroke="#444" stroke-width="1">')
    out.append(f'<line x1="{left}" y1="{_fmt(py(y0))}" x2="{left + pw}" y2="{_fmt(py(y0))}"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}"/>')
    for t in xt:
        out.append(f'<line x1="{_fmt(px(t))}" y1="{top + ph}" x2="{_fmt(px(t))}" y2="{top + ph + 5}"/>')
    for t in yt:
        out.append(f'<line x1="{left - 5}" y1="{_fmt(py(t))}" x2="{left}" y2="{_fmt(py(t))}"/>')
    out.append("</g>")
    out.append('<g class="tick-labels" fill="#222">')
    for t in xt:
        out.append(f'<text x="{_fmt(px(t))}" y="{top + ph + 19}" text-anchor="middle">{_label(t)}</text>')
    for t in yt:
        out.append(f'<text x="{left - 8}" y="{_fmt(py(t) + 4)}" text-anchor="end">{_label(t)}</text>')
    out.append("</g>")
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">Load (N)</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">Friction (N)</text>'
    )

    for i, c in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        upper = [f"{_fmt(px(x))},{_fmt(py(y + s))}" for x, y, s in zip(c.loads, c.friction, c.sigma)]
        lower = [f"{_fmt(px(x))},{_fmt(py(y - s))}" for x, y, s in zip(c.loads, c.friction, c.sigma)]
        out.append(
            f'<polygon class="band" points="{" ".join(upper + lower[::-1])}" '
            f'fill="{BAND_FILL}" fill-opacity="0.35" stroke="none"/>'
        )
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(c.loads, c.friction))
        out.append(f'<polyline class="curve" points="{pts}" fill="none" stroke="{color}" stroke-width="1.8"/>')

    out.append('<g class="legend">')
    lx, ly = left + pw + 14, top + 8
    for i, c in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        y = ly + 18 * i
        out.append(f'<line x1="{lx}" y1="{y}" x2="{lx + 20}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{y + 4}">{escape(c.label or f"curve {i + 1}")}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
