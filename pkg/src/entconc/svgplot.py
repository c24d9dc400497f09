"""Dependency-free deterministic SVG charts for exported curves and grids.

Two chart types cover every figure the CLI emits: a line chart for curves
(NaN values split a curve into disconnected segments, matching the NaN gap
convention of the sweep drivers) and a cell heatmap for grid scans.  Output
is a plain SVG string assembled with fixed formatting (%.6g coordinates,
fixed palette, no timestamps), so identical inputs give identical bytes.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

__all__ = ["line_chart", "heatmap", "nice_ticks"]

PALETTE = ("#1f6fb4", "#d95f02", "#1b9e77", "#7570b3", "#e7298a", "#66a61e")

# Piecewise-linear approximation of a perceptually uniform dark-to-bright map.
_HEAT_ANCHORS = (
    (68, 1, 84),
    (72, 40, 120),
    (62, 73, 137),
    (49, 104, 142),
    (38, 130, 142),
    (31, 158, 137),
    (53, 183, 121),
    (110, 206, 88),
    (253, 231, 37),
)
_N_LEVELS = 64


def _heat_color(t: float) -> str:
    t = min(1.0, max(0.0, t))
    pos = t * (len(_HEAT_ANCHORS) - 1)
    i = min(len(_HEAT_ANCHORS) - 2, int(pos))
    frac = pos - i
    lo, hi = _HEAT_ANCHORS[i], _HEAT_ANCHORS[i + 1]
    rgb = tuple(round(a + (b - a) * frac) for a, b in zip(lo, hi))
    return "#%02x%02x%02x" % rgb


_HEAT_LUT = tuple(
    _heat_color(i / (_N_LEVELS - 1)) for i in range(_N_LEVELS)
)


def _fmt(v: float) -> str:
    return "%.6g" % float(v)


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def nice_ticks(lo: float, hi: float, target: int = 6) -> list:
    """Round tick positions covering [lo, hi] on a 1-2-2.5-5 ladder."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("tick range must be finite")
    if hi < lo:
        lo, hi = hi, lo
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    raw = (hi - lo) / max(target, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * mag
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mult * mag >= raw:
            step = mult * mag
            break
    ticks = []
    k = math.ceil(lo / step - 1e-9)
    while k * step <= hi + step * 1e-9:
        ticks.append(k * step)
        k += 1
    return ticks


def _finite_range(values: np.ndarray) -> tuple[float, float]:
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        raise ValueError("no finite data to plot")
    lo = float(finite.min())
    hi = float(finite.max())
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def line_chart(
    x,
    series: dict,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 640,
    height: int = 440,
) -> str:
    """SVG line chart of one or more named series against a shared x axis.

    series maps label -> y array (same length as x).  Non-finite y values
    break the curve at that point instead of being interpolated over.
    """
    xv = np.asarray(x, dtype=np.float64).reshape(-1)
    if not series:
        raise ValueError("series must be non-empty")
    ys = {}
    for name, vals in series.items():
        arr = np.asarray(vals, dtype=np.float64).reshape(-1)
        if arr.size != xv.size:
            raise ValueError(f"series {name!r} length does not match x")
        ys[name] = arr

    x0, x1 = _finite_range(xv)
    stacked = np.concatenate(list(ys.values()))
    y0, y1 = _finite_range(stacked)
    pad = 0.04 * (y1 - y0)
    y0 -= pad
    y1 += pad

    ml, mr, mt, mb = 70, 24, 36, 52
    pw = width - ml - mr
    ph = height - mt - mb

    def sx(v: float) -> float:
        return ml + (v - x0) / (x1 - x0) * pw

    def sy(v: float) -> float:
        return mt + ph - (v - y0) / (y1 - y0) * ph

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')
    if title:
        out.append(
            f'<text x="{_fmt(width / 2)}" y="22" text-anchor="middle" '
            f'font-family="sans-serif" font-size="15" fill="#222222">{_esc(title)}</text>'
        )

    for tx in nice_ticks(x0, x1):
        px = sx(tx)
        out.append(
            f'<line x1="{_fmt(px)}" y1="{mt}" x2="{_fmt(px)}" y2="{mt + ph}" '
            f'stroke="#e0e0e0" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(px)}" y="{mt + ph + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" fill="#444444">{_fmt(tx)}</text>'
        )
    for ty in nice_ticks(y0, y1):
        py = sy(ty)
        out.append(
            f'<line x1="{ml}" y1="{_fmt(py)}" x2="{ml + pw}" y2="{_fmt(py)}" '
            f'stroke="#e0e0e0" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{ml - 8}" y="{_fmt(py + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11" fill="#444444">{_fmt(ty)}</text>'
        )
    out.append(
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
        f'stroke="#888888" stroke-width="1"/>'
    )

    for k, (name, arr) in enumerate(ys.items()):
        color = PALETTE[k % len(PALETTE)]
        segment: list = []
        pieces = []
        for xi, yi in zip(xv, arr):
            if math.isfinite(xi) and math.isfinite(yi):
                segment.append((sx(xi), sy(yi)))
            elif segment:
                pieces.append(segment)
                segment = []
        if segment:
            pieces.append(segment)
        for seg in pieces:
            if len(seg) == 1:
                px, py = seg[0]
                out.append(
                    f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2" fill="{color}"/>'
                )
            else:
                pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in seg)
                out.append(
                    f'<polyline points="{pts}" fill="none" stroke="{color}" '
                    f'stroke-width="1.5"/>'
                )

    lx = ml + pw - 10
    for k, name in enumerate(ys):
        color = PALETTE[k % len(PALETTE)]
        ly = mt + 14 + 16 * k
        out.append(
            f'<line x1="{_fmt(lx - 32)}" y1="{_fmt(ly - 4)}" x2="{_fmt(lx - 12)}" '
            f'y2="{_fmt(ly - 4)}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{_fmt(lx - 38)}" y="{_fmt(ly)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11" fill="#222222">{_esc(name)}</text>'
        )

    if xlabel:
        out.append(
            f'<text x="{_fmt(ml + pw / 2)}" y="{height - 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" fill="#222222">{_esc(xlabel)}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="16" y="{_fmt(mt + ph / 2)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" fill="#222222" '
            f'transform="rotate(-90 16 {_fmt(mt + ph / 2)})">{_esc(ylabel)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap(
    x,
    y,
    z,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 640,
    height: int = 480,
    zlabel: str = "",
) -> str:
    """SVG cell heatmap of z over a full rectangular (x, y) grid.

    x, y, z are flat arrays; x and y must jointly enumerate a complete
    cartesian product.  Cells are quantized to a fixed number of color
    levels and merged into horizontal runs, which keeps files small on the
    large mostly-flat grids the scans produce.  NaN cells are left unfilled.
    """
    xv = np.asarray(x, dtype=np.float64).reshape(-1)
    yv = np.asarray(y, dtype=np.float64).reshape(-1)
    zv = np.asarray(z, dtype=np.float64).reshape(-1)
    if not xv.size == yv.size == zv.size:
        raise ValueError("x, y, z must have equal length")
    xu = np.unique(xv)
    yu = np.unique(yv)
    nx, ny = xu.size, yu.size
    if nx * ny != zv.size:
        raise ValueError("points do not form a full rectangular grid")
    ix = np.searchsorted(xu, xv)
    iy = np.searchsorted(yu, yv)
    grid = np.full((ny, nx), math.nan)
    grid[iy, ix] = zv

    z0, z1 = _finite_range(zv)

    ml, mr, mt, mb = 70, 96, 36, 52
    pw = width - ml - mr
    ph = height - mt - mb

    def edges(centers: np.ndarray) -> np.ndarray:
        if centers.size == 1:
            return np.array([centers[0] - 0.5, centers[0] + 0.5])
        mid = (centers[:-1] + centers[1:]) / 2.0
        first = centers[0] - (centers[1] - centers[0]) / 2.0
        last = centers[-1] + (centers[-1] - centers[-2]) / 2.0
        return np.concatenate(([first], mid, [last]))

    xe = edges(xu)
    ye = edges(yu)

    def sx(v: float) -> float:
        return ml + (v - xe[0]) / (xe[-1] - xe[0]) * pw

    def sy(v: float) -> float:
        return mt + ph - (v - ye[0]) / (ye[-1] - ye[0]) * ph

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')
    if title:
        out.append(
            f'<text x="{_fmt(width / 2)}" y="22" text-anchor="middle" '
            f'font-family="sans-serif" font-size="15" fill="#222222">{_esc(title)}</text>'
        )

    span = z1 - z0
    levels = np.full((ny, nx), -1, dtype=np.int64)
    finite = np.isfinite(grid)
    scaled = np.clip((grid[finite] - z0) / span, 0.0, 1.0)
    levels[finite] = np.minimum(
        _N_LEVELS - 1, (scaled * _N_LEVELS).astype(np.int64)
    )
    for j in range(ny):
        py0 = sy(ye[j + 1])
        hgt = sy(ye[j]) - py0
        i = 0
        while i < nx:
            lev = levels[j, i]
            if lev < 0:
                i += 1
                continue
            run = i
            while run + 1 < nx and levels[j, run + 1] == lev:
                run += 1
            px0 = sx(xe[i])
            wid = sx(xe[run + 1]) - px0
            out.append(
                f'<rect x="{_fmt(px0)}" y="{_fmt(py0)}" width="{_fmt(wid)}" '
                f'height="{_fmt(hgt)}" fill="{_HEAT_LUT[lev]}"/>'
            )
            i = run + 1

    for tx in nice_ticks(float(xe[0]), float(xe[-1])):
        px = sx(tx)
        out.append(
            f'<text x="{_fmt(px)}" y="{mt + ph + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" fill="#444444">{_fmt(tx)}</text>'
        )
        out.append(
            f'<line x1="{_fmt(px)}" y1="{mt + ph}" x2="{_fmt(px)}" '
            f'y2="{mt + ph + 4}" stroke="#888888" stroke-width="1"/>'
        )
    for ty in nice_ticks(float(ye[0]), float(ye[-1])):
        py = sy(ty)
        out.append(
            f'<text x="{ml - 8}" y="{_fmt(py + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11" fill="#444444">{_fmt(ty)}</text>'
        )
        out.append(
            f'<line x1="{ml - 4}" y1="{_fmt(py)}" x2="{ml}" y2="{_fmt(py)}" '
            f'stroke="#888888" stroke-width="1"/>'
        )
    out.append(
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
        f'stroke="#888888" stroke-width="1"/>'
    )

    bar_x = ml + pw + 22
    bar_w = 14
    for k in range(_N_LEVELS):
        seg_top = mt + ph - (k + 1) / _N_LEVELS * ph
        seg_h = ph / _N_LEVELS
        out.append(
            f'<rect x="{bar_x}" y="{_fmt(seg_top)}" width="{bar_w}" '
            f'height="{_fmt(seg_h + 0.5)}" fill="{_HEAT_LUT[k]}"/>'
        )
    out.append(
        f'<rect x="{bar_x}" y="{mt}" width="{bar_w}" height="{ph}" fill="none" '
        f'stroke="#888888" stroke-width="1"/>'
    )
    for tz in nice_ticks(z0, z1, target=5):
        if tz < z0 or tz > z1:
            continue
        py = mt + ph - (tz - z0) / span * ph
        out.append(
            f'<line x1="{bar_x + bar_w}" y1="{_fmt(py)}" x2="{bar_x + bar_w + 4}" '
            f'y2="{_fmt(py)}" stroke="#888888" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{bar_x + bar_w + 7}" y="{_fmt(py + 4)}" text-anchor="start" '
            f'font-family="sans-serif" font-size="10" fill="#444444">{_fmt(tz)}</text>'
        )
    if zlabel:
        out.append(
            f'<text x="{_fmt(bar_x + bar_w / 2)}" y="{mt - 8}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" fill="#222222">{_esc(zlabel)}</text>'
        )

    if xlabel:
        out.append(
            f'<text x="{_fmt(ml + pw / 2)}" y="{height - 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" fill="#222222">{_esc(xlabel)}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="16" y="{_fmt(mt + ph / 2)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" fill="#222222" '
            f'transform="rotate(-90 16 {_fmt(mt + ph / 2)})">{_esc(ylabel)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
