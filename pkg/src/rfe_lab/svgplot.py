"""Minimal SVG line plots for campaign outputs.

Deliberately tiny: polylines, ticks, and a text legend, written as a
single static SVG file. Campaigns emit CSV as the primary artifact and
these plots as a visual check, so no plotting library is pulled in.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

__all__ = ["Series", "line_plot"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
_MARGIN_LEFT = 72.0
_MARGIN_RIGHT = 24.0
_MARGIN_TOP = 36.0
_MARGIN_BOTTOM = 52.0


class Series:
    """One labeled polyline."""

    def __init__(self, label: str, xs: Sequence[float], ys: Sequence[float]) -> None:
        if len(xs) != len(ys):
            raise ValueError(f"series {label!r}: {len(xs)} x values vs {len(ys)} y values")
        self.label = label
        self.xs = [float(x) for x in xs]
        self.ys = [float(y) for y in ys]


def _usable(value: float, log: bool) -> bool:
    return math.isfinite(value) and (not log or value > 0.0)


def _axis_range(values: list[float], log: bool) -> tuple[float, float]:
    if not values:
        return (0.0, 1.0) if not log else (0.1, 1.0)
    lo, hi = min(values), max(values)
    if log:
        if lo == hi:
            return lo / 10.0, hi * 10.0
        return lo, hi
    if lo == hi:
        pad = 1.0 if lo == 0.0 else abs(lo) * 0.1
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        first = math.ceil(math.log10(lo) - 1e-9)
        last = math.floor(math.log10(hi) + 1e-9)
        decades = [10.0**e for e in range(first, last + 1)]
        if len(decades) > 10:
            step = math.ceil(len(decades) / 10)
            decades = decades[::step]
        return decades or [lo, hi]
    span = hi - lo
    raw = span / 5.0
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _tick_label(value: float, log: bool) -> str:
    if log:
        exponent = math.log10(value)
        if abs(exponent - round(exponent)) < 1e-9:
            return f"1e{int(round(exponent))}"
    if value == int(value) and abs(value) < 1e7:
        return str(int(value))
    return f"{value:.3g}"


def line_plot(
    path: str | Path,
    series: Sequence[Series],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    logx: bool = False,
    logy: bool = False,
    width: int = 720,
    height: int = 480,
) -> Path:
    """Render labeled polylines to an SVG file and return its path."""
    out = Path(path)
    xs = [x for s in series for x, y in zip(s.xs, s.ys) if _usable(x, logx) and _usable(y, logy)]
    ys = [y for s in series for x, y in zip(s.xs, s.ys) if _usable(x, logx) and _usable(y, logy)]
    x_lo, x_hi = _axis_range(xs, logx)
    y_lo, y_hi = _axis_range(ys, logy)

    def tx(value: float) -> float:
        a, b = (math.log10(x_lo), math.log10(x_hi)) if logx else (x_lo, x_hi)
        v = math.log10(value) if logx else value
        frac = 0.5 if b == a else (v - a) / (b - a)
        return _MARGIN_LEFT + frac * (width - _MARGIN_LEFT - _MARGIN_RIGHT)

    def ty(value: float) -> float:
        a, b = (math.log10(y_lo), math.log10(y_hi)) if logy else (y_lo, y_hi)
        v = math.log10(value) if logy else value
        frac = 0.5 if b == a else (v - a) / (b - a)
        return height - _MARGIN_BOTTOM - frac * (height - _MARGIN_TOP - _MARGIN_BOTTOM)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    plot_bottom = height - _MARGIN_BOTTOM
    plot_right = width - _MARGIN_RIGHT
    parts.append(
        f'<rect x="{_MARGIN_LEFT}" y="{_MARGIN_TOP}" width="{plot_right - _MARGIN_LEFT}" '
        f'height="{plot_bottom - _MARGIN_TOP}" fill="none" stroke="#333"/>'
    )
    for t in _ticks(x_lo, x_hi, logx):
        if not x_lo <= t <= x_hi:
            continue
        px = tx(t)
        parts.append(f'<line x1="{px:.1f}" y1="{plot_bottom}" x2="{px:.1f}" y2="{plot_bottom + 5}" stroke="#333"/>')
        parts.append(
            f'<text x="{px:.1f}" y="{plot_bottom + 18}" text-anchor="middle">{_tick_label(t, logx)}</text>'
        )
    for t in _ticks(y_lo, y_hi, logy):
        if not y_lo <= t <= y_hi:
            continue
        py = ty(t)
        parts.append(f'<line x1="{_MARGIN_LEFT - 5}" y1="{py:.1f}" x2="{_MARGIN_LEFT}" y2="{py:.1f}" stroke="#333"/>')
        parts.append(
            f'<text x="{_MARGIN_LEFT - 8}" y="{py + 4:.1f}" text-anchor="end">{_tick_label(t, logy)}</text>'
        )
    if title:
        parts.append(
            f'<text x="{width / 2:.0f}" y="{_MARGIN_TOP - 12}" text-anchor="middle" '
            f'font-size="14">{title}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{(_MARGIN_LEFT + plot_right) / 2:.0f}" y="{height - 12}" '
            f'text-anchor="middle">{xlabel}</text>'
        )
    if ylabel:
        cy = (_MARGIN_TOP + plot_bottom) / 2.0
        parts.append(
            f'<text x="16" y="{cy:.0f}" text-anchor="middle" transform="rotate(-90 16 {cy:.0f})">'
            f"{ylabel}</text>"
        )
    for idx, s in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        points = " ".join(
            f"{tx(x):.2f},{ty(y):.2f}"
            for x, y in zip(s.xs, s.ys)
            if _usable(x, logx) and _usable(y, logy)
        )
        if points:
            parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = _MARGIN_TOP + 16 + 16 * idx
        lx = plot_right - 150
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 30}" y="{ly}">{s.label}</text>')
    parts.append("</svg>")
    out.write_text("\n".join(parts) + "\n")
    return out
