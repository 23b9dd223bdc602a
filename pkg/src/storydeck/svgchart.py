"""Minimal inline-SVG renderer for the five chart types and the three
annotation kinds.  Used by the self-contained HTML export; the interactive
UI has its own renderer."""

from __future__ import annotations

import html
import math
from typing import Any, Sequence

WIDTH, HEIGHT = 360, 220
PAD_LEFT, PAD_RIGHT, PAD_TOP, PAD_BOTTOM = 42, 12, 12, 34

BASE_COLOR = "#4c78a8"
DIM_COLOR = "#c3cdd9"


def _scale_y(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    lo = min(lo, 0.0)
    if hi == lo:
        hi = lo + 1.0
    return lo, hi


def _ypix(v: float, lo: float, hi: float) -> float:
    inner = HEIGHT - PAD_TOP - PAD_BOTTOM
    return PAD_TOP + inner * (1 - (v - lo) / (hi - lo))


def _xpix(i: int, n: int) -> float:
    inner = WIDTH - PAD_LEFT - PAD_RIGHT
    if n == 1:
        return PAD_LEFT + inner / 2
    return PAD_LEFT + inner * i / (n - 1)


def _band(i: int, n: int) -> tuple[float, float]:
    inner = WIDTH - PAD_LEFT - PAD_RIGHT
    step = inner / n
    return PAD_LEFT + step * i + step * 0.12, step * 0.76


def _color_for(i: int, targets: set[str], keys: list[str], any_highlight: bool) -> str:
    if not any_highlight:
        return BASE_COLOR
    return "#e4572e" if keys[i] in targets else DIM_COLOR


def _collect_targets(annotations: list[dict]) -> set[str]:
    targets: set[str] = set()
    for ann in annotations:
        if ann.get("kind") in ("point_highlight", "pair_link_with_arrows"):
            targets.update(str(t) for t in ann.get("targets", []))
    return targets


def render_chart_svg(chart: dict, series: Sequence[Sequence[Any]]) -> str:
    """Render an embellished chart spec plus its aggregated series."""
    if not series:
        return "<svg/>"
    mark = chart.get("mark", "bar")
    annotations = chart.get("annotations", [])
    keys = [str(k) for k, _ in series]
    values = [float(v) for _, v in series]
    n = len(series)
    targets = _collect_targets(annotations)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" role="img">'
    ]

    if mark == "arc":
        parts.extend(_render_arc(keys, values, targets))
    else:
        lo, hi = _scale_y(values)
        axis_y = _ypix(max(lo, 0.0), lo, hi)
        parts.append(
            f'<line x1="{PAD_LEFT}" y1="{axis_y:.1f}" x2="{WIDTH - PAD_RIGHT}" '
            f'y2="{axis_y:.1f}" stroke="#999"/>'
        )
        if mark == "bar":
            for i, v in enumerate(values):
                x, w = _band(i, n)
                y = _ypix(v, lo, hi)
                color = _color_for(i, targets, keys, bool(targets))
                parts.append(
                    f'<rect x="{x:.1f}" y="{min(y, axis_y):.1f}" width="{w:.1f}" '
                    f'height="{abs(axis_y - y):.1f}" fill="{color}"/>'
                )
        elif mark in ("line", "area"):
            points = " ".join(
                f"{_xpix(i, n):.1f},{_ypix(v, lo, hi):.1f}" for i, v in enumerate(values)
            )
            if mark == "area":
                first_x, last_x = _xpix(0, n), _xpix(n - 1, n)
                parts.append(
                    f'<polygon points="{first_x:.1f},{axis_y:.1f} {points} '
                    f'{last_x:.1f},{axis_y:.1f}" fill="{BASE_COLOR}" opacity="0.35"/>'
                )
            parts.append(
                f'<polyline points="{points}" fill="none" stroke="{BASE_COLOR}" stroke-width="2"/>'
            )
            for i, v in enumerate(values):
                color = _color_for(i, targets, keys, bool(targets))
                r = 5 if keys[i] in targets else 3
                parts.append(
                    f'<circle cx="{_xpix(i, n):.1f}" cy="{_ypix(v, lo, hi):.1f}" '
                    f'r="{r}" fill="{color}"/>'
                )
        else:  # point
            for i, v in enumerate(values):
                color = _color_for(i, targets, keys, bool(targets))
                parts.append(
                    f'<circle cx="{_xpix(i, n):.1f}" cy="{_ypix(v, lo, hi):.1f}" '
                    f'r="4" fill="{color}"/>'
                )
        parts.extend(_render_overlays(annotations, keys, values, lo, hi, mark, n))
        parts.extend(_render_x_labels(keys, mark, n))

    parts.append("</svg>")
    return "".join(parts)


def _render_x_labels(keys: list[str], mark: str, n: int) -> list[str]:
    parts = []
    shown = keys if n <= 8 else [keys[0], keys[n // 2], keys[-1]]
    for key in shown:
        i = keys.index(key)
        if mark == "bar":
            x, w = _band(i, n)
            cx = x + w / 2
        else:
            cx = _xpix(i, n)
        parts.append(
            f'<text x="{cx:.1f}" y="{HEIGHT - 12}" font-size="10" fill="#555" '
            f'text-anchor="middle">{html.escape(key[:12])}</text>'
        )
    return parts


def _anchor(i: int, value: float, lo: float, hi: float, mark: str, n: int) -> tuple[float, float]:
    if mark == "bar":
        x, w = _band(i, n)
        return x + w / 2, _ypix(value, lo, hi)
    return _xpix(i, n), _ypix(value, lo, hi)


def _render_overlays(
    annotations: list[dict],
    keys: list[str],
    values: list[float],
    lo: float,
    hi: float,
    mark: str,
    n: int,
) -> list[str]:
    parts = []
    for ann in annotations:
        kind = ann.get("kind")
        color = (ann.get("style") or {}).get("color", "#e4572e")
        if kind == "trend_line" and ann.get("slope") is not None:
            slope, intercept = ann["slope"], ann.get("intercept", 0.0)
            x1, y1 = _anchor(0, intercept, lo, hi, mark, n)
            x2, y2 = _anchor(n - 1, slope * (n - 1) + intercept, lo, hi, mark, n)
            parts.append(
                f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                f'stroke="{color}" stroke-width="2" stroke-dasharray="6 3"/>'
            )
        elif kind == "pair_link_with_arrows":
            targets = [str(t) for t in ann.get("targets", [])]
            anchors = [
                _anchor(keys.index(t), values[keys.index(t)], lo, hi, mark, n)
                for t in targets
                if t in keys
            ]
            if len(anchors) == 2:
                (x1, y1), (x2, y2) = anchors
                parts.append(
                    f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                    f'stroke="{color}" stroke-width="2"/>'
                )
                for (x, y) in (anchors[0], anchors[1]):
                    up = ann.get("direction") == "increasing"
                    tip = y - 10 if up else y + 10
                    parts.append(
                        f'<path d="M {x - 5:.1f} {y:.1f} L {x + 5:.1f} {y:.1f} '
                        f'L {x:.1f} {tip:.1f} Z" fill="{color}"/>'
                    )
        elif kind == "point_highlight":
            for t in ann.get("targets", []):
                t = str(t)
                if t not in keys:
                    continue
                i = keys.index(t)
                x, y = _anchor(i, values[i], lo, hi, mark, n)
                parts.append(
                    f'<circle cx="{x:.1f}" cy="{y:.1f}" r="8" fill="none" '
                    f'stroke="{color}" stroke-width="2"/>'
                )
    return parts


def _render_arc(keys: list[str], values: list[float], targets: set[str]) -> list[str]:
    cx, cy, r = WIDTH / 2, HEIGHT / 2, min(WIDTH, HEIGHT) / 2 - 20
    total = sum(abs(v) for v in values) or 1.0
    parts = []
    angle = -math.pi / 2
    for i, v in enumerate(values):
        frac = abs(v) / total
        end = angle + 2 * math.pi * frac
        x1, y1 = cx + r * math.cos(angle), cy + r * math.sin(angle)
        x2, y2 = cx + r * math.cos(end), cy + r * math.sin(end)
        large = 1 if frac > 0.5 else 0
        highlighted = keys[i] in targets
        color = _color_for(i, targets, keys, bool(targets))
        parts.append(
            f'<path d="M {cx:.1f} {cy:.1f} L {x1:.1f} {y1:.1f} '
            f'A {r:.1f} {r:.1f} 0 {large} 1 {x2:.1f} {y2:.1f} Z" '
            f'fill="{color}" stroke="white"'
            + (' stroke-width="2"' if highlighted else "")
            + "/>"
        )
        angle = end
    return parts
