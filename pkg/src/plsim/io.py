"""Result persistence: CSV with full double precision, JSON summaries, and
self-contained SVG line charts (CSV is the authoritative artifact)."""

from __future__ import annotations

import json
import math
import os

import numpy as np


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def write_csv(path, header, columns):
    """Write columns (equal-length sequences) under a header row."""
    columns = [np.asarray(c) for c in columns]
    n = len(columns[0])
    for c in columns:
        if len(c) != n:
            raise ValueError("CSV columns must have equal length")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(n):
            fh.write(",".join(_fmt(c[i]) for c in columns) + "\n")


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    cols = [np.array([float(r[j]) for r in rows]) for j in range(len(header))]
    return header, cols


def write_json(path, payload):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def dump_matrix_coordinates(matrix, path):
    """Debug dump: one `row col value` line per stored entry."""
    coo = matrix.tocoo() if hasattr(matrix, "tocoo") else None
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        if coo is not None:
            for r, c, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{r} {c} {_fmt(v)}\n")
        else:
            arr = np.asarray(matrix)
            for r, c in zip(*np.nonzero(arr)):
                fh.write(f"{r} {c} {_fmt(arr[r, c])}\n")


# ---------------------------------------------------------------------------
# SVG line charts

def write_svg_lines(path, x, series, labels=None, title="", logy=False,
                    width=720, height=480):
    """Plot one or more y-series against x as an SVG polyline chart."""
    x = np.asarray(x, dtype=float)
    series = [np.asarray(s, dtype=float) for s in series]
    labels = labels or [f"series{i}" for i in range(len(series))]
    margin = 56

    ys = np.concatenate(series)
    finite = np.isfinite(ys)
    if logy:
        finite &= ys > 0
    ys = ys[finite]
    if len(ys) == 0:
        ys = np.array([0.0, 1.0])
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if logy:
        y_lo, y_hi = math.log10(y_lo), math.log10(y_hi)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    x_lo, x_hi = float(x.min()), float(x.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    def px(xv):
        return margin + (xv - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def py(yv):
        if logy:
            yv = math.log10(yv) if yv > 0 else y_lo
        return height - margin - (yv - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
              "#8c564b", "#17becf"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.0f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<line x1="{margin}" y1="{height-margin}" x2="{width-margin}" '
        f'y2="{height-margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height-margin}" stroke="black"/>',
    ]
    for i, (s, lab) in enumerate(zip(series, labels)):
        ok = np.isfinite(s) & (s > 0 if logy else np.ones_like(s, dtype=bool))
        pts = " ".join(f"{px(xv):.2f},{py(yv):.2f}"
                       for xv, yv in zip(x[ok], s[ok]))
        color = colors[i % len(colors)]
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        parts.append(f'<text x="{width-margin+4}" y="{margin + 16*i}" '
                     f'font-family="sans-serif" font-size="11" '
                     f'fill="{color}">{lab}</text>')
    lo_label = f"{10**y_lo:.3g}" if logy else f"{y_lo:.3g}"
    hi_label = f"{10**y_hi:.3g}" if logy else f"{y_hi:.3g}"
    parts.append(f'<text x="8" y="{height-margin}" font-family="sans-serif" '
                 f'font-size="11">{lo_label}</text>')
    parts.append(f'<text x="8" y="{margin}" font-family="sans-serif" '
                 f'font-size="11">{hi_label}</text>')
    parts.append(f'<text x="{margin}" y="{height-margin+16}" '
                 f'font-family="sans-serif" font-size="11">{x_lo:.3g}</text>')
    parts.append(f'<text x="{width-margin}" y="{height-margin+16}" '
                 f'text-anchor="end" font-family="sans-serif" '
                 f'font-size="11">{x_hi:.3g}</text>')
    parts.append("</svg>")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
