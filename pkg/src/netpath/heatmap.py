"""Netpath plot as a self-contained SVG, or the raw matrix as CSV."""

from __future__ import annotations

import csv
import io
from xml.sax.saxutils import escape

from .errors import InsufficientPaths
from .inconsistency import NetpathMatrix

CELL = 56
MARGIN = 64
LEGEND_W = 16
LIGHT = (247, 251, 255)
DARK = (8, 48, 107)


def shade(value: float) -> str:
    """Linear ramp from LIGHT (0) to DARK (1)."""
    t = min(1.0, max(0.0, float(value)))
    rgb = (round(lo + t * (hi - lo)) for lo, hi in zip(LIGHT, DARK))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _check(matrix: NetpathMatrix) -> int:
    P = matrix.m.shape[0]
    if P < 2:
        raise InsufficientPaths(f"a Netpath plot needs at least 2 paths, got {P}")
    return P


def netpath_csv(matrix: NetpathMatrix) -> str:
    _check(matrix)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(matrix.labels))
    for label, row in zip(matrix.labels, matrix.m):
        writer.writerow([label] + [repr(float(v)) for v in row])
    return buf.getvalue()


def netpath_svg(matrix: NetpathMatrix, title: str | None = None) -> str:
    P = _check(matrix)
    grid = P * CELL
    top = MARGIN + (24 if title else 0)
    width = MARGIN + grid + 3 * LEGEND_W + 40
    height = top + grid + MARGIN // 2 + (20 if matrix.degenerate else 0)
    font = max(8, min(14, CELL // 4))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{MARGIN + grid / 2}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>')
    for r in range(P):
        for c in range(P):
            v = float(matrix.m[r, c])
            x, y = MARGIN + c * CELL, top + r * CELL
            ink = "#ffffff" if v > 0.55 else "#000000"
            out.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{shade(v)}" stroke="#ffffff"/>'
            )
            out.append(
                f'<text x="{x + CELL / 2}" y="{y + CELL / 2}" text-anchor="middle" '
                f'dominant-baseline="central" font-size="{font}" fill="{ink}">{v:.2f}</text>'
            )
    for k, label in enumerate(matrix.labels):
        lab = escape(label)
        cx = MARGIN + k * CELL + CELL / 2
        cy = top + k * CELL + CELL / 2
        out.append(f'<text x="{cx}" y="{top - 8}" text-anchor="middle" font-size="{font}">{lab}</text>')
        out.append(
            f'<text x="{MARGIN - 8}" y="{cy}" text-anchor="end" dominant-baseline="central" '
            f'font-size="{font}">{lab}</text>'
        )
    # legend: 0 at the bottom, 1 at the top
    lx = MARGIN + grid + LEGEND_W
    steps = 20
    h = grid / steps
    for s in range(steps):
        v = 1.0 - (s + 0.5) / steps
        out.append(f'<rect x="{lx}" y="{top + s * h:.2f}" width="{LEGEND_W}" height="{h:.2f}" fill="{shade(v)}"/>')
    out.append(f'<text x="{lx + LEGEND_W + 4}" y="{top + 6}" font-size="10">1</text>')
    out.append(f'<text x="{lx + LEGEND_W + 4}" y="{top + grid}" font-size="10">0</text>')
    if matrix.degenerate:
        out.append(
            f'<text x="{MARGIN}" y="{top + grid + 24}" font-size="12" fill="#b00000">'
            "warning: all path effects are equal, no disagreement to scale</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_netpath_heatmap(matrix: NetpathMatrix, fmt: str = "svg", title: str | None = None) -> bytes:
    if fmt == "csv":
        return netpath_csv(matrix).encode("utf-8")
    if fmt == "svg":
        return netpath_svg(matrix, title).encode("utf-8")
    raise ValueError(f"unknown heatmap format {fmt!r}")
