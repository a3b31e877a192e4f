"""Minimal deterministic SVG emission for report figures."""

from __future__ import annotations

from typing import List, Sequence, Tuple


def _fmt(x: float) -> str:
    return f"{x:.4f}"


class SvgCanvas:
    def __init__(self, width: float, height: float):
        self.width = width
        self.height = height
        self.parts: List[str] = []

    def rect(self, x, y, w, h, fill="#444444", opacity=1.0):
        self.parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'fill="{fill}" fill-opacity="{_fmt(opacity)}"/>'
        )

    def line(self, x1, y1, x2, y2, stroke="#000000", width=1.0):
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{_fmt(width)}"/>'
        )

    def polygon(self, points: Sequence[Tuple[float, float]], stroke="#000000", fill="none", width=1.0):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self.parts.append(
            f'<polygon points="{pts}" fill="{fill}" stroke="{stroke}" stroke-width="{_fmt(width)}"/>'
        )

    def circle(self, cx, cy, r, fill="#cc3333"):
        self.parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="{fill}"/>'
        )

    def to_string(self) -> str:
        header = (
            '<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{_fmt(self.width)}" height="{_fmt(self.height)}" '
            f'viewBox="0 0 {_fmt(self.width)} {_fmt(self.height)}">'
        )
        return header + "".join(self.parts) + "</svg>"


def solution_slice_svg(sol, size: float = 400.0) -> str:
    """Flagged cells of a 1-parameter solution set as a (w, direction) raster."""
    canvas = SvgCanvas(size, size)
    nw = max(sol.n_w_cells, 1)
    nc = sol.n_classes
    cw, ch = size / nw, size / nc
    canvas.rect(0, 0, size, size, fill="#f5f5f5")
    for (j, i) in sorted(sol.cells):
        canvas.rect(j * cw, size - (i + 1) * ch, cw, ch, fill="#27556c")
    return canvas.to_string()


def chord_overlay_svg(scene, report, n_samples: int = 5, size: float = 400.0) -> str:
    """Domain outline with sampled solution chords."""
    import numpy as np

    from .chords import chord_solutions

    allpts = np.concatenate(scene.loops)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1])) or 1.0
    margin = 0.05 * size

    def tx(p):
        return (
            margin + (p[0] - lo[0]) / span * (size - 2 * margin),
            size - (margin + (p[1] - lo[1]) / span * (size - 2 * margin)),
        )

    canvas = SvgCanvas(size, size)
    for loop in scene.loops:
        canvas.polygon([tx(p) for p in loop], stroke="#333333")
    rng = np.random.default_rng(7)
    drawn = 0
    tries = 0
    while drawn < n_samples and tries < 200:
        tries += 1
        w = lo + rng.uniform(0.15, 0.85, 2) * (hi - lo)
        if not scene.contains(w) or scene.boundary_distance(w) < 1e-6:
            continue
        sols = chord_solutions(scene, w)
        if not sols:
            continue
        best = min(sols, key=lambda s: s.residual)
        x1, y1 = tx(best.x1)
        x2, y2 = tx(best.x2)
        canvas.line(x1, y1, x2, y2, stroke="#27556c", width=1.2)
        cx, cy = tx(w)
        canvas.circle(cx, cy, 2.5)
        drawn += 1
    return canvas.to_string()
