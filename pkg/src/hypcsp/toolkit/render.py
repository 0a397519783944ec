"""Poincare-disk SVG rendering of tessellation graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional
from xml.sax.saxutils import escape

import numpy as np

from .. import geometry as geo
from ..minesweeper import MINE, Board
from ..tessellation import HypGraph

# fixed palettes; clue colours loosely follow the classic game
COLOR_PALETTE = ["#f4f1de", "#f2cc25", "#3d7dd8", "#81b29a", "#e07a5f", "#6d597a", "#2a9d8f", "#bc6c25"]
CLUE_PALETTE = ["#e8e8e8", "#1f4fd1", "#1c7c2a", "#d11f1f", "#1a1a7a", "#7a1a1a",
                "#1a7a7a", "#222222", "#777777", "#aa00aa", "#aa5500"]
UNKNOWN_FILL = "#9a9a9a"
MINE_FILL = "#d62828"

SEGMENTS_PER_EDGE = 8


@dataclass(frozen=True)
class RenderStyle:
    fill: str = "color"  # "color", "clue" or "solution"
    stroke_width: float = 1.0
    radius_px: float = 400.0
    labels: bool = False

    def __post_init__(self):
        if self.radius_px <= 0:
            raise ValueError("disk radius must be positive")
        if self.fill not in ("color", "clue", "solution"):
            raise ValueError(f"unknown fill rule {self.fill!r}")


def _cell_corners(g: HypGraph) -> list:
    """Corner points of each cell, as a regular polygon around its center.

    Polygon order is the graph's max degree; the circumradius follows from
    the median edge length (adjacent centers sit twice the inradius apart),
    and one corner-bisector is aligned with the lowest-id neighbour.
    """
    P = g.positions
    p = max(g.max_degree(), 3)
    if g.edges:
        E = np.array(g.edges)
        s = float(np.median(geo.dist(P[E[:, 0]], P[E[:, 1]])))
    else:
        s = 1.0
    circ = math.atanh(min(math.tanh(s / 2.0) / math.cos(math.pi / p), 1.0 - 1e-12))
    out = []
    for v in range(g.n):
        c = P[v]
        nb = g.adjacency[v]
        base = geo.direction(c, P[nb[0]]) if nb else 0.0
        frame = geo.frame_at(c).matrix
        corners = []
        for j in range(p):
            th = base + (2 * j + 1) * math.pi / p
            local = np.array([math.sinh(circ) * math.cos(th), math.sinh(circ) * math.sin(th), math.cosh(circ)])
            corners.append(geo.normalize(frame @ local))
        out.append(corners)
    return out


def _polyline(corners) -> list:
    pts = []
    ts = np.linspace(0.0, 1.0, SEGMENTS_PER_EDGE + 1)[:-1]
    for i, a in enumerate(corners):
        b = corners[(i + 1) % len(corners)]
        pts.extend(geo.geodesic_point(a, b, ts))
    return [geo.to_poincare(np.asarray(q)) for q in pts]


def _fills(g: HypGraph, overlay, style: RenderStyle) -> list:
    if overlay is None:
        return [COLOR_PALETTE[0]] * g.n
    if isinstance(overlay, tuple) and len(overlay) == 2 and isinstance(overlay[0], Board):
        board, coloring = overlay
    elif isinstance(overlay, Board):
        board, coloring = overlay, None
    else:
        board, coloring = None, list(overlay)
    if board is not None and board.graph is not g and board.graph.n != g.n:
        raise ValueError("board does not match the graph")
    if coloring is not None and len(coloring) != g.n:
        raise ValueError("colouring does not match the graph")
    fills = []
    for v in range(g.n):
        if style.fill == "color" and coloring is not None:
            fills.append(COLOR_PALETTE[int(coloring[v]) % len(COLOR_PALETTE)])
        elif board is not None and v in board.clues:
            fills.append(CLUE_PALETTE[min(board.clues[v], len(CLUE_PALETTE) - 1)])
        elif style.fill == "solution" and coloring is not None:
            fills.append(MINE_FILL if coloring[v] == MINE else COLOR_PALETTE[0])
        elif board is not None:
            known = board.known(v)
            fills.append(MINE_FILL if known == MINE else UNKNOWN_FILL)
        else:
            fills.append(COLOR_PALETTE[0])
    return fills


def render_svg(g: HypGraph, overlay=None, style: Optional[RenderStyle] = None) -> str:
    """SVG 1.1 document of the graph's cells in the Poincare disk.

    ``overlay`` may be ``None``, a colouring (sequence of colour indices), a
    :class:`Board`, or a ``(Board, colouring)`` pair.
    """
    style = style or RenderStyle()
    if g.positions is None:
        raise ValueError("graph has no embedding")
    R = style.radius_px
    pad = 2.0 * style.stroke_width + 2.0
    size = 2.0 * (R + pad)

    def px(uv):
        return f"{pad + R * (1.0 + uv[0]):.3f},{pad + R * (1.0 - uv[1]):.3f}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.3f} {size:.3f}">',
        f'<circle cx="{pad + R:.3f}" cy="{pad + R:.3f}" r="{R:.3f}" fill="none" stroke="#000000" '
        f'stroke-width="{style.stroke_width:.3f}"/>',
    ]
    if g.n:
        fills = _fills(g, overlay, style)
        for v, corners in enumerate(_cell_corners(g)):
            pts = " ".join(px(uv) for uv in _polyline(corners))
            parts.append(f'<polygon data-cell="{v}" points="{pts}" fill="{fills[v]}" stroke="#333333" '
                         f'stroke-width="{style.stroke_width:.3f}"/>')
        if style.labels and isinstance(overlay, (Board, tuple)):
            board = overlay if isinstance(overlay, Board) else overlay[0]
            for v, k in sorted(board.clues.items()):
                uv = geo.to_poincare(g.positions[v])
                scale = 1.0 - float(uv @ uv)
                x, y = px(uv).split(",")
                parts.append(f'<text x="{x}" y="{y}" font-size="{max(2.0, 0.12 * R * scale):.2f}" '
                             f'text-anchor="middle" dominant-baseline="central">{escape(str(k))}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
