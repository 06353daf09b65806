"""SVG rendering of grid designs with optional outlet values and channel coloring."""

from __future__ import annotations

import math
from typing import Mapping

from .engine import OutletReport
from .flow import EdgeId
from .model import GridDesign
from .profiles import SPProfile

_SCALE = 40.0  # px per lattice unit
_MARGIN = 60.0


def _color_for(concentration: float) -> str:
    """Reactant red at 1, buffer blue at 0."""
    c = min(max(concentration, 0.0), 1.0)
    red = int(round(40 + 200 * c))
    blue = int(round(40 + 200 * (1.0 - c)))
    return f"rgb({red},60,{blue})"


def render_design_svg(
    design: GridDesign,
    report: OutletReport | None = None,
    exit_profiles: Mapping[EdgeId, SPProfile] | None = None,
) -> str:
    """Draw the design; labels outlets with concentrations when a report is given.

    With per-edge profiles, channels are colored by their mean concentration
    (red = reactant, blue = buffer); otherwise channels are gray.
    """

    def xy(col: float, row: float) -> tuple[float, float]:
        return _MARGIN + col * _SCALE, _MARGIN + (row + 1.0) * _SCALE

    width_px = 2 * _MARGIN + design.cols * _SCALE
    height_px = 2 * _MARGIN + (design.rows + 2) * _SCALE
    stroke = max(3.0, _SCALE * design.channel_width / design.channel_length)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px:.0f}" '
        f'height="{height_px:.0f}" viewBox="0 0 {width_px:.0f} {height_px:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]

    def channel_color(edge: EdgeId) -> str:
        if exit_profiles and edge in exit_profiles:
            return _color_for(exit_profiles[edge].mean())
        return "#8a8a8a"

    def line(p0, p1, color):
        parts.append(
            f'<line x1="{p0[0]:.1f}" y1="{p0[1]:.1f}" x2="{p1[0]:.1f}" y2="{p1[1]:.1f}" '
            f'stroke="{color}" stroke-width="{stroke:.1f}" stroke-linecap="round"/>'
        )

    for r, c in sorted(design.horizontal_channels):
        line(xy(c, r), xy(c + 1, r), channel_color(("h", r, c)))
    for r, c in sorted(design.vertical_channels):
        line(xy(c, r), xy(c, r + 1), channel_color(("v", r, c)))
    for i, inlet in enumerate(design.inlets):
        top = xy(inlet.col, -1)
        line(top, xy(inlet.col, 0), channel_color(("si", i)))
        parts.append(
            f'<text x="{top[0]:.1f}" y="{top[1] - 18:.1f}" text-anchor="middle" '
            f'font-size="12" font-family="sans-serif">c={inlet.concentration:g} '
            f"v={inlet.velocity:g}</text>"
        )
        parts.append(
            f'<circle cx="{top[0]:.1f}" cy="{top[1] - 6:.1f}" r="4" '
            f'fill="{_color_for(inlet.concentration)}"/>'
        )
    for j, col in enumerate(design.outlets):
        bottom = xy(col, design.rows + 1)
        line(xy(col, design.rows), bottom, channel_color(("so", j)))
        label = "outlet"
        if report is not None:
            value = report.outlets[j].concentration
            label = "no flow" if math.isnan(value) else f"{value:.3f}"
        parts.append(
            f'<text x="{bottom[0]:.1f}" y="{bottom[1] + 22:.1f}" text-anchor="middle" '
            f'font-size="13" font-family="sans-serif">{label}</text>'
        )
    # lattice dots for orientation
    for r in range(design.rows + 1):
        for c in range(design.cols + 1):
            x, y = xy(c, r)
            parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="1.5" fill="#444"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
