"""Deterministic SVG output for charts.

Byte-identical output for equal inputs: no timestamps, random ids or
locale-dependent formatting.  Dots that fall before the window are drawn at
x=0 as a ringed circle so the row still shows them; every dot is a circle,
so circle count always equals dot count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chart import PALETTE_KEYS, PPMChart, Timeline

# Hex values are this renderer's own fixing of the color families.
DEFAULT_PALETTE: dict[str, str] = {
    "create.event": "#90EE90",
    "create.activity": "#32CD32",
    "create.gateway": "#006400",
    "create.edge": "#20B2AA",
    "move.node": "#4169E1",
    "move.edge": "#5F9EA0",
    "delete.node": "#DC143C",
    "delete.edge": "#8B0000",
    "name": "#FF69B4",
    "reconnect": "#800080",
}

OVERVIEW_WIDTH = 250.0
OVERVIEW_ROW_HEIGHT = 3.0
OVERVIEW_DOT_RADIUS = 1.0


class RenderError(ValueError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class RenderStyle:
    palette: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_PALETTE))
    dot_radius: float = 3.0
    row_height: float = 10.0
    margin: float = 10.0
    out_of_window_ring: str = "#000000"
    legend: bool = False


def _fmt(value: float) -> str:
    text = f"{value:.3f}".rstrip("0").rstrip(".")
    return text if text else "0"


def _check_palette(style: RenderStyle) -> None:
    missing = sorted(PALETTE_KEYS - set(style.palette))
    if missing:
        raise RenderError("INCOMPLETE_PALETTE", f"palette lacks keys: {', '.join(missing)}")


def _render(
    timelines: tuple[Timeline, ...],
    chart_width: float,
    style: RenderStyle,
    width: float,
    row_height: float,
    radius: float,
) -> bytes:
    _check_palette(style)
    rows = len(timelines)
    total_w = width + 2 * style.margin
    total_h = rows * row_height + 2 * style.margin
    if style.legend:
        total_h += 14.0 * len(DEFAULT_PALETTE)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(total_w)}" '
        f'height="{_fmt(total_h)}" viewBox="0 0 {_fmt(total_w)} {_fmt(total_h)}">',
        f'<rect width="{_fmt(total_w)}" height="{_fmt(total_h)}" fill="#FFFFFF"/>',
    ]
    scale = width / chart_width
    for row, timeline in enumerate(timelines):
        cy = style.margin + row_height * (row + 0.5)
        for dot in timeline.dots:
            fill = style.palette[dot.color_key]
            if dot.out_of_window:
                parts.append(
                    f'<circle class="oow" cx="{_fmt(style.margin)}" cy="{_fmt(cy)}" '
                    f'r="{_fmt(radius)}" fill="{fill}" '
                    f'stroke="{style.out_of_window_ring}" stroke-width="1"/>'
                )
            else:
                cx = style.margin + dot.x * scale
                parts.append(
                    f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}" fill="{fill}"/>'
                )
    if style.legend:
        y = rows * row_height + 2 * style.margin
        for i, key in enumerate(sorted(style.palette)):
            parts.append(
                f'<rect x="{_fmt(style.margin)}" y="{_fmt(y + 14.0 * i)}" width="10" height="10" '
                f'fill="{style.palette[key]}"/>'
                f'<text x="{_fmt(style.margin + 14)}" y="{_fmt(y + 14.0 * i + 9)}" '
                f'font-size="10">{key}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")


def render_svg(chart: PPMChart, style: RenderStyle | None = None) -> bytes:
    """Render the (filtered) chart: one row per timeline, one circle per dot."""
    if style is None:
        style = RenderStyle()
    return _render(
        chart.timelines,
        chart.config.width,
        style,
        width=chart.config.width,
        row_height=style.row_height,
        radius=style.dot_radius,
    )


def render_overview(chart: PPMChart, style: RenderStyle | None = None) -> bytes:
    """Small fixed-size view of the chart, always ignoring filters."""
    if style is None:
        style = RenderStyle()
    return _render(
        chart.unfiltered_timelines,
        chart.config.width,
        style,
        width=OVERVIEW_WIDTH,
        row_height=OVERVIEW_ROW_HEIGHT,
        radius=OVERVIEW_DOT_RADIUS,
    )
