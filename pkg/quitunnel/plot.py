"""Self-contained, byte-deterministic SVG line charts of sweep tables."""

import logging
from html import escape

from .consts import QT_LOGGER, QT_SVG_HEIGHT, QT_SVG_WIDTH
from .errors import EmptyTableError
from .sweep import SweepTable

qtl = logging.getLogger(QT_LOGGER)
"""Our logger instance with the appropriate tag."""

_PALETTE: tuple[str, ...] = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 70, 180, 40, 60
_TICKS = 5


class SvgCanvas:
    """A minimal SVG document builder; every coordinate is written with two decimals."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self._parts: list[str] = []

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str = "#000", extra: str = ""):
        """Append a straight line."""
        self._parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="{stroke}"{extra}/>'
        )

    def polyline(self, points: list[tuple[float, float]], stroke: str):
        """Append an open polyline."""
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        self._parts.append(f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="1.5"/>')

    def dot(self, x: float, y: float, fill: str):
        """Append a small filled circle, used for isolated points."""
        self._parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.5" fill="{fill}"/>')

    def text(self, x: float, y: float, content: str, anchor: str = "start", extra: str = ""):
        """Append escaped text."""
        self._parts.append(
            f'<text x="{x:.2f}" y="{y:.2f}" text-anchor="{anchor}" font-family="sans-serif" font-size="12"{extra}>'
            f"{escape(content)}</text>"
        )

    def render(self) -> str:
        """The finished document."""
        header = (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        background = f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="#fff"/>'
        return "\n".join([header, background, *self._parts, "</svg>"]) + "\n"


def _segments(q: tuple[float, ...], values: list[float | None]) -> list[list[tuple[float, float]]]:
    """Split a series into runs of defined values; empty cells become gaps."""
    runs: list[list[tuple[float, float]]] = []
    current: list[tuple[float, float]] = []
    for x, y in zip(q, values):
        if y is None:
            if current:
                runs.append(current)
            current = []
        else:
            current.append((x, y))
    if current:
        runs.append(current)
    return runs


def render_plot(
    table: SweepTable, title: str | None = None, width: int = QT_SVG_WIDTH, height: int = QT_SVG_HEIGHT
) -> str:
    """
    Draw one polyline per column against ``q``, broken wherever a cell is empty. Columns without any defined
    value get no polyline and a legend entry marked undefined.

    Args:
        table (SweepTable): The sweep table.
        title (str | None): Optional chart title.
        width (int): Width in pixels.
        height (int): Height in pixels.

    Returns:
        (str): The SVG document.
    """
    if not table.columns or not table.rows:
        raise EmptyTableError("Nothing to plot: the table is empty")

    defined = [v for name in table.columns for v in table.column(name) if v is not None]
    x_lo, x_hi = min(table.q), max(table.q)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_hi = max(defined, default=1.0)
    y_hi = 1.0 if y_hi <= 0 else y_hi * 1.05

    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(x: float) -> float:
        return _MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return _MARGIN_TOP + (1 - y / y_hi) * plot_h

    canvas = SvgCanvas(width, height)
    bottom, right = _MARGIN_TOP + plot_h, _MARGIN_LEFT + plot_w
    canvas.line(_MARGIN_LEFT, bottom, right, bottom)
    canvas.line(_MARGIN_LEFT, _MARGIN_TOP, _MARGIN_LEFT, bottom)
    for i in range(_TICKS + 1):
        xv = x_lo + (x_hi - x_lo) * i / _TICKS
        yv = y_hi * i / _TICKS
        canvas.line(sx(xv), bottom, sx(xv), bottom + 5)
        canvas.text(sx(xv), bottom + 18, f"{xv:.3g}", anchor="middle")
        canvas.line(_MARGIN_LEFT - 5, sy(yv), _MARGIN_LEFT, sy(yv))
        canvas.text(_MARGIN_LEFT - 8, sy(yv) + 4, f"{yv:.3g}", anchor="end")
    canvas.text(_MARGIN_LEFT + plot_w / 2, height - 15, "q (m.u.)", anchor="middle")
    mid_y = _MARGIN_TOP + plot_h / 2
    canvas.text(18, mid_y, "probability", anchor="middle", extra=f' transform="rotate(-90 18 {mid_y:.2f})"')
    if title:
        canvas.text(_MARGIN_LEFT + plot_w / 2, _MARGIN_TOP - 15, title, anchor="middle")

    for index, name in enumerate(table.columns):
        colour = _PALETTE[index % len(_PALETTE)]
        runs = _segments(table.q, table.column(name))
        for run in runs:
            points = [(sx(x), sy(y)) for x, y in run]
            if len(points) == 1:
                canvas.dot(*points[0], fill=colour)
            else:
                canvas.polyline(points, stroke=colour)
        legend_y = _MARGIN_TOP + 10 + 20 * index
        label = name if runs else f"{name} (undefined)"
        if not runs:
            qtl.warning("Series %s has no defined value, drawing the legend entry only", name)
            canvas.line(right + 15, legend_y, right + 35, legend_y, stroke=colour, extra=' stroke-dasharray="3,3"')
        else:
            canvas.line(right + 15, legend_y, right + 35, legend_y, stroke=colour, extra=' stroke-width="1.5"')
        canvas.text(right + 40, legend_y + 4, label)
    return canvas.render()
