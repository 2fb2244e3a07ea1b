"""SVG rendering of instances and solved tours."""

from __future__ import annotations

from dataclasses import dataclass

from .model import ContinuousSolution, Instance


@dataclass(frozen=True)
class RenderStyle:
    canvas_px: int = 900
    margin_frac: float = 0.06
    circle_stroke: str = "#8a8a8a"
    circle_width: float = 1.5
    tour_stroke: str = "#c0392b"
    tour_width: float = 2.0
    point_fill: str = "#2460a7"
    point_radius: float = 3.5
    label_fill: str = "#333333"
    label_size: int = 13

    def __post_init__(self) -> None:
        if self.canvas_px <= 0:
            raise ValueError("canvas_px must be positive")
        if not 0.0 <= self.margin_frac < 0.5:
            raise ValueError("margin_frac must be in [0, 0.5)")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(
    instance: Instance, solution: ContinuousSolution, style: RenderStyle | None = None
) -> str:
    """One self-contained SVG document: outlined circles, the closed tour
    polygon through the selected points, the points themselves, and circle
    index labels. +Y points up. Deterministic text for identical inputs."""
    if len(solution.order) != instance.n or len(solution.points) != instance.n:
        raise ValueError("solution does not match the instance")
    style = style or RenderStyle()

    xmin = min(c.x - c.r for c in instance.circles)
    xmax = max(c.x + c.r for c in instance.circles)
    ymin = min(c.y - c.r for c in instance.circles)
    ymax = max(c.y + c.r for c in instance.circles)
    span = max(xmax - xmin, ymax - ymin, 1e-12)
    size = float(style.canvas_px)
    margin = style.margin_frac * size
    scale = (size - 2.0 * margin) / span
    # center the content inside the square canvas
    xoff = margin + (size - 2.0 * margin - (xmax - xmin) * scale) / 2.0
    yoff = margin + (size - 2.0 * margin - (ymax - ymin) * scale) / 2.0

    def to_canvas(x: float, y: float) -> tuple[float, float]:
        return (xoff + (x - xmin) * scale, size - (yoff + (y - ymin) * scale))

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{style.canvas_px}" height="{style.canvas_px}" '
        f'viewBox="0 0 {style.canvas_px} {style.canvas_px}">',
    ]
    for i, c in enumerate(instance.circles):
        cx, cy = to_canvas(c.x, c.y)
        lines.append(
            f'  <circle class="disk" cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
            f'r="{_fmt(max(c.r * scale, 0.5))}" fill="none" '
            f'stroke="{style.circle_stroke}" stroke-width="{style.circle_width}"/>'
        )
    vertices = " ".join(
        "{},{}".format(*map(_fmt, to_canvas(*solution.points[ci])))
        for ci in solution.order
    )
    lines.append(
        f'  <polygon class="tour" points="{vertices}" fill="none" '
        f'stroke="{style.tour_stroke}" stroke-width="{style.tour_width}"/>'
    )
    for i in range(instance.n):
        px, py = to_canvas(*solution.points[i])
        lines.append(
            f'  <circle class="pt" cx="{_fmt(px)}" cy="{_fmt(py)}" '
            f'r="{style.point_radius}" fill="{style.point_fill}"/>'
        )
    for i, c in enumerate(instance.circles):
        lx, ly = to_canvas(c.x, c.y)
        lines.append(
            f'  <text class="lbl" x="{_fmt(lx + 5.0)}" y="{_fmt(ly - 5.0)}" '
            f'font-family="monospace" font-size="{style.label_size}" '
            f'fill="{style.label_fill}">{i}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
