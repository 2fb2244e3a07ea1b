"""Planar geometry for discretization nodes, sector boxes, and disk tests.

Distances are computed as sqrt(dx*dx + dy*dy) everywhere (never hypot) so the
vectorized matrix builders and the scalar helpers agree bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Circle

Point = tuple[float, float]

_AXIS_DEG = (0.0, 90.0, 180.0, 270.0, 360.0)


@dataclass(frozen=True)
class DiscreteNode:
    """One discretization node: the midpoint of a circle's arc slot."""

    circle: int
    slot: int
    angle_deg: float
    point: Point


@dataclass(frozen=True)
class SectorBox:
    """Axis-aligned coordinate bounds derived from a circle's chosen slot."""

    umin: float
    umax: float
    vmin: float
    vmax: float

    def __post_init__(self) -> None:
        if self.umin > self.umax or self.vmin > self.vmax:
            raise ValueError("sector box bounds must be ordered")

    def contains(self, p: Point, tol: float = 0.0) -> bool:
        return (
            self.umin - tol <= p[0] <= self.umax + tol
            and self.vmin - tol <= p[1] <= self.vmax + tol
        )


def _check_slot(slot: int, k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0 <= slot < k:
        raise ValueError(f"slot must be in [0, {k}), got {slot}")


def _cos_deg(angle: float) -> float:
    a = angle % 360.0
    if a == 0.0:
        return 1.0
    if a == 90.0 or a == 270.0:
        return 0.0
    if a == 180.0:
        return -1.0
    return math.cos(math.radians(a))


def _sin_deg(angle: float) -> float:
    a = angle % 360.0
    if a == 0.0 or a == 180.0:
        return 0.0
    if a == 90.0:
        return 1.0
    if a == 270.0:
        return -1.0
    return math.sin(math.radians(a))


def slot_angle(slot: int, k: int) -> float:
    """Angle (degrees, in [0, 360)) of the midpoint of slot's equal arc."""
    _check_slot(slot, k)
    return (360.0 * slot + 180.0) / k


def node_point(circle: Circle, slot: int, k: int) -> Point:
    """Plane coordinates of a circle's slot node."""
    g = slot_angle(slot, k)
    return (circle.x + circle.r * _cos_deg(g), circle.y + circle.r * _sin_deg(g))


def make_node(circle_index: int, circle: Circle, slot: int, k: int) -> DiscreteNode:
    return DiscreteNode(circle_index, slot, slot_angle(slot, k), node_point(circle, slot, k))


def node_distance(ci: Circle, slot_i: int, cj: Circle, slot_j: int, k: int) -> float:
    """Euclidean distance between two circles' slot nodes."""
    ui, vi = node_point(ci, slot_i, k)
    uj, vj = node_point(cj, slot_j, k)
    dx = ui - uj
    dy = vi - vj
    return math.sqrt(dx * dx + dy * dy)


def sector_box(circle: Circle, slot: int, k: int) -> SectorBox:
    """Bounding box of the closed pie slice spanned by a slot's arc.

    The slice runs from the circle center out to the arc between angles
    360*slot/k and 360*(slot+1)/k; arc extrema at axis-aligned angles inside
    the span are included.
    """
    _check_slot(slot, k)
    start = 360.0 * slot / k
    end = 360.0 * (slot + 1) / k
    xs = [0.0]
    ys = [0.0]
    for ang in (start, end):
        xs.append(circle.r * _cos_deg(ang))
        ys.append(circle.r * _sin_deg(ang))
    for axis in _AXIS_DEG:
        if start <= axis <= end:
            xs.append(circle.r * _cos_deg(axis))
            ys.append(circle.r * _sin_deg(axis))
    return SectorBox(
        circle.x + min(xs), circle.x + max(xs), circle.y + min(ys), circle.y + max(ys)
    )


def project_to_disk(p: Point, circle: Circle) -> Point:
    """Closest point of the disk to p (p itself when it already lies inside)."""
    dx = p[0] - circle.x
    dy = p[1] - circle.y
    d = math.sqrt(dx * dx + dy * dy)
    if d <= circle.r:
        return p
    if circle.r == 0.0 or d == 0.0:
        return (circle.x, circle.y)
    scale = circle.r / d
    return (circle.x + dx * scale, circle.y + dy * scale)


def segment_disk_hit(a: Point, b: Point, circle: Circle) -> Point | None:
    """A point of segment [a, b] inside the closed disk, or None.

    Returns the segment point closest to the disk center, which makes the
    choice deterministic and exact at tangency.
    """
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    dd = dx * dx + dy * dy
    if dd == 0.0:
        t = 0.0
    else:
        t = ((circle.x - a[0]) * dx + (circle.y - a[1]) * dy) / dd
        t = min(1.0, max(0.0, t))
    px = a[0] + t * dx
    py = a[1] + t * dy
    ex = px - circle.x
    ey = py - circle.y
    if math.sqrt(ex * ex + ey * ey) <= circle.r:
        return (px, py)
    return None


def in_disk(p: Point, circle: Circle, tol: float = 0.0) -> bool:
    """Membership test with slack on the squared residual."""
    dx = p[0] - circle.x
    dy = p[1] - circle.y
    return dx * dx + dy * dy <= circle.r * circle.r + tol
