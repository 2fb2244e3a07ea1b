"""Phase 2: fixed-sequence continuous touring-point refinement.

With the circle order fixed, the tour length is minimized over one point per
circle, each constrained to its disk optionally intersected with the phase-1
sector box. The solver is cyclic coordinate descent; each single-point
subproblem (minimize distance-to-prev plus distance-to-next over the region)
is solved by a segment shortcut when the straight line between the neighbors
crosses the region, and otherwise by a coarse boundary scan refined with
golden-section search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .geometry import (
    Point,
    SectorBox,
    in_disk,
    node_point,
    project_to_disk,
    sector_box,
)
from .model import Circle, ContinuousSolution, Instance

TWO_PI = 2.0 * math.pi
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

# Coarse boundary samples per boundary piece before golden-section refinement.
BOUNDARY_SAMPLES = 64
GOLDEN_TOL = 1e-12
# Feasibility slack (squared residual for disks, coordinate slack for boxes).
FEASIBILITY_TOL = 1e-9
# Single-point updates may never worsen the total by more than this.
MONOTONE_TOL = 1e-12


@dataclass(frozen=True)
class FeasibleRegion:
    """A circle's disk, optionally intersected with a sector box."""

    circle: Circle
    box: SectorBox | None = None

    def contains(self, p: Point, tol: float = 0.0) -> bool:
        if not in_disk(p, self.circle, tol):
            return False
        return self.box is None or self.box.contains(p, tol)


@dataclass
class RefineTrace:
    """Optional instrumentation for the descent: accepted updates and sweep totals."""

    updates: list[tuple[int, float, float]] = field(default_factory=list)
    sweep_totals: list[float] = field(default_factory=list)


def build_regions(
    instance: Instance, slots: Sequence[int], k: int, sector_mode: str
) -> list[FeasibleRegion]:
    """One feasible region per circle, boxed only in sector-box mode."""
    if sector_mode == "sector-box":
        return [
            FeasibleRegion(c, sector_box(c, slots[i], k))
            for i, c in enumerate(instance.circles)
        ]
    if sector_mode == "full-disk":
        return [FeasibleRegion(c, None) for c in instance.circles]
    raise ValueError(f"unknown sector_mode {sector_mode!r}")


def _dist(a: Point, b: Point) -> float:
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return math.sqrt(dx * dx + dy * dy)


def _segment_region_interval(
    a: Point, b: Point, region: FeasibleRegion
) -> tuple[float, float] | None:
    """Parameter range of [a, b] inside the region, or None when it misses."""
    c = region.circle
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    dd = dx * dx + dy * dy
    if dd == 0.0:
        return (0.0, 0.0) if region.contains(a) else None
    ex = a[0] - c.x
    ey = a[1] - c.y
    bq = 2.0 * (dx * ex + dy * ey)
    cq = ex * ex + ey * ey - c.r * c.r
    disc = bq * bq - 4.0 * dd * cq
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    lo = max(0.0, (-bq - sq) / (2.0 * dd))
    hi = min(1.0, (-bq + sq) / (2.0 * dd))
    if region.box is not None:
        for d_axis, a_axis, bound_lo, bound_hi in (
            (dx, a[0], region.box.umin, region.box.umax),
            (dy, a[1], region.box.vmin, region.box.vmax),
        ):
            if d_axis == 0.0:
                if not bound_lo <= a_axis <= bound_hi:
                    return None
            else:
                t0 = (bound_lo - a_axis) / d_axis
                t1 = (bound_hi - a_axis) / d_axis
                lo = max(lo, min(t0, t1))
                hi = min(hi, max(t0, t1))
    if lo > hi:
        return None
    return lo, hi


def _boundary_pieces(region: FeasibleRegion) -> list[tuple]:
    """Boundary of disk-intersect-box: circle arcs inside the box plus box
    edges clipped to the disk. Piece order is fixed for determinism."""
    c = region.circle
    box = region.box
    if box is None:
        return [("circle", 0.0, TWO_PI)]
    pieces: list[tuple] = []

    crit: set[float] = set()
    for u in (box.umin, box.umax):
        t = (u - c.x) / c.r
        if -1.0 <= t <= 1.0:
            a = math.acos(t)
            crit.add(a)
            crit.add(TWO_PI - a)
    for v in (box.vmin, box.vmax):
        t = (v - c.y) / c.r
        if -1.0 <= t <= 1.0:
            a = math.asin(t)
            crit.add(a % TWO_PI)
            crit.add((math.pi - a) % TWO_PI)

    def on_circle(theta: float) -> Point:
        return (c.x + c.r * math.cos(theta), c.y + c.r * math.sin(theta))

    angles = sorted(crit)
    if not angles:
        if box.contains(on_circle(0.0)):
            pieces.append(("circle", 0.0, TWO_PI))
    else:
        for idx, a0 in enumerate(angles):
            a1 = angles[idx + 1] if idx + 1 < len(angles) else angles[0] + TWO_PI
            if a1 - a0 <= 0.0:
                continue
            if box.contains(on_circle((a0 + a1) / 2.0)):
                pieces.append(("arc", a0, a1))

    corners = (
        (box.umin, box.vmin),
        (box.umax, box.vmin),
        (box.umax, box.vmax),
        (box.umin, box.vmax),
    )
    disk_only = FeasibleRegion(c, None)
    for e in range(4):
        p0 = corners[e]
        p1 = corners[(e + 1) % 4]
        span = _segment_region_interval(p0, p1, disk_only)
        if span is not None:
            q0 = (p0[0] + span[0] * (p1[0] - p0[0]), p0[1] + span[0] * (p1[1] - p0[1]))
            q1 = (p0[0] + span[1] * (p1[0] - p0[0]), p0[1] + span[1] * (p1[1] - p0[1]))
            pieces.append(("seg", q0, q1))
    return pieces


def _piece_point(piece: tuple, t: float, circle: Circle) -> Point:
    if piece[0] == "seg":
        (x0, y0), (x1, y1) = piece[1], piece[2]
        return (x0 + t * (x1 - x0), y0 + t * (y1 - y0))
    return (circle.x + circle.r * math.cos(t), circle.y + circle.r * math.sin(t))


def _golden(fun, lo: float, hi: float, tol: float = GOLDEN_TOL) -> float:
    a, b = lo, hi
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1 = fun(x1)
    f2 = fun(x2)
    while b - a > tol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = fun(x2)
    return (a + b) / 2.0


def point_subproblem(prev: Point, next_: Point, region: FeasibleRegion) -> Point:
    """Minimizer of |p - prev| + |p - next| over the region, to 1e-9 in value.

    If the segment [prev, next] crosses the region the crossing point nearest
    the disk center is returned (the unconstrained optimum). Otherwise the
    objective is convex with its minimum on the region boundary, which is
    scanned coarsely and polished by golden-section search. A boundary scan
    is not assumed unimodal: the coarse pass guards against the two local
    minima an arc can carry.
    """
    if not all(math.isfinite(v) for v in (*prev, *next_)):
        raise ValueError("prev/next tour points must be finite")
    c = region.circle
    if c.r == 0.0:
        return (c.x, c.y)

    span = _segment_region_interval(prev, next_, region)
    if span is not None:
        dx = next_[0] - prev[0]
        dy = next_[1] - prev[1]
        dd = dx * dx + dy * dy
        if dd == 0.0:
            t = span[0]
        else:
            t = ((c.x - prev[0]) * dx + (c.y - prev[1]) * dy) / dd
            t = min(span[1], max(span[0], t))
        return (prev[0] + t * dx, prev[1] + t * dy)

    if prev == next_ and region.box is None:
        return project_to_disk(prev, c)

    def objective(p: Point) -> float:
        return _dist(p, prev) + _dist(p, next_)

    return _minimize_on_boundary(objective, region)


def _minimize_on_boundary(objective, region: FeasibleRegion) -> Point:
    """Coarse scan of every boundary piece plus golden-section refinement."""
    c = region.circle
    best_f = math.inf
    best_piece: tuple | None = None
    best_ts: list[float] = []
    best_idx = -1
    for piece in _boundary_pieces(region):
        if piece[0] == "circle":
            ts = [TWO_PI * j / BOUNDARY_SAMPLES for j in range(BOUNDARY_SAMPLES)]
        elif piece[0] == "arc":
            lo, hi = piece[1], piece[2]
            ts = [lo + (hi - lo) * j / (BOUNDARY_SAMPLES - 1) for j in range(BOUNDARY_SAMPLES)]
        else:
            ts = [j / (BOUNDARY_SAMPLES - 1) for j in range(BOUNDARY_SAMPLES)]
        for idx, t in enumerate(ts):
            fv = objective(_piece_point(piece, t, c))
            if fv < best_f:
                best_f = fv
                best_piece = piece
                best_ts = ts
                best_idx = idx
    if best_piece is None:
        raise ValueError("feasible region has no boundary; is it empty?")

    if best_piece[0] == "circle":
        step = TWO_PI / BOUNDARY_SAMPLES
        lo = best_ts[best_idx] - step
        hi = best_ts[best_idx] + step
    else:
        lo = best_ts[best_idx - 1] if best_idx > 0 else best_ts[0]
        hi = best_ts[best_idx + 1] if best_idx + 1 < len(best_ts) else best_ts[-1]
    t_star = _golden(lambda t: objective(_piece_point(best_piece, t, c)), lo, hi)
    candidate = _piece_point(best_piece, t_star, c)
    if objective(candidate) <= best_f:
        return candidate
    return _piece_point(best_piece, best_ts[best_idx], c)


def _smoothed_point_subproblem(
    prev: Point, next_: Point, region: FeasibleRegion, mu: float
) -> Point:
    """Minimizer of sqrt(|p-prev|^2+mu^2) + sqrt(|p-next|^2+mu^2) over the region.

    The unconstrained minimizer of the smoothed objective is the neighbor
    midpoint; when that is infeasible the (smooth, convex) objective attains
    its constrained minimum on the region boundary.
    """
    c = region.circle
    if c.r == 0.0:
        return (c.x, c.y)
    mid = ((prev[0] + next_[0]) / 2.0, (prev[1] + next_[1]) / 2.0)
    if region.contains(mid):
        return mid
    mu2 = mu * mu

    def objective(p: Point) -> float:
        dx1 = p[0] - prev[0]
        dy1 = p[1] - prev[1]
        dx2 = p[0] - next_[0]
        dy2 = p[1] - next_[1]
        return math.sqrt(dx1 * dx1 + dy1 * dy1 + mu2) + math.sqrt(
            dx2 * dx2 + dy2 * dy2 + mu2
        )

    return _minimize_on_boundary(objective, region)


def _tour_total(points: Sequence[Point], order: Sequence[int]) -> float:
    total = 0.0
    n = len(order)
    for t in range(n):
        total += _dist(points[order[t]], points[order[(t + 1) % n]])
    return total


def _separate_coincident(
    points: list[Point],
    order: Sequence[int],
    regions: Sequence[FeasibleRegion],
    coincide_tol: float,
) -> bool:
    """Pull coincident adjacent tour points apart along their flat valleys.

    When consecutive tour points coincide, per-point descent can jam: each
    point is a minimizer of its own subproblem although a joint move would
    still improve the tour. Every point of the neighbor segment inside the
    region is an equally good subproblem solution, so sliding each partner to
    the feasible segment point farthest from the other is a zero-cost move
    that re-enables strict progress. Returns True if anything moved.
    """
    n = len(order)
    moved = False
    for t in range(n):
        ci = order[t]
        cj = order[(t + 1) % n]
        pi = points[ci]
        pj = points[cj]
        if _dist(pi, pj) > coincide_tol:
            continue
        # incoming partner: farthest feasible point back along prev -> pi
        prev_p = points[order[t - 1]]
        span = _segment_region_interval(prev_p, pj, regions[ci])
        if span is not None:
            cand = (
                prev_p[0] + span[0] * (pj[0] - prev_p[0]),
                prev_p[1] + span[0] * (pj[1] - prev_p[1]),
            )
            f_old = _dist(prev_p, pi) + _dist(pi, pj)
            if (
                _dist(prev_p, cand) + _dist(cand, pj) <= f_old + MONOTONE_TOL
                and cand != pi
            ):
                points[ci] = cand
                moved = True
        # outgoing partner: farthest feasible point ahead along pj -> next
        pi = points[ci]
        next_p = points[order[(t + 2) % n]]
        span = _segment_region_interval(pj, next_p, regions[cj])
        if span is not None:
            cand = (
                pj[0] + span[1] * (next_p[0] - pj[0]),
                pj[1] + span[1] * (next_p[1] - pj[1]),
            )
            f_old = _dist(pi, pj) + _dist(pj, next_p)
            if (
                _dist(pi, cand) + _dist(cand, next_p) <= f_old + MONOTONE_TOL
                and cand != pj
            ):
                points[cj] = cand
                moved = True
    return moved


# Smoothing continuation: mu runs from SMOOTH_MU_START to SMOOTH_MU_STOP
# (relative to the instance span), shrinking by SMOOTH_MU_SHRINK per stage.
SMOOTH_MU_START = 1e-2
SMOOTH_MU_STOP = 1e-11
SMOOTH_MU_SHRINK = 0.1
SMOOTH_STAGE_SWEEPS = 200


def _smoothing_stage(
    points: list[Point],
    order: Sequence[int],
    regions: Sequence[FeasibleRegion],
    mu: float,
    tol: float,
) -> None:
    n = len(order)
    mu2 = mu * mu

    def smoothed_total() -> float:
        total = 0.0
        for t in range(n):
            a = points[order[t]]
            b = points[order[(t + 1) % n]]
            dx = a[0] - b[0]
            dy = a[1] - b[1]
            total += math.sqrt(dx * dx + dy * dy + mu2)
        return total

    value = smoothed_total()
    for _ in range(SMOOTH_STAGE_SWEEPS):
        before = value
        for pos in range(n):
            ci = order[pos]
            prev_p = points[order[pos - 1]]
            next_p = points[order[(pos + 1) % n]]
            points[ci] = _smoothed_point_subproblem(prev_p, next_p, regions[ci], mu)
        value = smoothed_total()
        if before - value <= tol * max(abs(before), 1e-300):
            break


def _exact_descent(
    points: list[Point],
    order: Sequence[int],
    regions: Sequence[FeasibleRegion],
    descent_tol: float,
    descent_max_sweeps: int,
    coincide_tol: float,
    trace: RefineTrace | None,
) -> float:
    """Monotone per-point descent with coincident-pair separation escapes."""
    n = len(order)
    total = _tour_total(points, order)
    escape_total: float | None = None
    for _sweep in range(descent_max_sweeps):
        before = total
        for pos in range(n):
            ci = order[pos]
            prev_p = points[order[pos - 1]]
            next_p = points[order[(pos + 1) % n]]
            old = points[ci]
            f_old = _dist(prev_p, old) + _dist(old, next_p)
            cand = point_subproblem(prev_p, next_p, regions[ci])
            f_new = _dist(prev_p, cand) + _dist(cand, next_p)
            if f_new < f_old:
                points[ci] = cand
                if trace is not None:
                    trace.updates.append((ci, f_old, f_new))
        total = _tour_total(points, order)
        if trace is not None:
            trace.sweep_totals.append(total)
        if before - total <= descent_tol * max(abs(before), 1e-300):
            # Converged; coincident adjacent points can jam per-point descent
            # short of the sequence optimum, so separate them and keep going
            # while each separation unlocks further improvement.
            if escape_total is not None and total >= escape_total - descent_tol * max(
                abs(total), 1e-300
            ):
                break
            if not _separate_coincident(points, order, regions, coincide_tol):
                break
            escape_total = total
            total = _tour_total(points, order)
    return total


def sequence_refine(
    instance: Instance,
    order: Sequence[int],
    start_points: Sequence[Point],
    regions: Sequence[FeasibleRegion],
    descent_tol: float = 1e-10,
    descent_max_sweeps: int = 10_000,
    trace: RefineTrace | None = None,
) -> ContinuousSolution:
    """Cyclic coordinate descent over the tour points for a fixed order.

    The exact objective is piecewise smooth and per-point descent on it can
    jam at configurations with coincident tour points, so the descent runs in
    two stages. A smoothing continuation first sweeps the points with the
    edge lengths replaced by sqrt(len^2 + mu^2) while mu shrinks toward zero;
    that surrogate is smooth, so block descent tracks the true optimum
    without getting trapped. The exact descent then polishes: each point is
    replaced via ``point_subproblem`` against its current neighbors only when
    that strictly decreases its local objective, so the total is
    non-increasing after every accepted update (this is the stage the trace
    instruments). It stops when a full sweep improves the total by less than
    ``descent_tol`` relative, with coincident adjacent points separated along
    their flat valleys whenever that unlocks further improvement.
    """
    n = instance.n
    order = [int(v) for v in order]
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the circles")
    points: list[Point] = [(float(u), float(v)) for u, v in start_points]
    for i, region in enumerate(regions):
        if not region.contains(points[i], FEASIBILITY_TOL):
            raise ValueError(f"start point for circle {i} lies outside its feasible region")

    span = max(
        max(c.x + c.r for c in instance.circles) - min(c.x - c.r for c in instance.circles),
        max(c.y + c.r for c in instance.circles) - min(c.y - c.r for c in instance.circles),
    )
    coincide_tol = 1e-9 * max(1.0, span)
    start_total = _tour_total(points, order)

    if span > 0.0 and any(c.r > 0.0 for c in instance.circles):
        mu = SMOOTH_MU_START * span
        stage_tol = min(descent_tol, 1e-12)
        while mu >= SMOOTH_MU_STOP * span:
            _smoothing_stage(points, order, regions, mu, stage_tol)
            mu *= SMOOTH_MU_SHRINK

    total = _exact_descent(
        points, order, regions, descent_tol, descent_max_sweeps, coincide_tol, trace
    )
    if total > start_total:
        # The smoothed start drifted above the caller's start; redo the plain
        # monotone descent so the result never exceeds the starting total.
        points = [(float(u), float(v)) for u, v in start_points]
        if trace is not None:
            trace.updates.clear()
            trace.sweep_totals.clear()
        _exact_descent(
            points, order, regions, descent_tol, descent_max_sweeps, coincide_tol, trace
        )

    edge_lengths = [
        _dist(points[order[t]], points[order[(t + 1) % n]]) for t in range(n)
    ]
    return ContinuousSolution(
        order=tuple(order),
        points=tuple(points),
        edge_lengths=tuple(edge_lengths),
        total=sum(edge_lengths),
    )


def start_points_for(instance: Instance, slots: Sequence[int], k: int) -> list[Point]:
    """Phase-2 start points: the phase-1 slot node of every circle."""
    return [node_point(c, slots[i], k) for i, c in enumerate(instance.circles)]
