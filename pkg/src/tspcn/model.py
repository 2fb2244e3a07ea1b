"""Problem domain types, instance generation, and JSON persistence."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

METHODS = ("exact-dp", "cutting-plane", "heuristic")
SECTOR_MODES = ("full-disk", "sector-box")

# Rejection-sampling budget per circle when a minimum center gap is requested.
GENERATION_ATTEMPTS = 10_000


class TspcnError(Exception):
    """Base class for library errors."""


class GenerationError(TspcnError):
    """Instance generation could not satisfy its placement constraints."""


class InstanceFormatError(TspcnError):
    """An instance or solution file is structurally malformed."""


class ValidationError(TspcnError):
    """Parsed data violates a domain invariant (e.g. negative radius)."""


class SizeLimitError(TspcnError):
    """An input exceeds a solver's or builder's size guard."""


@dataclass(frozen=True)
class Circle:
    """A disk neighborhood: any point with distance <= r from (x, y) may be visited."""

    x: float
    y: float
    r: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "r", float(self.r))
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.r)):
            raise ValueError("circle fields must be finite")
        if self.r < 0:
            raise ValueError(f"circle radius must be >= 0, got {self.r}")


@dataclass(frozen=True)
class Instance:
    """An ordered list of circles. Circle 0 is the tour anchor."""

    circles: tuple[Circle, ...]
    name: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "circles", tuple(self.circles))
        if len(self.circles) < 2:
            raise ValueError(f"an instance needs at least 2 circles, got {len(self.circles)}")
        if not all(isinstance(c, Circle) for c in self.circles):
            raise ValueError("instance circles must be Circle values")

    @property
    def n(self) -> int:
        return len(self.circles)


@dataclass(frozen=True)
class DiscreteTour:
    """Phase-1 result: a circle visiting order plus one discretization slot per circle.

    ``order`` is a permutation of the circle indices starting at 0; ``slots``
    is indexed by circle (not by tour position). ``length`` is the closed-tour
    length through the slot node points.
    """

    order: tuple[int, ...]
    slots: tuple[int, ...]
    k: int
    length: float
    proven_optimal: bool = True
    relaxation_bound: float | None = None
    cuts: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        object.__setattr__(self, "slots", tuple(int(v) for v in self.slots))
        n = len(self.order)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if sorted(self.order) != list(range(n)) or (n and self.order[0] != 0):
            raise ValueError("order must be a permutation of the circles starting at circle 0")
        if len(self.slots) != n or any(not 0 <= s < self.k for s in self.slots):
            raise ValueError("slots must hold one slot index in [0, k) per circle")


@dataclass(frozen=True)
class ContinuousSolution:
    """Final result: visiting order, one point per circle, and edge lengths.

    ``points`` is indexed by circle; edge ``t`` joins the points of circles
    ``order[t]`` and ``order[t + 1]`` (cyclically). Only shapes are checked
    here — semantic constraint checking belongs to ``validate_solution`` so
    that externally supplied (possibly broken) solutions stay representable.
    """

    order: tuple[int, ...]
    points: tuple[tuple[float, float], ...]
    edge_lengths: tuple[float, ...]
    total: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        object.__setattr__(
            self, "points", tuple((float(u), float(v)) for u, v in self.points)
        )
        object.__setattr__(self, "edge_lengths", tuple(float(e) for e in self.edge_lengths))
        object.__setattr__(self, "total", float(self.total))


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs shared by the pipeline and the CLI."""

    k: int = 4
    method: str = "exact-dp"
    sector_mode: str = "sector-box"
    exact_limit: int = 16
    descent_tol: float = 1e-10
    descent_max_sweeps: int = 10_000
    seed: int = 0
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.sector_mode not in SECTOR_MODES:
            raise ValueError(f"sector_mode must be one of {SECTOR_MODES}, got {self.sector_mode!r}")
        if self.exact_limit < 2:
            raise ValueError("exact_limit must be >= 2")
        if not self.descent_tol > 0:
            raise ValueError("descent_tol must be > 0")
        if self.descent_max_sweeps < 1:
            raise ValueError("descent_max_sweeps must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be an unsigned integer")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError("time_limit must be positive when set")


def generate_instance(
    n: int,
    center_box: tuple[float, float, float, float],
    radius_range: tuple[float, float],
    seed: int,
    min_center_gap: float | None = None,
    name: str | None = None,
) -> Instance:
    """Generate a random instance, deterministically for a given seed.

    Centers are uniform in ``center_box = (xmin, ymin, xmax, ymax)``, radii
    uniform in ``radius_range``. With ``min_center_gap`` set, each center is
    rejection-sampled until it keeps that distance from all earlier centers;
    the budget is GENERATION_ATTEMPTS draws per circle.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    xmin, ymin, xmax, ymax = (float(v) for v in center_box)
    if not (xmin <= xmax and ymin <= ymax):
        raise ValueError(f"degenerate center box {center_box}")
    rmin, rmax = (float(v) for v in radius_range)
    if rmin < 0 or rmax < rmin:
        raise ValueError(f"radius range must satisfy 0 <= min <= max, got {radius_range}")
    if min_center_gap is not None and min_center_gap < 0:
        raise ValueError("min_center_gap must be >= 0")

    rng = random.Random(seed)
    circles: list[Circle] = []
    centers: list[tuple[float, float]] = []
    for _ in range(n):
        for _attempt in range(GENERATION_ATTEMPTS):
            x = rng.uniform(xmin, xmax)
            y = rng.uniform(ymin, ymax)
            if min_center_gap is None or all(
                math.sqrt((x - cx) ** 2 + (y - cy) ** 2) >= min_center_gap
                for cx, cy in centers
            ):
                break
        else:
            raise GenerationError(
                f"infeasible generation parameters: could not place circle "
                f"{len(circles)} with min_center_gap={min_center_gap} after "
                f"{GENERATION_ATTEMPTS} attempts"
            )
        centers.append((x, y))
        circles.append(Circle(x, y, rng.uniform(rmin, rmax)))
    return Instance(tuple(circles), name=name)


# ---------------------------------------------------------------------------
# JSON persistence.
#
# Floats are written with Python's shortest round-trip repr, so load(save(x))
# is bit-exact and the emitted bytes are platform-stable.
# ---------------------------------------------------------------------------


def instance_to_dict(instance: Instance) -> dict[str, Any]:
    d: dict[str, Any] = {}
    if instance.name is not None:
        d["name"] = instance.name
    d["circles"] = [{"x": c.x, "y": c.y, "r": c.r} for c in instance.circles]
    return d


def save_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n", encoding="utf-8")


def _parse_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceFormatError(f"field {where} must be a number, got {value!r}")
    return float(value)


def load_instance(path: str | Path) -> Instance:
    data = _parse_json(path)
    if not isinstance(data, dict):
        raise InstanceFormatError(f"{path}: top level must be an object")
    if "circles" not in data:
        raise InstanceFormatError(f'{path}: missing "circles" key')
    raw = data["circles"]
    if not isinstance(raw, list):
        raise InstanceFormatError(f'{path}: field "circles" must be a list')
    circles = []
    for i, item in enumerate(raw):
        where = f"circles[{i}]"
        if not isinstance(item, dict):
            raise InstanceFormatError(f"{path}: field {where} must be an object")
        for key in ("x", "y", "r"):
            if key not in item:
                raise InstanceFormatError(f"{path}: field {where}.{key} is missing")
        try:
            circles.append(
                Circle(
                    _number(item["x"], f"{where}.x"),
                    _number(item["y"], f"{where}.y"),
                    _number(item["r"], f"{where}.r"),
                )
            )
        except ValueError as exc:
            raise ValidationError(f"{path}: {where}: {exc}") from exc
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise InstanceFormatError(f'{path}: field "name" must be a string')
    try:
        return Instance(tuple(circles), name=name)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def solution_to_dict(
    solution: ContinuousSolution,
    method: str,
    k: int,
    sector_mode: str,
    extras: dict[str, Any] | None = None,
) -> dict[str, Any]:
    d: dict[str, Any] = {
        "order": list(solution.order),
        "points": [[u, v] for u, v in solution.points],
        "edge_lengths": list(solution.edge_lengths),
        "total": solution.total,
        "method": method,
        "k": k,
        "sector_mode": sector_mode,
    }
    if extras:
        d.update(extras)
    return d


def save_solution(
    solution: ContinuousSolution,
    method: str,
    k: int,
    sector_mode: str,
    path: str | Path,
    extras: dict[str, Any] | None = None,
) -> None:
    d = solution_to_dict(solution, method, k, sector_mode, extras)
    Path(path).write_text(json.dumps(d, indent=2) + "\n", encoding="utf-8")


def load_solution(path: str | Path) -> tuple[ContinuousSolution, dict[str, Any]]:
    """Load a solution file; returns the solution plus its metadata dict."""
    data = _parse_json(path)
    if not isinstance(data, dict):
        raise InstanceFormatError(f"{path}: top level must be an object")
    for key in ("order", "points", "edge_lengths", "total"):
        if key not in data:
            raise InstanceFormatError(f"{path}: missing {key!r} key")
    order = data["order"]
    if not isinstance(order, list) or any(
        isinstance(v, bool) or not isinstance(v, int) for v in order
    ):
        raise InstanceFormatError(f'{path}: field "order" must be a list of integers')
    points = data["points"]
    if not isinstance(points, list) or any(
        not (isinstance(p, list) and len(p) == 2) for p in points
    ):
        raise InstanceFormatError(f'{path}: field "points" must be a list of [u, v] pairs')
    pts = [
        (_number(p[0], f"points[{i}][0]"), _number(p[1], f"points[{i}][1]"))
        for i, p in enumerate(points)
    ]
    edges = data["edge_lengths"]
    if not isinstance(edges, list):
        raise InstanceFormatError(f'{path}: field "edge_lengths" must be a list')
    edge_lengths = [_number(e, f"edge_lengths[{i}]") for i, e in enumerate(edges)]
    total = _number(data["total"], "total")
    solution = ContinuousSolution(tuple(order), tuple(pts), tuple(edge_lengths), total)
    meta = {key: value for key, value in data.items()
            if key not in ("order", "points", "edge_lengths", "total")}
    return solution, meta
