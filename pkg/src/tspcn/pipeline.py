"""End-to-end two-phase orchestration, solution validation, and lower bounds."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .discrete import (
    HARD_EXACT_CAP,
    find_subtours,
    solve_cutting_plane,
    solve_exact_dp,
    solve_heuristic,
)
from .model import (
    Circle,
    ContinuousSolution,
    DiscreteTour,
    Instance,
    SolverConfig,
    solution_to_dict,
)
from .refine import RefineTrace, build_regions, sequence_refine, start_points_for


@dataclass(frozen=True)
class LowerBound:
    """A valid lower bound on any tour total; ``exact`` marks the centers-TSP bound."""

    value: float
    exact: bool


@dataclass(frozen=True)
class SolveReport:
    solution: ContinuousSolution
    phase1: DiscreteTour
    lower_bound: float
    lower_bound_exact: bool
    proven_optimal_discrete: bool
    timings: dict[str, float]
    config: SolverConfig


def extract_sequence(tour: DiscreteTour) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Circle visiting order and per-circle slot choice of a phase-1 tour."""
    return tour.order, tour.slots


def lower_bound(instance: Instance, exact_limit: int = 16) -> LowerBound:
    """max(0, centers-tour length - 2 * sum of radii).

    Valid because each tour edge between selected points is at least the
    center distance minus both radii. The embedded centers tour is solved
    exactly, so the bound is only computed up to ``exact_limit`` circles;
    beyond that a trivial 0 is returned, flagged inexact.
    """
    if instance.n > min(exact_limit, HARD_EXACT_CAP):
        return LowerBound(0.0, False)
    centers = Instance(
        tuple(Circle(c.x, c.y, 0.0) for c in instance.circles), name=instance.name
    )
    centers_tour = solve_exact_dp(centers, k=1, exact_limit=exact_limit)
    slack = 2.0 * sum(c.r for c in instance.circles)
    return LowerBound(max(0.0, centers_tour.length - slack), True)


def solve_phase1(instance: Instance, config: SolverConfig) -> DiscreteTour:
    if config.method == "exact-dp":
        return solve_exact_dp(instance, k=config.k, exact_limit=config.exact_limit)
    if config.method == "cutting-plane":
        return solve_cutting_plane(instance, k=config.k, time_limit=config.time_limit)
    if config.method == "heuristic":
        return solve_heuristic(instance, k=config.k, seed=config.seed)
    raise ValueError(f"unknown method {config.method!r}")


def solve_two_phase(
    instance: Instance, config: SolverConfig, trace: RefineTrace | None = None
) -> SolveReport:
    """Phase 1 with the configured method, then fixed-sequence refinement.

    Refinement starts from the phase-1 slot node points, which are feasible
    in both sector modes, so the refined total never exceeds the phase-1
    length.
    """
    t0 = time.perf_counter()
    phase1 = solve_phase1(instance, config)
    t1 = time.perf_counter()
    order, slots = extract_sequence(phase1)
    regions = build_regions(instance, slots, config.k, config.sector_mode)
    starts = start_points_for(instance, slots, config.k)
    solution = sequence_refine(
        instance,
        order,
        starts,
        regions,
        descent_tol=config.descent_tol,
        descent_max_sweeps=config.descent_max_sweeps,
        trace=trace,
    )
    t2 = time.perf_counter()
    bound = lower_bound(instance, config.exact_limit)
    return SolveReport(
        solution=solution,
        phase1=phase1,
        lower_bound=bound.value,
        lower_bound_exact=bound.exact,
        proven_optimal_discrete=phase1.proven_optimal,
        timings={"phase1": t1 - t0, "phase2": t2 - t1, "total": t2 - t0},
        config=config,
    )


# ---------------------------------------------------------------------------
# Validation against the problem's constraint families.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    family: str
    ok: bool
    residual: float
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]
    recomputed_total: float | None

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]


def validate_solution(
    instance: Instance, solution: ContinuousSolution, tolerance: float = 1e-9
) -> ValidationReport:
    """Itemized constraint check: visit counts, single cycle with a consistent
    sequence assignment, disk membership, edge-length consistency, and total.

    Violations are report entries, never exceptions.
    """
    n = instance.n
    checks: list[CheckResult] = []

    shape_ok = (
        len(solution.order) == n
        and len(solution.points) == n
        and len(solution.edge_lengths) == n
        and all(0 <= v < n for v in solution.order)
    )
    checks.append(
        CheckResult(
            "format",
            shape_ok,
            0.0,
            f"order/points/edge_lengths sized for {n} circles with indices in range"
            if shape_ok
            else f"expected {n} circles; got order={len(solution.order)}, "
            f"points={len(solution.points)}, edges={len(solution.edge_lengths)}",
        )
    )
    if not shape_ok:
        return ValidationReport(tuple(checks), None)

    counts = [0] * n
    for v in solution.order:
        counts[v] += 1
    dup = sum(1 for c in counts if c != 1)
    visit_ok = dup == 0
    checks.append(
        CheckResult(
            "visit-count",
            visit_ok,
            float(dup),
            "each circle visited exactly once"
            if visit_ok
            else "circles visited wrong number of times: "
            + ", ".join(f"{i}×{c}" for i, c in enumerate(counts) if c != 1),
        )
    )

    if visit_ok:
        succ = {solution.order[t]: solution.order[(t + 1) % n] for t in range(n)}
        cycles = find_subtours(succ)
        # A sequence assignment (tour positions) must satisfy the usual
        # subtour-elimination inequalities for every non-anchor pair.
        pos = {c: t for t, c in enumerate(solution.order)}
        worst = -math.inf
        for i in range(n):
            for j in range(n):
                if i == j or i == 0 or j == 0:
                    continue
                p_ij = 1 if succ[i] == j else 0
                worst = max(worst, pos[i] - pos[j] + n * p_ij - (n - 1))
        cycle_ok = len(cycles) == 1 and worst <= 0
        checks.append(
            CheckResult(
                "single-cycle",
                cycle_ok,
                float(max(0, worst)),
                "one tour; a consistent sequence assignment exists"
                if cycle_ok
                else f"{len(cycles)} cycles found",
            )
        )
    else:
        checks.append(
            CheckResult(
                "single-cycle", False, math.nan, "not evaluated: order is not a permutation"
            )
        )

    worst_disk = 0.0
    worst_circle = -1
    for i, c in enumerate(instance.circles):
        du = solution.points[i][0] - c.x
        dv = solution.points[i][1] - c.y
        residual = du * du + dv * dv - c.r * c.r
        if residual > worst_disk:
            worst_disk = residual
            worst_circle = i
    disk_ok = worst_disk <= tolerance
    checks.append(
        CheckResult(
            "disk-membership",
            disk_ok,
            worst_disk,
            "all points inside their circles"
            if disk_ok
            else f"point of circle {worst_circle} outside its circle "
            f"(squared residual {worst_disk:.3e})",
        )
    )

    worst_edge = 0.0
    worst_t = -1
    for t in range(n):
        a = solution.points[solution.order[t]]
        b = solution.points[solution.order[(t + 1) % n]]
        dx = a[0] - b[0]
        dy = a[1] - b[1]
        recomputed = math.sqrt(dx * dx + dy * dy)
        residual = abs(solution.edge_lengths[t] - recomputed)
        if residual > worst_edge:
            worst_edge = residual
            worst_t = t
    edge_ok = worst_edge <= tolerance
    checks.append(
        CheckResult(
            "edge-lengths",
            edge_ok,
            worst_edge,
            "stated edge lengths match the point distances"
            if edge_ok
            else f"edge {worst_t} differs from its point distance by {worst_edge:.3e}",
        )
    )

    recomputed_total = 0.0
    for t in range(n):
        a = solution.points[solution.order[t]]
        b = solution.points[solution.order[(t + 1) % n]]
        dx = a[0] - b[0]
        dy = a[1] - b[1]
        recomputed_total += math.sqrt(dx * dx + dy * dy)
    total_residual = max(
        abs(solution.total - sum(solution.edge_lengths)),
        abs(solution.total - recomputed_total),
    )
    total_ok = total_residual <= tolerance
    checks.append(
        CheckResult(
            "total",
            total_ok,
            total_residual,
            "stated total matches the recomputed tour length"
            if total_ok
            else f"stated total off by {total_residual:.3e}",
        )
    )
    return ValidationReport(tuple(checks), recomputed_total)


# ---------------------------------------------------------------------------
# Report serialization. Timings are excluded by default so identical runs
# write identical bytes; pass include_timings=True to embed them.
# ---------------------------------------------------------------------------


def report_to_dict(report: SolveReport, include_timings: bool = False) -> dict[str, Any]:
    extras: dict[str, Any] = {
        "phase1_length": report.phase1.length,
        "lower_bound": report.lower_bound,
        "proven_optimal_discrete": report.proven_optimal_discrete,
    }
    if include_timings:
        extras["timings"] = dict(report.timings)
    return solution_to_dict(
        report.solution,
        method=report.config.method,
        k=report.config.k,
        sector_mode=report.config.sector_mode,
        extras=extras,
    )


def save_report(report: SolveReport, path: str | Path, include_timings: bool = False) -> None:
    d = report_to_dict(report, include_timings)
    Path(path).write_text(json.dumps(d, indent=2) + "\n", encoding="utf-8")
