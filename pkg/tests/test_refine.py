import math
import random

import pytest

from tspcn import (
    Circle,
    FeasibleRegion,
    Instance,
    RefineTrace,
    build_regions,
    generate_instance,
    point_subproblem,
    sequence_refine,
    solve_exact_dp,
)
from tspcn.geometry import sector_box, segment_disk_hit
from tspcn.refine import start_points_for

from .oracles import region_grid_best


def f_value(p, prev, nxt):
    return math.dist(p, prev) + math.dist(p, nxt)


def test_point_subproblem_tangency():
    p = point_subproblem((-5, 0), (5, 0), FeasibleRegion(Circle(0, 3, 3)))
    assert p == (0.0, 0.0)
    assert f_value(p, (-5, 0), (5, 0)) == pytest.approx(10.0, abs=1e-12)


def test_point_subproblem_boundary_by_symmetry():
    p = point_subproblem((-5, 0), (5, 0), FeasibleRegion(Circle(0, 4, 1)))
    assert p[0] == pytest.approx(0.0, abs=1e-9)
    assert p[1] == pytest.approx(3.0, abs=1e-9)
    assert f_value(p, (-5, 0), (5, 0)) == pytest.approx(2 * math.sqrt(34), abs=1e-9)


def test_point_subproblem_degenerate_projection():
    p = point_subproblem((2, 2), (2, 2), FeasibleRegion(Circle(0, 0, 1)))
    assert p[0] == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert p[1] == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert f_value(p, (2, 2), (2, 2)) == pytest.approx(2 * (2 * math.sqrt(2) - 1), abs=1e-9)


def test_point_subproblem_zero_radius():
    p = point_subproblem((5, 5), (-4, 2), FeasibleRegion(Circle(1, 1, 0)))
    assert p == (1.0, 1.0)


def test_point_subproblem_rejects_nonfinite():
    with pytest.raises(ValueError):
        point_subproblem((math.nan, 0), (1, 1), FeasibleRegion(Circle(0, 0, 1)))


def test_point_subproblem_segment_hit_is_exact():
    rng = random.Random(71)
    checked = 0
    for _ in range(400):
        c = Circle(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.2, 4))
        prev = (rng.uniform(-10, 10), rng.uniform(-10, 10))
        nxt = (rng.uniform(-10, 10), rng.uniform(-10, 10))
        if segment_disk_hit(prev, nxt, c) is None:
            continue
        p = point_subproblem(prev, nxt, FeasibleRegion(c))
        assert f_value(p, prev, nxt) == pytest.approx(math.dist(prev, nxt), abs=1e-12)
        checked += 1
    assert checked > 80


@pytest.mark.parametrize("with_box", (False, True))
def test_point_subproblem_beats_dense_grid(with_box):
    rng = random.Random(13 if with_box else 29)
    for _ in range(100):
        c = Circle(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.1, 4))
        box = sector_box(c, rng.randrange(4), 4) if with_box else None
        region = FeasibleRegion(c, box)
        prev = (rng.uniform(-12, 12), rng.uniform(-12, 12))
        nxt = (rng.uniform(-12, 12), rng.uniform(-12, 12))
        p = point_subproblem(prev, nxt, region)
        assert region.contains(p, tol=1e-9)
        assert f_value(p, prev, nxt) <= region_grid_best(prev, nxt, region) + 1e-6


def test_build_regions_modes():
    inst = Instance((Circle(0, 0, 2), Circle(9, 1, 0)))
    boxed = build_regions(inst, (0, 0), 4, "sector-box")
    assert boxed[0].box == sector_box(inst.circles[0], 0, 4)
    assert boxed[1].box is not None
    assert boxed[1].box.umin == boxed[1].box.umax == 9.0
    free = build_regions(inst, (0, 0), 4, "full-disk")
    assert all(r.box is None for r in free)
    with pytest.raises(ValueError):
        build_regions(inst, (0, 0), 4, "pie")


def test_sequence_refine_two_circles_reaches_optimum():
    inst = Instance((Circle(0, 0, 1), Circle(10, 0, 1)))
    tour = solve_exact_dp(inst)
    regions = build_regions(inst, tour.slots, 4, "full-disk")
    starts = start_points_for(inst, tour.slots, 4)
    sol = sequence_refine(inst, tour.order, starts, regions)
    assert sol.total == pytest.approx(16.0, abs=1e-6)
    assert sol.points[0][0] == pytest.approx(1.0, abs=1e-5)
    assert sol.points[1][0] == pytest.approx(9.0, abs=1e-5)


def test_sequence_refine_collinear_overlapping_triple():
    inst = Instance((Circle(0, 0, 2), Circle(1, 0, 2), Circle(10, 0, 1)))
    tour = solve_exact_dp(inst)
    regions = build_regions(inst, tour.slots, 4, "full-disk")
    starts = start_points_for(inst, tour.slots, 4)
    sol = sequence_refine(inst, tour.order, starts, regions)
    assert sol.total == pytest.approx(14.0, abs=1e-6)


def test_sequence_refine_zero_radius_single_sweep():
    inst = generate_instance(7, (0, 0, 40, 40), (0, 0), seed=3)
    tour = solve_exact_dp(inst)
    regions = build_regions(inst, tour.slots, 4, "full-disk")
    starts = start_points_for(inst, tour.slots, 4)
    trace = RefineTrace()
    sol = sequence_refine(inst, tour.order, starts, regions, trace=trace)
    assert len(trace.sweep_totals) == 1
    assert sol.points == tuple((c.x, c.y) for c in inst.circles)
    assert sol.total == pytest.approx(tour.length, abs=1e-9)


def test_sequence_refine_monotone_updates_and_never_worse_than_start():
    for seed in range(8):
        n = 4 + seed
        inst = generate_instance(n, (0, 0, 35, 35), (1, 5), seed=seed)
        tour = solve_exact_dp(inst)
        for mode in ("full-disk", "sector-box"):
            regions = build_regions(inst, tour.slots, 4, mode)
            starts = start_points_for(inst, tour.slots, 4)
            trace = RefineTrace()
            sol = sequence_refine(inst, tour.order, starts, regions, trace=trace)
            assert sol.total <= tour.length + 1e-9
            for _, f_old, f_new in trace.updates:
                assert f_new <= f_old + 1e-12
            for i, p in enumerate(sol.points):
                assert regions[i].contains(p, tol=1e-9)


def test_sequence_refine_total_consistency():
    inst = generate_instance(6, (0, 0, 30, 30), (1, 3), seed=10)
    tour = solve_exact_dp(inst)
    regions = build_regions(inst, tour.slots, 4, "full-disk")
    sol = sequence_refine(
        inst, tour.order, start_points_for(inst, tour.slots, 4), regions
    )
    assert sol.total == pytest.approx(sum(sol.edge_lengths), abs=1e-9)
    n = inst.n
    for t in range(n):
        a = sol.points[sol.order[t]]
        b = sol.points[sol.order[(t + 1) % n]]
        assert sol.edge_lengths[t] == pytest.approx(math.dist(a, b), abs=1e-9)


def test_sequence_refine_rejects_infeasible_start():
    inst = Instance((Circle(0, 0, 1), Circle(10, 0, 1)))
    regions = build_regions(inst, (0, 1), 4, "full-disk")
    with pytest.raises(ValueError, match="circle 1"):
        sequence_refine(inst, (0, 1), [(0.0, 0.0), (50.0, 0.0)], regions)
