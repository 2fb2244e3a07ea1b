import json
import math

import pytest

from tspcn import (
    Circle,
    ContinuousSolution,
    GenerationError,
    Instance,
    InstanceFormatError,
    SolverConfig,
    ValidationError,
    generate_instance,
    load_instance,
    load_solution,
    save_instance,
    save_solution,
)


def test_circle_invariants():
    Circle(0, 0, 0)
    with pytest.raises(ValueError):
        Circle(0, 0, -1)
    with pytest.raises(ValueError):
        Circle(math.nan, 0, 1)
    with pytest.raises(ValueError):
        Circle(0, math.inf, 1)


def test_instance_needs_two_circles():
    with pytest.raises(ValueError):
        Instance((Circle(0, 0, 1),))


def test_generate_deterministic_and_in_ranges():
    a = generate_instance(12, (0, 0, 100, 100), (2, 6), seed=1)
    b = generate_instance(12, (0, 0, 100, 100), (2, 6), seed=1)
    assert a == b
    assert a.n == 12
    for c in a.circles:
        assert 0 <= c.x <= 100 and 0 <= c.y <= 100
        assert 2 <= c.r <= 6


def test_generate_two_zero_radius_repeatable(tmp_path):
    a = generate_instance(2, (0, 0, 10, 10), (0, 0), seed=7)
    b = generate_instance(2, (0, 0, 10, 10), (0, 0), seed=7)
    assert a == b
    assert all(c.r == 0 for c in a.circles)
    pa, pb = tmp_path / "a.json", tmp_path / "b.json"
    save_instance(a, pa)
    save_instance(b, pb)
    assert pa.read_bytes() == pb.read_bytes()


def test_generate_rejects_n_below_two():
    with pytest.raises(ValueError):
        generate_instance(1, (0, 0, 10, 10), (0, 1), seed=0)


def test_generate_min_gap_respected():
    inst = generate_instance(8, (0, 0, 60, 60), (1, 2), seed=3, min_center_gap=10.0)
    cs = inst.circles
    for i in range(8):
        for j in range(i + 1, 8):
            assert math.dist((cs[i].x, cs[i].y), (cs[j].x, cs[j].y)) >= 10.0


def test_generate_infeasible_gap_errors():
    with pytest.raises(GenerationError, match="infeasible generation parameters"):
        generate_instance(4, (0, 0, 1, 1), (0, 0), seed=0, min_center_gap=50.0)


def test_instance_roundtrip_exact(tmp_path):
    inst = generate_instance(9, (-5, -5, 41.7, 33.3), (0.25, 7.5), seed=42, name="rt")
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    assert load_instance(path) == inst


def test_load_rejects_negative_radius(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"circles": [{"x": 0, "y": 0, "r": -1}, {"x": 1, "y": 1, "r": 1}]}))
    with pytest.raises(ValidationError):
        load_instance(path)


def test_load_rejects_nan_radius(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"circles": [{"x": 0, "y": 0, "r": NaN}, {"x": 1, "y": 1, "r": 1}]}')
    with pytest.raises(ValidationError):
        load_instance(path)


def test_load_missing_circles_key(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x"}')
    with pytest.raises(InstanceFormatError, match="circles"):
        load_instance(path)


def test_load_malformed_names_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"circles": [\n  {"x": }\n]}')
    with pytest.raises(InstanceFormatError, match="line 2"):
        load_instance(path)


def test_load_single_circle_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"circles": [{"x": 0, "y": 0, "r": 1}]}))
    with pytest.raises(ValidationError):
        load_instance(path)


def test_solution_roundtrip(tmp_path):
    sol = ContinuousSolution(
        order=(0, 2, 1),
        points=((0.0, 0.1), (2.5, -3.0), (1.0, 1.0)),
        edge_lengths=(1.0, 2.0, 3.0),
        total=6.0,
    )
    path = tmp_path / "sol.json"
    save_solution(sol, "exact-dp", 4, "full-disk", path, extras={"lower_bound": 5.5})
    loaded, meta = load_solution(path)
    assert loaded == sol
    assert meta["method"] == "exact-dp"
    assert meta["k"] == 4
    assert meta["sector_mode"] == "full-disk"
    assert meta["lower_bound"] == 5.5


def test_solver_config_validation():
    SolverConfig()
    with pytest.raises(ValueError):
        SolverConfig(k=0)
    with pytest.raises(ValueError):
        SolverConfig(method="annealing")
    with pytest.raises(ValueError):
        SolverConfig(sector_mode="disk")
    with pytest.raises(ValueError):
        SolverConfig(descent_tol=0.0)
    with pytest.raises(ValueError):
        SolverConfig(time_limit=-1.0)
