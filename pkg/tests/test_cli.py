import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from tspcn import generate_instance, load_instance, save_instance
from tspcn.cli import main


def run(argv):
    return main(argv)


def make_instance(tmp_path, n=6, seed=1, radii="1,4"):
    path = tmp_path / f"inst{n}_{seed}.json"
    code = run(
        [
            "generate",
            "--n", str(n),
            "--box", "0,0,40,40",
            "--radius", radii,
            "--seed", str(seed),
            "--out", str(path),
        ]
    )
    assert code == 0
    return path


def test_generate_writes_valid_instance(tmp_path):
    path = make_instance(tmp_path, n=12, seed=1)
    inst = load_instance(path)
    assert inst.n == 12
    assert all(1 <= c.r <= 4 for c in inst.circles)


def test_generate_rejects_n_one(tmp_path):
    code = run(["generate", "--n", "1", "--out", str(tmp_path / "x.json")])
    assert code == 2


def test_generate_bad_box_is_usage_error(tmp_path):
    code = run(["generate", "--n", "4", "--box", "0,0,10", "--out", str(tmp_path / "x.json")])
    assert code == 2


def test_generate_byte_identical(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    flags = ["--n", "8", "--box", "0,0,50,50", "--radius", "1,3", "--seed", "9"]
    assert run(["generate", *flags, "--out", str(a)]) == 0
    assert run(["generate", *flags, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_then_validate_roundtrip(tmp_path):
    inst = make_instance(tmp_path)
    sol = tmp_path / "sol.json"
    code = run(
        ["solve", str(inst), "--method", "exact-dp", "--k", "4",
         "--sector", "full-disk", "--out", str(sol)]
    )
    assert code == 0
    assert run(["validate", str(inst), str(sol)]) == 0
    data = json.loads(sol.read_text())
    assert data["method"] == "exact-dp"
    assert "timings" not in data


def test_solve_heuristic_deterministic(tmp_path):
    inst = make_instance(tmp_path, n=15, seed=4)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(
            ["solve", str(inst), "--method", "heuristic", "--seed", "5", "--out", str(out)]
        ) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_exact_over_limit_fails_with_message(tmp_path, capsys):
    inst = make_instance(tmp_path, n=20, seed=2)
    code = run(["solve", str(inst), "--method", "exact-dp", "--out", str(tmp_path / "s.json")])
    assert code == 1
    assert "exact-dp handles at most" in capsys.readouterr().err


def test_solve_unreadable_instance(tmp_path):
    code = run(["solve", str(tmp_path / "missing.json"), "--out", str(tmp_path / "s.json")])
    assert code == 1


def test_validate_detects_tampered_point(tmp_path, capsys):
    inst_path = make_instance(tmp_path)
    sol = tmp_path / "sol.json"
    assert run(["solve", str(inst_path), "--out", str(sol)]) == 0
    data = json.loads(sol.read_text())
    inst = load_instance(inst_path)
    c = inst.circles[2]
    data["points"][2] = [c.x + c.r + 1e-3, c.y]
    sol.write_text(json.dumps(data))
    code = run(["validate", str(inst_path), str(sol)])
    assert code == 4
    out = capsys.readouterr().out
    assert "disk-membership" in out and "circle 2" in out


def test_validate_detects_repeated_circle(tmp_path, capsys):
    inst_path = make_instance(tmp_path)
    sol = tmp_path / "sol.json"
    assert run(["solve", str(inst_path), "--out", str(sol)]) == 0
    data = json.loads(sol.read_text())
    data["order"][2] = data["order"][1]
    sol.write_text(json.dumps(data))
    assert run(["validate", str(inst_path), str(sol)]) == 4
    assert "visit-count" in capsys.readouterr().out


def test_validate_mismatched_n(tmp_path):
    inst_path = make_instance(tmp_path, n=6)
    other = make_instance(tmp_path, n=7, seed=3)
    sol = tmp_path / "sol.json"
    assert run(["solve", str(other), "--out", str(sol)]) == 0
    assert run(["validate", str(inst_path), str(sol)]) == 1


def test_plot_svg_well_formed_and_deterministic(tmp_path):
    inst_path = make_instance(tmp_path, n=5, seed=8)
    sol = tmp_path / "sol.json"
    svg_a = tmp_path / "a.svg"
    svg_b = tmp_path / "b.svg"
    assert run(["solve", str(inst_path), "--out", str(sol), "--plot", str(svg_a)]) == 0
    assert run(["solve", str(inst_path), "--out", str(sol), "--plot", str(svg_b)]) == 0
    assert svg_a.read_bytes() == svg_b.read_bytes()
    text = svg_a.read_text()
    root = ET.fromstring(text)
    assert root.tag.endswith("svg")
    assert text.count('class="disk"') == 5
    assert text.count('class="pt"') == 5
    assert text.count('class="tour"') == 1
    assert text.count("<text") == 5
    assert "http://" not in text.replace("http://www.w3.org/2000/svg", "")
    polygon = next(el for el in root.iter() if el.tag.endswith("polygon"))
    assert len(polygon.attrib["points"].split()) == 5


def test_svg_two_circle_counts(tmp_path):
    inst = tmp_path / "two.json"
    save_instance(generate_instance(2, (0, 0, 20, 20), (1, 2), seed=0), inst)
    svg = tmp_path / "two.svg"
    assert run(["solve", str(inst), "--out", str(tmp_path / "s.json"), "--plot", str(svg)]) == 0
    text = svg.read_text()
    assert text.count('class="disk"') == 2
    assert text.count('class="pt"') == 2
    polygon = ET.fromstring(text).find(".//{http://www.w3.org/2000/svg}polygon")
    assert len(polygon.attrib["points"].split()) == 2


def test_bench_rows_and_gaps(tmp_path, capsys):
    assert run(["bench", "--sizes", "6", "--seeds", "3", "--csv"]) == 0
    out = capsys.readouterr().out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    for row in rows:
        assert float(row["gap"]) >= 0.0
        assert float(row["length"]) >= float(row["lower_bound"])
        assert row["method"] == "exact-dp"


def test_bench_two_circles_gap_zero(capsys):
    assert run(["bench", "--sizes", "2", "--seeds", "3", "--csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 3
    for row in rows:
        assert float(row["gap"]) == 0.0


def test_bench_table_output(capsys):
    assert run(["bench", "--sizes", "4", "--seeds", "1"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("n")
    assert "exact-dp" in out


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.json"
    proc = subprocess.run(
        [sys.executable, "-m", "tspcn", "generate", "--n", "4", "--seed", "0",
         "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert load_instance(out).n == 4


def test_timings_flag_embeds_timings(tmp_path):
    inst = make_instance(tmp_path, n=4, seed=6)
    sol = tmp_path / "sol.json"
    assert run(["solve", str(inst), "--out", str(sol), "--timings"]) == 0
    assert "timings" in json.loads(sol.read_text())
