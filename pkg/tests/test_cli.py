import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from gridmwt import driver
from gridmwt.cli import emit, main, parse_points
from gridmwt.driver import CheckRecord, RunConfig, run
from gridmwt.errors import DegenerateInputError, InputFormatError

DATA = Path(__file__).parent / "data"


def test_parse_examples():
    assert len(parse_points("0 0\n1 0\n0 1")) == 3
    (p,) = parse_points("1/3 2/3").points
    assert p == (Fraction(1, 3), Fraction(2, 3))
    with pytest.raises(DegenerateInputError) as info:
        parse_points("0 0\n1 1\n2 2\n0 5")
    assert info.value.triple == (0, 1, 2)
    assert "(0, 1, 2)" in str(info.value)


def test_parse_decimals_exactly():
    (p,) = parse_points(io.StringIO("# c\n\n0.1 -2.50\n")).points
    assert p == (Fraction(1, 10), Fraction(-5, 2))


def test_parse_reports_line_numbers():
    with pytest.raises(InputFormatError, match="line 3"):
        parse_points("0 0\n# skip\n1 x\n")
    with pytest.raises(InputFormatError, match="line 2"):
        parse_points("0 0\n1 2 3\n")
    with pytest.raises(InputFormatError, match="line 1"):
        parse_points("1/0 2\n")


def test_parse_from_path():
    assert len(parse_points(DATA / "nine.txt")) == 9


def test_emit_triangle_edges():
    r = run(parse_points(DATA / "triangle.txt"))
    assert emit(r, "edges").decode() == "# n=3 h=3 m=3\n0 1\n0 2\n1 2\n"


def test_emit_json_round_trip():
    r = run(parse_points(DATA / "nine.txt"), RunConfig(seed=4, oracle="exact"))
    doc = json.loads(emit(r, "json"))
    assert Fraction(doc["gamma"]) == r.gamma
    assert (doc["n"], doc["h"], doc["m"]) == (9, r.h, len(r.edges))
    assert [tuple(e) for e in doc["edges"]] == r.edges
    assert [lv["after_phase2"] for lv in doc["levels"]] == [x.after_phase2 for x in r.records]
    assert doc["weights"]["w"] == float(f"{r.cost.w:.12g}")
    assert doc["weights"]["alpha"] == float(f"{r.cost.alpha:.12g}")
    assert [c["passed"] for c in doc["checks"]] == [c.passed for c in r.checks]
    assert set(doc["timing"]) == {"setup", "levels", "finish", "total"}


def test_emit_svg_matches_golden():
    r = run(parse_points(DATA / "nine.txt"), RunConfig(seed=0))
    assert emit(r, "svg") == (DATA / "nine.svg").read_bytes()


def test_emit_unknown_format():
    with pytest.raises(ValueError):
        emit(run(parse_points(DATA / "triangle.txt")), "ply")


def test_triangulate_to_file(tmp_path, capsys):
    out = tmp_path / "e.txt"
    assert main(["triangulate", "--input", str(DATA / "quad_center.txt"), "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# n=5 h=4 m=8" and len(lines) == 9


def test_triangulate_flags(capsys):
    args = ["triangulate", "--input", str(DATA / "nine.txt"), "--gamma", "1/2", "--q", "inf",
            "--no-improved", "--check", "all", "--oracle", "exact", "--format", "json"]
    assert main(args) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["gamma"] == "1/2" and doc["q"] == "inf" and doc["improved"] is False
    assert {c["name"] for c in doc["checks"]} >= {"invariant1", "invariant2", "chains"}


def test_bad_flag_values():
    for bad in (["--gamma", "1/4"], ["--q", "0"], ["--check", "bogus"]):
        with pytest.raises(SystemExit):
            main(["triangulate", "--input", str(DATA / "triangle.txt"), *bad])


def test_exit_input_errors(tmp_path, capsys):
    assert main(["triangulate", "--input", str(tmp_path / "missing.txt")]) == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0\n1 1\n2 2\n0 5\n")
    assert main(["validate", "--input", str(bad)]) == 1
    assert "collinear" in capsys.readouterr().err
    bad.write_text("0 0\n1 zz\n")
    assert main(["triangulate", "--input", str(bad)]) == 1
    assert "line 2" in capsys.readouterr().err
    bad.write_text("0 0\n1 1\n")
    assert main(["triangulate", "--input", str(bad)]) == 1


def test_exit_check_failure(monkeypatch, capsys):
    def failing(trace, level, *args, **kw):
        return CheckRecord("invariant1", False, level, "forced")
    monkeypatch.setattr(driver, "check_invariant1", failing)
    assert main(["triangulate", "--input", str(DATA / "nine.txt")]) == 2


def test_exit_oracle_scale(capsys):
    path = str(DATA / "eleven.txt")
    assert main(["triangulate", "--input", path, "--oracle", "exact"]) == 3
    assert main(["oracle", "--input", path]) == 3
    assert main(["triangulate", "--input", path]) == 0


def test_validate_ok(capsys):
    assert main(["validate", "--input", str(DATA / "nine.txt")]) == 0
    assert capsys.readouterr().out.strip() == "ok n=9"


def test_oracle_command(capsys):
    assert main(["oracle", "--input", str(DATA / "quad_center.txt"), "--q", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "# n=5 h=4 m=8"
    assert out[1].startswith("# q=2 weight=")
    assert len(out) == 10


def test_trials_command(capsys):
    assert main(["trials", "--input", str(DATA / "nine.txt"), "--seeds", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [s["seed"] for s in doc["per_seed"]] == [0, 1, 2]
    alphas = [s["alpha"] for s in doc["per_seed"]]
    assert doc["max_alpha"] == max(alphas) and doc["max_alpha"] >= 1


@pytest.mark.parametrize("fmt", ["edges", "svg"])
def test_subprocess_determinism(fmt):
    cmd = [sys.executable, "-m", "gridmwt", "triangulate", "--input", str(DATA / "nine.txt"),
           "--seed", "5", "--format", fmt]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
