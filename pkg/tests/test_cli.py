import csv
import json

import pytest

from twophase.cli import main

GOLDEN = {
    ("solve-parabolic", "solution.csv"): "t,x,u",
    ("solve-parabolic", "signs.csv"): "t,x,class",
    ("solve-parabolic", "free_boundary.csv"): "t,x",
    ("solve-parabolic", "diagnostics.csv"): "m,t,ut_sup,residual_sup,inner_iterations",
    ("solve-elliptic", "solution.csv"): "x,u",
    ("solve-elliptic", "signs.csv"): "x,class",
    ("solve-elliptic", "free_boundary.csv"): "x",
}

SMALL = {"problem": {"case": "fig1", "nodes": 21, "steps": 20},
         "solver": {"mode": "implicit", "snapshot_stride": 5}}


def _write(tmp_path, data, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _header(path):
    with open(path) as fh:
        return fh.readline().strip()


@pytest.mark.parametrize("command", ["solve-parabolic", "solve-elliptic"])
def test_golden_headers(tmp_path, command):
    out = tmp_path / "out"
    assert main([command, "--config", _write(tmp_path, SMALL), "--out", str(out)]) == 0
    for (cmd, name), header in GOLDEN.items():
        if cmd == command:
            assert _header(out / name) == header
    man = json.loads((out / "manifest.json").read_text())
    assert man["schema_version"] == 1 and man["command"] == command
    assert "wall_seconds" in json.loads((out / "timing.json").read_text())


def test_two_dimensional_headers(tmp_path):
    cfg = {"problem": {"dim": 2, "nodes": 7, "lambda_plus": 1, "lambda_minus": 1,
                       "h": "x - y"}}
    out = tmp_path / "out"
    assert main(["solve-elliptic", "--config", _write(tmp_path, cfg), "--out", str(out)]) == 0
    assert _header(out / "solution.csv") == "x,y,u"
    assert _header(out / "free_boundary.csv") == "x,y"


def test_solve_is_deterministic(tmp_path):
    cfg = _write(tmp_path, SMALL)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["solve-parabolic", "--config", cfg, "--out", str(a)]) == 0
    assert main(["solve-parabolic", "--config", cfg, "--out", str(b)]) == 0
    for f in ["solution.csv", "signs.csv", "free_boundary.csv", "diagnostics.csv",
              "manifest.json"]:
        assert (a / f).read_bytes() == (b / f).read_bytes(), f


def test_zero_boundary_elliptic_csv(tmp_path):
    cfg = {"problem": {"nodes": 11, "lambda_plus": 1, "lambda_minus": 1, "h": 0}}
    out = tmp_path / "out"
    assert main(["solve-elliptic", "--config", _write(tmp_path, cfg), "--out", str(out)]) == 0
    with open(out / "solution.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 11 and all(float(r["u"]) == 0 for r in rows)


def test_missing_field_exit_2(tmp_path, capsys):
    cfg = {"problem": {"nodes": 11, "lambda_plus": 1, "h": 0}}
    assert main(["solve-elliptic", "--config", _write(tmp_path, cfg)]) == 2
    assert "problem.lambda_minus" in capsys.readouterr().err


def test_explicit_cfl_exit_1(tmp_path, capsys):
    cfg = {"problem": {"case": "fig1"}, "solver": {"mode": "explicit"}}
    assert main(["solve-parabolic", "--config", _write(tmp_path, cfg),
                 "--out", str(tmp_path / "o")]) == 1
    assert "1/K = 0.5" in capsys.readouterr().err


def test_elliptic_nonconvergence_exit_1(tmp_path):
    cfg = {"problem": {"case": "fig1", "nodes": 41}, "solver": {"max_iterations": 1}}
    out = tmp_path / "out"
    assert main(["solve-elliptic", "--config", _write(tmp_path, cfg), "--out", str(out)]) == 1
    report = json.loads((out / "manifest.json").read_text())["report"]
    assert report["converged"] is False and report["iterations"] == 1


def test_convergence_study(tmp_path):
    cfg = {"study": {"kind": "parabolic_probe", "probe": "exp_sin", "point": 0.5,
                     "levels": [11, 21, 41, 81]}}
    out = tmp_path / "out"
    assert main(["convergence-study", "--config", _write(tmp_path, cfg),
                 "--out", str(out)]) == 0
    assert _header(out / "convergence.csv") == "level,h,dt,error"
    slope = json.loads((out / "manifest.json").read_text())["report"]["slope"]
    assert slope >= 0.8


def test_convergence_study_two_levels_exit_2(tmp_path):
    cfg = {"study": {"kind": "heat", "levels": [11, 21]}}
    assert main(["convergence-study", "--config", _write(tmp_path, cfg)]) == 2


def test_unknown_subcommand_exit_2():
    assert main(["frobnicate"]) == 2


def test_verify_seeded_runs_identical(tmp_path):
    args = ["verify", "--seed", "42", "--fuzz-trials", "200", "--exactness-trials", "50",
            "--oracle-trials", "5", "--comparison-trials", "5"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert (a / "verify.json").read_bytes() == (b / "verify.json").read_bytes()


def test_verify_injected_violation_fails(tmp_path, capsys):
    args = ["verify", "--fuzz-trials", "200", "--exactness-trials", "10",
            "--oracle-trials", "2", "--comparison-trials", "2", "--inject-cfl-violation",
            "--out", str(tmp_path)]
    assert main(args) == 1
    report = json.loads((tmp_path / "verify.json").read_text())
    failing = [c["name"] for c in report["checks"] if not c["passed"]]
    assert failing == ["monotonicity[parabolic]"]
    assert "--seed" in capsys.readouterr().err
