"""Tests for src.cli.app: subcommands end to end and exit codes."""

import json

import pytest

from src.cli.app import main


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps({
        "problem": {"id": "sgd-pr", "dim": 2},
        "noise": {"kind": "state", "delta": 0.0, "gamma": 0.02},
        "schedule": {"plan": "state", "alpha": 16.0, "beta": 8.0, "k0": 200},
        "iterations": 50,
        "replicates": 40,
        "master_seed": 5,
        "per_decade": 4,
    }))
    return path


# ── plan ──────────────────────────────────────────────────────────────

def test_plan_state_default_steps(capsys):
    assert main(["plan", "--mode", "state", "--delta", "0"]) == 0
    out = capsys.readouterr().out
    assert "a = 0.6667" in out
    assert "t = 0.6667" in out
    assert out.rstrip().endswith("feasible")


def test_plan_time_mode(capsys):
    assert main(["plan", "--mode", "time", "--gamma1", "0", "--gamma2", "1"]) == 0
    out = capsys.readouterr().out
    assert "a = 1.0000" in out
    assert "t = 1.0000" in out


def test_plan_time_gap_is_infeasible():
    assert main(["plan", "--mode", "time", "--gamma1", "2", "--gamma2", "0"]) == 2


def test_plan_quadratic_defaults(capsys):
    assert main(["plan", "--mode", "quadratic"]) == 0
    out = capsys.readouterr().out
    assert "beta* = " in out
    assert "epsilon = " in out


def test_plan_quadratic_small_omega(capsys):
    assert main(["plan", "--mode", "quadratic", "--omega", "4"]) == 2
    assert "INFEASIBLE" in capsys.readouterr().out


def test_plan_quadratic_sbo_tiny_omega(capsys):
    assert main(["plan", "--mode", "quadratic", "--problem", "sbo", "--omega", "1"]) == 2
    out = capsys.readouterr().out
    assert "INFEASIBLE" in out
    assert "omega too small" in out


def test_plan_practical_small_k0(capsys):
    code = main(["plan", "--mode", "state", "--delta", "0", "--alpha", "128", "--beta", "4", "--k0", "10",
                 "--practical"])
    assert code == 2
    assert "k0 = 10 below required" in capsys.readouterr().out


def test_plan_writes_json_and_bound_csv(tmp_path):
    bound = tmp_path / "bound.csv"
    code = main(["plan", "--mode", "state", "--delta", "0", "--out", str(tmp_path),
                 "--bound-csv", str(bound), "--iterations", "1000"])
    assert code == 0
    data = json.loads((tmp_path / "plan_state.json").read_text())
    assert data["feasible"] is True
    lines = bound.read_text().splitlines()
    assert lines[0] == "k,bound"
    assert lines[-1].startswith("1000,")


def test_plan_constant_overrides(capsys):
    assert main(["plan", "--mode", "state", "--delta", "0", "--L-g", "1", "--mu-f", "1"]) == 0
    assert "  c = 4" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["plan", "--mode", "state", "--omega", "3"],
    ["plan", "--mode", "quadratic", "--practical"],
    ["plan", "--mode", "state", "--delta", "0", "0"],
    ["plan", "--mode", "state", "--delta", "1"],
    ["plan", "--mode", "cubic"],
    ["plan"],
    ["transmogrify"],
])
def test_plan_usage_errors(argv):
    assert main(argv) == 1


# ── run / fit ─────────────────────────────────────────────────────────

def test_run_writes_summary(tiny_config, tmp_path, capsys):
    out = tmp_path / "results"
    assert main(["run", str(tiny_config), "--out", str(out), "--threads", "2"]) == 0
    assert (out / "tiny.json").exists()
    assert (out / "tiny.csv").exists()
    assert "final mean_V" in capsys.readouterr().out


def test_run_is_independent_of_threads(tiny_config, tmp_path):
    for threads in ("1", "4"):
        assert main(["run", str(tiny_config), "--out", str(tmp_path / threads), "--threads", threads]) == 0
    assert (tmp_path / "1" / "tiny.csv").read_bytes() == (tmp_path / "4" / "tiny.csv").read_bytes()


def test_run_overrides(tiny_config, tmp_path):
    code = main(["run", str(tiny_config), "--out", str(tmp_path), "--seed", "9", "--replicates", "3",
                 "--iterations", "20", "--name", "override", "--threads", "1"])
    assert code == 0
    data = json.loads((tmp_path / "override.json").read_text())
    assert data["config"]["master_seed"] == 9
    assert data["config"]["replicates"] == 3
    assert data["checkpoints"][-1]["k"] == 20


def test_run_missing_config(tmp_path):
    assert main(["run", str(tmp_path / "absent.json")]) == 1


def test_fit_summary(tiny_config, tmp_path, capsys):
    main(["run", str(tiny_config), "--out", str(tmp_path), "--threads", "1"])
    capsys.readouterr()
    assert main(["fit", str(tmp_path / "tiny.json"), "--k-min", "1", "--out", str(tmp_path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "loglog"
    assert payload["rate"] == pytest.approx(-payload["slope"])
    assert (tmp_path / "tiny_fit_loglog.json").exists()


def test_fit_empty_window(tiny_config, tmp_path):
    main(["run", str(tiny_config), "--out", str(tmp_path), "--threads", "1"])
    assert main(["fit", str(tmp_path / "tiny.csv"), "--k-min", "1e9"]) == 2


@pytest.mark.parametrize("name", ["absent.json", "absent.csv"])
def test_fit_missing_summary(tmp_path, name):
    assert main(["fit", str(tmp_path / name)]) == 2


# ── verify ────────────────────────────────────────────────────────────

@pytest.mark.parametrize("problem", ["sgd-pr", "sbo"])
def test_verify_builtin_problems(problem, tmp_path, capsys):
    code = main(["verify", "--problem", problem, "--n", "500", "--points", "20", "--out", str(tmp_path)])
    assert code == 0
    assert capsys.readouterr().out.rstrip().endswith("PASS")
    assert (tmp_path / f"verify_{problem}.json").exists()


def test_verify_unknown_problem():
    assert main(["verify", "--problem", "rosenbrock"]) == 1
