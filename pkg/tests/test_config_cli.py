import json
from pathlib import Path

import numpy as np
import pytest

from ppnash.cli import main
from ppnash.config import ConfigError, load_experiment, parse_game_spec, parse_network_spec

EX1 = {"game": {"builtin": 1}, "network": {"topology": "complete", "N": 2},
       "solver": {"alpha_grid": [1.0, 0.5], "seed": 2}, "tasks": ["solve"]}


def write(tmp_path, obj, name="exp.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj, indent=1) if not isinstance(obj, str) else obj)
    return p


def read_trace(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# ") and "config_sha256=" in lines[0] and "seed=" in lines[0]
    assert lines[1] == "k,fp_residual,consensus_residual,ne_distance,phi_distance,a_residual"
    return np.array([[float(v) for v in line.split(",")] for line in lines[2:]])


def test_solve_example1(tmp_path):
    cfg = write(tmp_path, EX1)
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    rows = read_trace(tmp_path / "o" / "trace.csv")
    assert rows[-1, 3] <= 1e-6
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert summary["meta"]["seed"] == 2 and len(summary["meta"]["config_sha256"]) == 64
    assert summary["alpha_selection"]["source"] == "grid"


def test_same_config_byte_reproduces_trace(tmp_path):
    cfg = write(tmp_path, EX1)
    for out in ("a", "b"):
        assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / out)]) == 0
    assert (tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()


def test_taxonomy_example2(tmp_path):
    cfg = write(tmp_path, dict(EX1, game={"builtin": 2}, lab={"samples": 20000}))
    assert main(["taxonomy", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    doc = json.loads((tmp_path / "o" / "taxonomy.json").read_text())
    cond = doc["conditions"]
    assert cond["C4"]["verdict"] == "no-violation-found"
    assert all(cond[f"C{k}"]["verdict"] == "violated" for k in range(5, 11))
    assert doc["meta"]["seed"] == 2


def test_missing_network_section(tmp_path, capsys):
    cfg = write(tmp_path, {"game": {"builtin": 2}, "tasks": ["solve"], "solver": {"alpha": 1}})
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "o")]) != 0
    rec = json.loads((tmp_path / "o" / "failure.json").read_text())
    assert rec["field"] == "network" and "network" in rec["message"]


def test_parse_error_reports_line(tmp_path):
    cfg = write(tmp_path, '{\n "game": {"builtin": 1},\n "tasks": [solve]\n}')
    with pytest.raises(ConfigError) as err:
        load_experiment(cfg)
    assert err.value.line == 3


def test_unknown_field_reports_line(tmp_path):
    cfg = write(tmp_path, dict(EX1, solver={"alpha": 1.0, "bogus": 3}))
    with pytest.raises(ConfigError) as err:
        load_experiment(cfg)
    assert err.value.field == "solver.bogus" and err.value.line is not None


def test_non_doubly_stochastic_user_W(tmp_path):
    cfg = write(tmp_path, dict(EX1, network={"W": [[0.7, 0.4], [0.4, 0.7]]}))
    with pytest.raises(ConfigError, match="assumption violated"):
        load_experiment(cfg)


def test_alpha_required_for_solve(tmp_path):
    cfg = write(tmp_path, dict(EX1, solver={}))
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2


def test_forced_large_alpha_rejected(tmp_path):
    cfg = write(tmp_path, dict(EX1, game={"builtin": 2}))
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "o"), "--alpha", "10"]) == 1
    rec = json.loads((tmp_path / "o" / "failure.json").read_text())
    assert rec["failures"][0]["reason"] == "alpha rejected by restricted-monotonicity pre-check"


def test_all_tasks_and_seed_override(tmp_path):
    cfg = write(tmp_path, dict(EX1, tasks=["taxonomy", "solve", "baseline", "resolvent-check"],
                               lab={"samples": 20000}))
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "o"), "--seed", "9"]) == 0
    s = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert s["meta"]["seed"] == 9
    assert s["results"]["resolvent-check"]["max_residual"] <= 1e-7
    assert (tmp_path / "o" / "baseline_trace.csv").exists()


def test_game_file_quadratic_with_box(tmp_path):
    game = {"kind": "quadratic", "Q": [[2, 1], [-1, 2]], "c": [1, -1], "dims": [1, 1],
            "feasible_sets": [{"kind": "box", "lower": [0], "upper": [1]}, {"kind": "whole-space"}]}
    write(tmp_path, {"game": game}, "game.json")
    g = parse_game_spec({"file": "game.json"}, base=str(tmp_path))
    assert g.feasible_sets[0].kind == "box"
    with pytest.raises(ConfigError, match="feasible set kind"):
        parse_game_spec(dict(game, feasible_sets=[{"kind": "ball"}, None]))


def test_plugin_game():
    g = parse_game_spec({"plugin": "ppnash.game_model:random_quadratic_game", "args": {"N": 3, "seed": 1}})
    assert g.N == 3


def test_network_specs(tmp_path):
    (tmp_path / "e.txt").write_text("1 2\n2 3\n")
    assert parse_network_spec({"edge_file": "e.txt"}, base=str(tmp_path)).N == 3
    assert parse_network_spec({"edges": [[1, 2], [2, 3], [3, 4]]}).N == 4
    with pytest.raises(ConfigError, match="disconnected"):
        parse_network_spec({"edges": [[1, 2], [3, 4]]})


def test_spectral_command(tmp_path, capsys):
    assert main(["spectral", "--topology", "path", "--N", "3", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "spectral.json").read_text())
    assert rep["sigma"] == pytest.approx(2 / 3)
    assert np.loadtxt(tmp_path / "weights.csv", delimiter=",").shape == (3, 3)


@pytest.mark.slow
def test_reproduce_examples_default_and_forced_alpha(tmp_path):
    assert main(["reproduce-examples", "--out", str(tmp_path / "r"), "--seeds", "2"]) == 0
    rep = json.loads((tmp_path / "r" / "report.json").read_text())
    assert rep["passed"] and (tmp_path / "r" / "report.md").exists()
    assert main(["reproduce-examples", "--out", str(tmp_path / "f"), "--seeds", "1", "--alpha", "10"]) == 1
    text = (tmp_path / "f" / "report.md").read_text()
    assert "alpha rejected by restricted-monotonicity pre-check" in text


@pytest.mark.parametrize("name", ["example2.json", "quadratic_box.json"])
def test_shipped_configs_parse(name):
    cfg = load_experiment(Path(__file__).resolve().parents[1] / "configs" / name)
    assert cfg.network.N == cfg.game.N and cfg.tasks
