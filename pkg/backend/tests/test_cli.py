import json
from pathlib import Path

import pytest

from app.cli import build_parser, main, read_config_file
from app.schemas import ExperimentConfig

RUNS = Path(__file__).resolve().parents[2] / "runs"


def write_toml(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_diameter_run_from_toml(tmp_path, capsys):
    cfg = write_toml(tmp_path / "run.toml", 'set = "interval"\nr_range = [2, 6]\n\n[[weight]]\nkind = "constant"\nc = 1.0\n')
    code = main(["diameter", "--config", str(cfg), "--out", str(tmp_path / "out")])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["passed"] is True
    assert (tmp_path / "out" / "diameter.csv").exists()
    assert (tmp_path / "out" / "diameter_summary.json").exists()


def test_json_config_and_flag_overrides(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"set": "interval", "mesh_density": 7, "r": 3, "seed": 1}), encoding="utf-8")
    assert main(["fekete", "--config", str(cfg), "--seed", "9", "--workers", "2", "--out", str(tmp_path / "o")]) == 0
    capsys.readouterr()
    summary = json.loads((tmp_path / "o" / "fekete_summary.json").read_text(encoding="utf-8"))
    assert summary["config"]["seed"] == 9
    assert summary["config"]["workers"] == 2


def test_settings_supply_the_output_dir(tmp_path, capsys):
    assert main(["fekete", "--config", str(write_toml(tmp_path / "c.toml", "mesh_density = 7\nr = 2\n"))]) == 0
    capsys.readouterr()
    assert (tmp_path / "out" / "fekete_r2.csv").exists()


def test_malformed_config_names_the_field(tmp_path, capsys):
    cfg = write_toml(tmp_path / "bad.toml", 'set = "interval"\nbogus = 1\n')
    assert main(["diameter", "--config", str(cfg)]) == 2
    error = json.loads(capsys.readouterr().out)
    assert error["error"] == "invalid-config"
    assert error["field"] == "bogus"


def test_invalid_toml_and_missing_file(tmp_path, capsys):
    assert main(["gram", "--config", str(write_toml(tmp_path / "x.toml", "r = [\n"))]) == 2
    assert json.loads(capsys.readouterr().out)["field"] == "config"
    assert main(["gram", "--config", str(tmp_path / "missing.toml")]) == 2
    assert json.loads(capsys.readouterr().out)["error"] == "invalid-config"
    assert main(["gram", "--config", str(write_toml(tmp_path / "x.yaml", "r: 2\n"))]) == 2
    capsys.readouterr()


def test_computation_errors_exit_with_two(tmp_path, capsys):
    cfg = write_toml(tmp_path / "c.toml", "mesh_density = 3\nr = 5\n")
    assert main(["fekete", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert json.loads(capsys.readouterr().out)["error"] == "mesh-too-small"


def test_failed_tolerance_exits_with_one(tmp_path, capsys):
    cfg = write_toml(tmp_path / "c.toml", "r_range = [19, 20]\ninstances = 1\n\n[tolerances]\nbm_rate = 1.0000001\n")
    assert main(["gram", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is False
    assert any(c["name"] == "bm_rate_r20" and not c["passed"] for c in report["checks"])


def test_parser_knows_every_command():
    parser = build_parser()
    for command in ("fekete", "diameter", "gram", "energy", "bergman", "forms", "selftest"):
        assert parser.parse_args([command]).command == command
    args = parser.parse_args(["serve", "--port", "9000"])
    assert args.port == 9000
    with pytest.raises(SystemExit):
        parser.parse_args(["plot"])


@pytest.mark.parametrize("path", sorted(RUNS.glob("*.toml")), ids=lambda p: p.name)
def test_shipped_configs_validate(path):
    ExperimentConfig.model_validate(read_config_file(path))


def test_missing_mesh_csv_names_the_field(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"mesh_csv": str(tmp_path / "nowhere.csv"), "r": 2}), encoding="utf-8")
    assert main(["fekete", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    error = json.loads(capsys.readouterr().out)
    assert error["error"] == "invalid-config"
    assert error["field"] == "mesh_csv"


def test_non_numeric_mesh_cell_names_the_field(tmp_path, capsys):
    mesh = tmp_path / "mesh.csv"
    mesh.write_text("re_1,im_1\n0.5,0\nabc,0\n", encoding="utf-8")
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"mesh_csv": str(mesh), "r": 1}), encoding="utf-8")
    assert main(["fekete", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    error = json.loads(capsys.readouterr().out)
    assert error["field"] == "mesh_csv"
    assert "abc" in error["detail"]


def test_unexpected_failures_still_exit_with_two(tmp_path, capsys, monkeypatch):
    def explode(*args, **kwargs):
        raise ZeroDivisionError("boom")

    monkeypatch.setattr("app.cli.execute", explode)
    assert main(["gram", "--out", str(tmp_path)]) == 2
    error = json.loads(capsys.readouterr().out)
    assert error["error"] == "internal-error"
    assert "ZeroDivisionError" in error["detail"]
