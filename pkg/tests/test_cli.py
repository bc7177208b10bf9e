import json
import subprocess
import sys
from pathlib import Path

import pytest

from elab.experiment import io
from elab.experiment.cli import main
from elab.experiment.config import ExperimentConfig, save_config

ROOT = Path(__file__).resolve().parent.parent
DEFAULT = str(ROOT / "config" / "default.json")


@pytest.fixture
def tiny_config(tmp_path):
    cfg = ExperimentConfig(problems=(2,), dimension=2, repetitions=10, translation_limits=(50,), vectors_per_limit=1,
                           scaling_exponents=(2,), rotations=1, objective_offsets=(100,),
                           objective_exponents=(3,), out_dir=str(tmp_path / "run"))
    path = tmp_path / "tiny.json"
    save_config(cfg, path)
    return cfg, str(path)


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "run-all" in capsys.readouterr().out
    assert main(["features", "--help"]) == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "elab", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "usage" in proc.stdout


@pytest.mark.parametrize("argv", [["run-all", "--colour"], [], ["bogus"], ["run-all", "--problems", "a,b"],
                                  ["run-all", "--reps", "x"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_config_names_path(tmp_path, capsys):
    missing = tmp_path / "missing.json"
    assert main(["run-all", "--config", str(missing)]) == 1
    assert str(missing) in capsys.readouterr().err


def test_invalid_override_is_config_error(tmp_path, capsys):
    assert main(["instances", "--reps", "3", "--out-dir", str(tmp_path)]) == 1
    assert main(["instances", "--problems", "9", "--out-dir", str(tmp_path)]) == 1


def test_instances_default_config(tmp_path):
    assert main(["instances", "--config", DEFAULT, "--problems", "1", "--out-dir", str(tmp_path)]) == 0
    descs = json.loads((tmp_path / "instances.json").read_text())
    assert len(descs) == 267
    assert (tmp_path / "manifest.json").exists()


def test_downstream_without_features_is_runtime_error(tiny_config, capsys):
    _, path = tiny_config
    assert main(["compare", "--config", path]) == 2
    assert "features.csv" in capsys.readouterr().err


def test_stage_by_stage_matches_run_all(tiny_config, tmp_path):
    cfg, path = tiny_config
    for cmd in ("instances", "sample", "features", "compare", "sensitivity", "project", "plot"):
        assert main([cmd, "--config", path]) == 0, cmd
    staged = Path(cfg.out_dir)
    assert main(["run-all", "--config", path, "--out-dir", str(tmp_path / "all"), "--wide"]) == 0
    for name in ("features.csv", "comparison.csv", "sensitivity.csv", "projection.csv", "fig7_heatmap.svg"):
        assert io.sha256(staged / name) == io.sha256(tmp_path / "all" / name), name
    assert (tmp_path / "all" / "features_wide.csv").exists()
    # a resumed run-all reuses everything and reproduces the outputs
    assert main(["run-all", "--config", path, "--out-dir", str(tmp_path / "all")]) == 0
    assert io.sha256(staged / "comparison.csv") == io.sha256(tmp_path / "all" / "comparison.csv")


def test_threads_flag(tiny_config, tmp_path):
    _, path = tiny_config
    assert main(["features", "--config", path, "--threads", "0", "--out-dir", str(tmp_path / "x")]) == 1
