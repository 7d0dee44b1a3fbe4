"""
Tests for the Command Line Interface
"""

import csv
import json
import math

import pytest
from click.testing import CliRunner

from panolayout.cli import BenchTask, cli, run_bench_task
from panolayout.config import PanoLayoutConfig
from panolayout.exceptions import (
    EXIT_CONFIG,
    EXIT_DEGENERATE,
    EXIT_METRIC,
    EXIT_PARSE,
    EXIT_SCENE,
    EXIT_UNEXPECTED,
    DegenerateConfigurationError,
)
from panolayout.scene.io import load_layout, load_observation, read_manifest, save_layout


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def square_file(tmp_path, square_room):
    return save_layout(tmp_path / "square.json", square_room)


@pytest.fixture
def hexagon_file(tmp_path, hexagon_room):
    return save_layout(tmp_path / "hexagon.json", hexagon_room)


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)


def test_help_documents_exit_codes_and_columns(runner):
    result = invoke(runner, "--help")
    assert result.exit_code == 0
    assert "Exit codes" in result.output
    result = invoke(runner, "evaluate", "--help")
    assert "iou3d_u2s" in result.output


def test_generate(runner, tmp_path):
    out = tmp_path / "data"
    result = invoke(runner, "generate", "--n", 2, "--walls", "4:6", "--seed", 3, "--poses", 2, "--out", out)
    assert result.exit_code == 0, result.output
    entries = read_manifest(out)
    assert [e.index for e in entries] == [0, 1]
    assert all(e.n_walls in (4, 6) for e in entries)
    data = json.loads((out / "layout_0000.json").read_text())
    assert data["config"]["dataset"]["seed"] == 3

    again = tmp_path / "again"
    invoke(runner, "generate", "--n", 2, "--walls", "4:6", "--seed", 3, "--poses", 2, "--out", again)
    assert (again / "layout_0001.json").read_bytes() == (out / "layout_0001.json").read_bytes()


def test_generate_occluded(runner, tmp_path):
    out = tmp_path / "occluded"
    result = invoke(runner, "generate", "--n", 1, "--walls", "6:8", "--seed", 3, "--poses", 1, "--occluded", "--out", out)
    assert result.exit_code == 0, result.output
    data = json.loads((out / "layout_0000.json").read_text())
    assert data["config"]["dataset"]["occluded"] is True
    assert not load_layout(out / "layout_0000.json").origin_in_kernel()


def test_generate_rejects_bad_walls(runner, tmp_path):
    result = runner.invoke(cli, ["generate", "--walls", "6-10", "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_render_square(runner, tmp_path, square_file):
    obs_path = tmp_path / "square.obs.json"
    result = invoke(runner, "render", square_file, "--radius", 0.5, "--width", 1024, "--height", 512,
                    "--out", obs_path)
    assert result.exit_code == 0, result.output
    obs = load_observation(obs_path)
    assert obs.theta_ceiling[0] == pytest.approx(math.pi / 4)

    zero = tmp_path / "zero.obs.json"
    invoke(runner, "render", square_file, "--noise-sigma", 0, "--seed", 9, "--out", zero)
    assert json.loads(zero.read_text())["theta_floor"] == json.loads(obs_path.read_text())["theta_floor"]


def test_render_rejects_camera_outside(runner, tmp_path, square_file):
    result = runner.invoke(cli, ["render", str(square_file), "--radius", "2.5", "--out", str(tmp_path / "x.json")])
    assert result.exit_code == EXIT_SCENE
    assert "wall" in result.output


def test_solve_and_evaluate(runner, tmp_path, hexagon_file):
    obs_path = tmp_path / "hex.obs.json"
    invoke(runner, "render", hexagon_file, "--out", obs_path)

    pred_path = tmp_path / "hex.layout.json"
    plot_path = tmp_path / "hex.svg"
    result = invoke(runner, "solve", obs_path, "--mode", "atlanta", "--out", pred_path, "--plot", plot_path)
    assert result.exit_code == 0, result.output
    pred = load_layout(pred_path)
    assert pred.n_walls == 6
    assert (tmp_path / "hex.layout.diagnostics.json").exists()
    assert plot_path.read_text().startswith("<?xml")

    csv_path = tmp_path / "eval.csv"
    result = invoke(runner, "evaluate", pred_path, hexagon_file, "--out", csv_path, "--plot", tmp_path / "e.svg")
    assert result.exit_code == 0, result.output
    assert "iou3d=" in result.output
    with open(csv_path, newline="") as f:
        row = next(csv.DictReader(f))
    assert float(row["iou3d"]) > 0.9999
    assert row["status"] == "ok"
    assert "iou3d,iou3d_u2s,ce,cen,scale_star" in result.output
    sidecar = json.loads((tmp_path / "eval.config.json").read_text())
    assert sidecar["table"] == "eval.csv"
    assert sidecar["config"]["camera"]["radius"] == 0.5


def test_solve_truncated_observation(runner, tmp_path):
    broken = tmp_path / "broken.obs.json"
    broken.write_text('{"camera": {"radius": 0.5')
    result = runner.invoke(cli, ["solve", str(broken), "--out", str(tmp_path / "p.json")])
    assert result.exit_code == EXIT_PARSE


def test_evaluate_corner_mismatch(runner, tmp_path, square_file, hexagon_file):
    result = runner.invoke(cli, ["evaluate", str(square_file), str(hexagon_file), "--out", str(tmp_path / "e.csv")])
    assert result.exit_code == EXIT_METRIC


def test_missing_config_file(runner, tmp_path):
    result = runner.invoke(cli, ["--config", str(tmp_path / "absent.yaml"), "info"])
    assert result.exit_code == EXIT_CONFIG


def test_config_init_and_show(runner, tmp_path):
    path = tmp_path / "pl.yaml"
    assert invoke(runner, "config", "init", path).exit_code == 0
    assert PanoLayoutConfig.from_file(path).camera.radius == 0.5
    assert runner.invoke(cli, ["config", "init", str(path)]).exit_code == 2
    result = invoke(runner, "--config", path, "config", "show")
    assert "rank_tol" in result.output


def test_info(runner):
    result = invoke(runner, "info")
    assert result.exit_code == 0
    assert "numpy" in result.output


def test_batch_evaluate_and_bench(runner, tmp_path):
    data = tmp_path / "data"
    invoke(runner, "generate", "--n", 2, "--walls", "4:4", "--poses", 1, "--seed", 1, "--out", data)

    table = tmp_path / "bench.csv"
    result = invoke(runner, "bench", data, "--sigma", 0, "--out", table)
    assert result.exit_code == 0, result.output
    with open(table, newline="") as f:
        rows = list(csv.DictReader(f))
    scenes = [r for r in rows if r["scene"].startswith("layout_")]
    assert len(scenes) == 2
    assert all(r["status"] == "ok" for r in scenes)
    assert all(float(r["iou3d"]) > 0.999 for r in scenes)
    assert rows[len(scenes)]["scene"] == "mean"
    assert rows[len(scenes)]["status"] == "ok=2 failed=0"
    assert (tmp_path / "bench.config.json").exists()

    # predictions named like the ground truth files
    pred_dir = tmp_path / "pred"
    pred_dir.mkdir()
    for entry in read_manifest(data):
        save_layout(pred_dir / entry.path.name, load_layout(entry.path).scaled(0.9))
    batch = tmp_path / "batch.csv"
    result = invoke(runner, "evaluate", "--manifest", data, "--pred-dir", pred_dir, "--out", batch)
    assert result.exit_code == 0, result.output
    with open(batch, newline="") as f:
        rows = list(csv.DictReader(f))
    assert float(rows[0]["scale_star"]) == pytest.approx(1 / 0.9, rel=1e-3)


def test_bench_rerun_is_byte_identical(runner, tmp_path):
    data = tmp_path / "data"
    invoke(runner, "generate", "--n", 2, "--walls", "4:6", "--poses", 1, "--seed", 2, "--out", data)

    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    for out in (first, second):
        result = invoke(runner, "bench", data, "--sigma", 0.5, "--mode", "manhattan", "--out", out)
        assert result.exit_code == 0, result.output
    assert first.read_bytes() == second.read_bytes()
    configs = [
        json.loads((tmp_path / name).read_text())["config"]
        for name in ("first.config.json", "second.config.json")
    ]
    assert configs[0] == configs[1]
    assert configs[0]["bench"]["sigma_grid"] == [0.5]


def test_bench_task_reports_failures(square_room):
    task = BenchTask(
        scene="tiny",
        index=0,
        layout=square_room.to_dict(),
        pose=0,
        sigma=0.0,
        sigma_index=0,
        mode="manhattan",
        config=PanoLayoutConfig(camera={"radius": 3.0}).to_dict(),
    )
    result = run_bench_task(task)
    assert not result.ok
    assert "Camera circle" in result.error


@pytest.mark.parametrize(
    "error, code, text",
    [
        (DegenerateConfigurationError("wall_0", 1e-12, 1e-10, 2), EXIT_DEGENERATE, "radius"),
        (RuntimeError("boom"), EXIT_UNEXPECTED, "boom"),
    ],
)
def test_solve_error_exit_codes(runner, tmp_path, square_file, mocker, error, code, text):
    obs_path = tmp_path / "square.obs.json"
    invoke(runner, "render", square_file, "--out", obs_path)
    mocker.patch("panolayout.solvers.pipeline.reconstruct_layout", side_effect=error)
    result = runner.invoke(cli, ["solve", str(obs_path), "--out", str(tmp_path / "p.json")])
    assert result.exit_code == code
    assert text in result.output
