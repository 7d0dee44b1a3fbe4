"""
Tests for Configuration
"""

import json

import pytest
import yaml

from panolayout.config import PanoLayoutConfig, env_overrides, load_config
from panolayout.exceptions import ConfigFileNotFoundError, ConfigParseError
from panolayout.solvers.solution import SolverOptions


def test_default_config():
    config = PanoLayoutConfig()
    assert config.camera.radius == 0.5
    assert config.camera.width == 1024
    assert config.camera.height == 512
    assert config.noise.sigma_px == 0.0
    assert config.dataset.mode == "manhattan"
    assert config.bench.sigma_grid == [0.0, 0.5, 1.0]


def test_config_validation():
    config = PanoLayoutConfig()

    # Valid update
    config.camera.radius = 0.25
    assert config.camera.radius == 0.25

    # Invalid updates (should raise error)
    with pytest.raises(ValueError):
        config.camera.radius = 0.0
    with pytest.raises(ValueError):
        config.dataset.mode = "cubic"
    with pytest.raises(ValueError):
        PanoLayoutConfig(bench={"sigma_grid": [-1.0]})
    with pytest.raises(ValueError):
        PanoLayoutConfig(solver={"unknown_option": 1})


def test_yaml_round_trip(tmp_path):
    config = PanoLayoutConfig(camera={"radius": 0.3}, solver={"max_rays_per_line": 32})
    path = tmp_path / "panolayout.yaml"
    config.to_file(path)

    loaded = PanoLayoutConfig.from_file(path)
    assert loaded.camera.radius == 0.3
    assert loaded.solver.max_rays_per_line == 32
    assert loaded.to_dict() == config.to_dict()


def test_json_file_and_merge(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"noise": {"sigma_px": 1.5}}))
    config = load_config(path, environ={})
    assert config.noise.sigma_px == 1.5
    # untouched sections keep defaults
    assert config.camera.width == 1024


def test_missing_and_broken_files(tmp_path):
    with pytest.raises(ConfigFileNotFoundError):
        load_config(tmp_path / "absent.yaml", environ={})

    broken = tmp_path / "broken.yaml"
    broken.write_text("camera: [radius\n")
    with pytest.raises(ConfigParseError):
        load_config(broken, environ={})

    scalar = tmp_path / "scalar.yaml"
    scalar.write_text(yaml.safe_dump(3))
    with pytest.raises(ConfigParseError):
        load_config(scalar, environ={})


def test_environment_overrides():
    environ = {
        "PANOLAYOUT_SOLVER__RANK_TOL": "1e-9",
        "PANOLAYOUT_NOISE__BLUR_CORNERS": "true",
        "PANOLAYOUT_BENCH__SIGMA_GRID": "0,2",
        "PANOLAYOUT_NOT__A_KEY": "1",
        "OTHER_CAMERA__RADIUS": "3",
    }
    config = load_config(environ=environ)
    assert config.solver.rank_tol == 1e-9
    assert config.noise.blur_corners is True
    assert config.bench.sigma_grid == [0.0, 2.0]
    assert config.camera.radius == 0.5


def test_file_beats_environment(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump({"camera": {"radius": 0.2}}))
    config = load_config(path, environ={"PANOLAYOUT_CAMERA__RADIUS": "0.4"})
    assert config.camera.radius == 0.2


def test_env_overrides_ignores_sections():
    defaults = PanoLayoutConfig().to_dict()
    assert env_overrides(defaults, {"PANOLAYOUT_CAMERA": "x"}) == {}


def test_solver_options_from_config():
    config = PanoLayoutConfig(solver={"rank_tol": 1e-11, "rank_tol_noisy": 1e-3})
    assert SolverOptions.from_config(config).rank_tol == 1e-11
    assert SolverOptions.from_config(config, noisy=True).rank_tol == 1e-3
    assert SolverOptions.from_config(config).min_separation == config.segmentation.min_separation
