"""
PanoLayout Configuration Module

Handles all configuration settings: camera rig, noise model, dataset
generation, solver tolerances, segmentation, metrics and benchmarking.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
try:
    from pydantic import BaseModel, Field, field_validator
    HAS_V2 = True
except ImportError:
    from pydantic import BaseModel, Field, validator as field_validator
    HAS_V2 = False

from panolayout import constants as C
from panolayout.exceptions import ConfigFileNotFoundError, ConfigParseError


if HAS_V2:
    _MODEL_CONFIG = {"validate_assignment": True, "extra": "forbid"}


class _Section(BaseModel):
    if HAS_V2:
        model_config = _MODEL_CONFIG
    else:
        class Config:
            validate_assignment = True
            extra = "forbid"


class CameraConfig(_Section):
    """Non-central circular panorama rig."""

    radius: float = Field(default=C.DEFAULT_RADIUS, gt=0.0, le=10.0)
    width: int = Field(default=C.DEFAULT_WIDTH, ge=2)
    height: int = Field(default=C.DEFAULT_HEIGHT, ge=2)


class NoiseConfig(_Section):
    """Boundary noise model."""

    sigma_px: float = Field(default=0.0, ge=0.0, le=50.0)
    seed: int = Field(default=0, ge=0)
    blur_corners: bool = False


class DatasetConfig(_Section):
    """Synthetic layout generation."""

    n_layouts: int = Field(default=650, ge=1)
    walls_min: int = Field(default=6, ge=3, le=64)
    walls_max: int = Field(default=10, ge=3, le=64)
    mode: str = Field(default="manhattan", pattern="^(manhattan|atlanta)$")
    seed: int = Field(default=7, ge=0)
    poses_per_layout: int = Field(default=C.DEFAULT_POSES_PER_LAYOUT, ge=1, le=32)

    # Heights relative to the camera plane (meters)
    ceiling_min: float = Field(default=0.8, gt=0.0)
    ceiling_max: float = Field(default=1.6, gt=0.0)
    floor_min: float = Field(default=-1.8, lt=0.0)
    floor_max: float = Field(default=-1.2, lt=0.0)

    # Room half-extent / radius range (meters)
    size_min: float = Field(default=2.0, gt=0.0)
    size_max: float = Field(default=5.0, gt=0.0)

    min_wall_angle_deg: float = Field(default=C.MIN_WALL_ANGLE_DEG, gt=0.0, lt=60.0)
    min_turn_angle_deg: float = Field(default=C.MIN_TURN_ANGLE_DEG, gt=0.0, lt=90.0)
    clearance_margin: float = Field(default=C.CAMERA_CLEARANCE_MARGIN, ge=0.0)

    # Camera outside the kernel, so one wall hides behind a corner
    occluded: bool = False


class SolverConfig(_Section):
    """Tolerances and sampling for the geometric solvers."""

    rank_tol: float = Field(default=C.RANK_TOL_NOISE_FREE, gt=0.0, lt=1.0)
    rank_tol_noisy: float = Field(default=C.RANK_TOL_NOISY, gt=0.0, lt=1.0)
    lambda_tol: float = Field(default=C.LAMBDA_CONSISTENCY_TOL, gt=0.0)
    max_rays_per_line: int = Field(default=C.MAX_RAYS_PER_LINE, ge=3, le=4096)
    edge_margin: int = Field(default=1, ge=0, le=16)
    parallel_tol: float = Field(default=C.PARALLEL_TOL, gt=0.0, lt=1.0)
    pinning_tol: float = Field(default=C.PINNING_TOL, gt=0.0, lt=1.0)
    bridge_occlusions: bool = True
    errors_in_variables: bool = True
    refine_iterations: int = Field(default=C.REFINE_ITERATIONS, ge=0, le=100)
    occlusion_jump: float = Field(default=C.OCCLUSION_JUMP, gt=0.0)


class SegmentationConfig(_Section):
    """Corner peak detection."""

    threshold: float = Field(default=C.CORNER_THRESHOLD, gt=0.0, lt=1.0)
    min_separation: int = Field(default=C.MIN_CORNER_SEPARATION, ge=1)


class MetricsConfig(_Section):
    """Evaluation settings."""

    scale_min: float = Field(default=C.U2S_SCALE_MIN, gt=0.0)
    scale_max: float = Field(default=C.U2S_SCALE_MAX, gt=0.0)
    scale_tol: float = Field(default=C.U2S_TOL, gt=0.0)
    grid_size: int = Field(default=C.U2S_GRID_SIZE, ge=3, le=1001)


class BenchConfig(_Section):
    """Monte-Carlo benchmark settings."""

    sigma_grid: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0])
    workers: int = Field(default=1, ge=1, le=64)

    @field_validator("sigma_grid")
    def _sigmas_non_negative(cls, value):
        if not value:
            raise ValueError("sigma_grid must not be empty")
        if any(s < 0 for s in value):
            raise ValueError("sigma_grid values must be >= 0")
        return value


class PanoLayoutConfig(_Section):
    """Main configuration class for PanoLayout."""

    # Sub-configurations
    camera: CameraConfig = Field(default_factory=CameraConfig)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    segmentation: SegmentationConfig = Field(default_factory=SegmentationConfig)
    metrics: MetricsConfig = Field(default_factory=MetricsConfig)
    bench: BenchConfig = Field(default_factory=BenchConfig)

    # General settings
    debug_mode: bool = False
    output_directory: str = "panolayout_out"

    def get_output_path(self) -> Path:
        """Get the output directory path, creating it if necessary."""
        path = Path(self.output_directory).expanduser()
        path.mkdir(parents=True, exist_ok=True)
        return path

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "PanoLayoutConfig":
        """Load configuration from a file (YAML or JSON)."""
        return cls(**read_config_data(path))

    def to_file(self, path: Union[str, Path]) -> None:
        """Save configuration to a file (YAML or JSON)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)

        data = self.to_dict()

        with open(path, "w", encoding="utf-8") as f:
            if path.suffix in (".yaml", ".yml"):
                yaml.dump(data, f, default_flow_style=False, sort_keys=False)
            elif path.suffix == ".json":
                json.dump(data, f, indent=2)
            else:
                raise ConfigParseError(str(path), f"unsupported format {path.suffix}")

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        try:
            return self.model_dump()
        except AttributeError:
            return self.dict()

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PanoLayoutConfig":
        """Create configuration from dictionary."""
        return cls(**data)

    def merge_with(self, other: Union["PanoLayoutConfig", Dict[str, Any]]) -> "PanoLayoutConfig":
        """Merge this configuration with another, other takes precedence."""
        other_dict = other if isinstance(other, dict) else other.to_dict()
        merged = deep_merge(self.to_dict(), other_dict)
        return PanoLayoutConfig(**merged)


def read_config_data(path: Union[str, Path]) -> Dict[str, Any]:
    """Read the raw mapping stored in a YAML or JSON config file."""
    path = Path(path)

    if not path.exists():
        raise ConfigFileNotFoundError(str(path))

    try:
        with open(path, "r", encoding="utf-8") as f:
            if path.suffix in (".yaml", ".yml"):
                data = yaml.safe_load(f) or {}
            elif path.suffix == ".json":
                data = json.load(f)
            else:
                raise ConfigParseError(str(path), f"unsupported format {path.suffix}")
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigParseError(str(path), str(e)) from e

    if not isinstance(data, dict):
        raise ConfigParseError(str(path), "top level must be a mapping")
    return data


def deep_merge(base: dict, override: dict) -> dict:
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = value
    return result


def _coerce(raw: str, current: Any) -> Any:
    if isinstance(current, bool):
        return raw.lower() in ("true", "1", "yes")
    if isinstance(current, int):
        return int(raw)
    if isinstance(current, float):
        return float(raw)
    if isinstance(current, list):
        return [float(x) for x in raw.split(",") if x.strip()]
    return raw


def env_overrides(
    defaults: Dict[str, Any],
    environ: Optional[Dict[str, str]] = None,
    env_prefix: str = "PANOLAYOUT_",
) -> Dict[str, Any]:
    """
    Collect overrides such as PANOLAYOUT_SOLVER__RANK_TOL=1e-9.

    Unknown keys are ignored; values are coerced to the type of the default.
    """
    environ = os.environ if environ is None else environ
    overrides: Dict[str, Any] = {}
    for key, raw in environ.items():
        if not key.startswith(env_prefix):
            continue
        parts = key[len(env_prefix):].lower().split("__")
        node: Any = defaults
        for part in parts:
            if not isinstance(node, dict) or part not in node:
                node = None
                break
            node = node[part]
        if node is None or isinstance(node, dict):
            continue
        target = overrides
        for part in parts[:-1]:
            target = target.setdefault(part, {})
        target[parts[-1]] = _coerce(raw, node)
    return overrides


# Default configuration instance
DEFAULT_CONFIG = PanoLayoutConfig()


def load_config(
    config_path: Optional[Union[str, Path]] = None,
    env_prefix: str = "PANOLAYOUT_",
    environ: Optional[Dict[str, str]] = None,
) -> PanoLayoutConfig:
    """
    Load configuration from multiple sources with priority:
    1. Explicit config file (if provided)
    2. Environment variables
    3. Default values
    """
    config = PanoLayoutConfig()

    overrides = env_overrides(config.to_dict(), environ, env_prefix)
    if overrides:
        config = config.merge_with(overrides)

    if config_path:
        config = config.merge_with(read_config_data(config_path))

    return config
