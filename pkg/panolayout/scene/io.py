"""
Scene File I/O

JSON files for layouts, boundary observations, reconstructions and dataset
manifests. Keys are sorted and floats written with their exact repr so a
rerun reproduces every file byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from loguru import logger

from panolayout.exceptions import (
    InvalidLayoutError,
    LayoutParseError,
    ObservationParseError,
    PanoLayoutError,
)
from panolayout.scene.layout import Layout
from panolayout.scene.render import BoundaryObservation

PathLike = Union[str, Path]

MANIFEST_NAME = "manifest.json"


def dumps(data: Dict[str, Any]) -> str:
    """Deterministic JSON text (sorted keys, exact floats, trailing newline)."""
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: PathLike, data: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(data), encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def _read_json(path: PathLike, error_cls) -> Dict[str, Any]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise error_cls(str(path), f"invalid JSON: {e.msg} at line {e.lineno}") from e
    if not isinstance(data, dict):
        raise error_cls(str(path), "top level must be an object")
    return data


# =============================================================================
# Layouts
# =============================================================================

def save_layout(path: PathLike, layout: Layout, config: Optional[Dict[str, Any]] = None) -> Path:
    data = layout.to_dict()
    if config is not None:
        data["config"] = config
    return write_json(path, data)


def load_layout(path: PathLike) -> Layout:
    """
    Read a layout file.

    Raises:
        LayoutParseError: On malformed JSON, missing fields or an invalid polygon.
        FileNotFoundError: If the file does not exist.
    """
    data = _read_json(path, LayoutParseError)
    missing = [k for k in ("vertices", "h_c", "h_f") if k not in data]
    if missing:
        raise LayoutParseError(str(path), f"missing fields {missing}")
    try:
        return Layout.from_dict(data)
    except (InvalidLayoutError, TypeError, ValueError) as e:
        raise LayoutParseError(str(path), str(e)) from e


# =============================================================================
# Observations
# =============================================================================

def save_observation(
    path: PathLike,
    obs: BoundaryObservation,
    config: Optional[Dict[str, Any]] = None,
) -> Path:
    data = obs.to_dict()
    if config is not None:
        data["config"] = config
    return write_json(path, data)


def load_observation(path: PathLike) -> BoundaryObservation:
    """
    Read an observation file.

    Raises:
        ObservationParseError: On malformed JSON, missing fields, wrong
            array lengths or out-of-range values.
    """
    data = _read_json(path, ObservationParseError)
    missing = [
        k for k in ("camera", "theta_ceiling", "theta_floor", "corner_prob") if k not in data
    ]
    if missing:
        raise ObservationParseError(str(path), f"missing fields {missing}")
    try:
        return BoundaryObservation.from_dict(data)
    except (PanoLayoutError, KeyError, TypeError, ValueError) as e:
        raise ObservationParseError(str(path), str(e)) from e


# =============================================================================
# Reconstructions
# =============================================================================

def save_solution(
    layout_path: PathLike,
    solution,
    config: Optional[Dict[str, Any]] = None,
    diagnostics_path: Optional[PathLike] = None,
) -> Path:
    """
    Write a reconstructed layout (same schema as ground truth) and, next to
    it, its diagnostics as ``<stem>.diagnostics.json`` unless a path is given.
    """
    layout_path = Path(layout_path)
    save_layout(layout_path, solution.layout, config)
    if diagnostics_path is None:
        diagnostics_path = layout_path.with_name(f"{layout_path.stem}.diagnostics.json")
    diagnostics = solution.diagnostics.to_dict()
    if config is not None:
        diagnostics["config"] = config
    return write_json(diagnostics_path, diagnostics)


# =============================================================================
# Manifests
# =============================================================================

@dataclass(frozen=True)
class ManifestEntry:
    """One layout of a generated dataset."""

    index: int
    path: Path
    seed: List[int]
    n_walls: int
    n_poses: int


def layout_filename(index: int) -> str:
    return f"layout_{index:04d}.json"


def write_manifest(
    directory: PathLike,
    entries: List[ManifestEntry],
    config: Optional[Dict[str, Any]] = None,
) -> Path:
    directory = Path(directory)
    data: Dict[str, Any] = {
        "layouts": [
            {
                "index": e.index,
                "path": Path(e.path).name,
                "seed": list(e.seed),
                "n_walls": e.n_walls,
                "n_poses": e.n_poses,
            }
            for e in entries
        ],
    }
    if config is not None:
        data["config"] = config
    return write_json(directory / MANIFEST_NAME, data)


def read_manifest(path: PathLike) -> List[ManifestEntry]:
    """
    Read a manifest; layout paths are resolved relative to its directory.

    Accepts the manifest file itself or the directory holding it.
    """
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    data = _read_json(path, LayoutParseError)
    try:
        return [
            ManifestEntry(
                index=int(item["index"]),
                path=path.parent / item["path"],
                seed=[int(s) for s in item["seed"]],
                n_walls=int(item["n_walls"]),
                n_poses=int(item.get("n_poses", 1)),
            )
            for item in data["layouts"]
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise LayoutParseError(str(path), f"bad manifest entry: {e}") from e
