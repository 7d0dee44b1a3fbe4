"""
Boundary Rendering

Synthetic stand-in for a learned boundary extractor: per-column ceiling and
floor boundary elevations plus a wall-wall corner indicator, rendered by ray
casting from the camera circle, and a Gaussian noise model on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.ndimage import convolve1d

from panolayout.constants import CORNER_BLUR_HALF_WIDTH, ELEVATION_EPS
from panolayout.exceptions import InvalidLayoutError, VisibilityError
from panolayout.geometry.camera import CameraRig
from panolayout.scene.layout import Layout
from panolayout.scene.visibility import cast_rays


@dataclass(frozen=True, eq=False)
class BoundaryObservation:
    """
    Per-column boundary signal of one panorama.

    Attributes:
        camera: Rig that produced the observation
        theta_ceiling: Ceiling boundary elevation per column (radians, > 0)
        theta_floor: Floor boundary elevation per column (radians, < 0)
        corner_prob: Wall-wall corner probability per column, in [0, 1]
    """

    camera: CameraRig
    theta_ceiling: np.ndarray
    theta_floor: np.ndarray
    corner_prob: np.ndarray

    def __post_init__(self):
        width = self.camera.width
        arrays = {}
        for name in ("theta_ceiling", "theta_floor", "corner_prob"):
            arr = np.array(getattr(self, name), dtype=np.float64).reshape(-1)
            if arr.shape[0] != width:
                raise InvalidLayoutError(f"{name} has length {arr.shape[0]}, expected {width}")
            if not np.all(np.isfinite(arr)):
                raise InvalidLayoutError(f"{name} has non-finite values")
            arr.setflags(write=False)
            arrays[name] = arr
        if not (np.all(arrays["theta_ceiling"] > 0) and np.all(arrays["theta_floor"] < 0)):
            raise InvalidLayoutError("need theta_ceiling > 0 > theta_floor in every column")
        if np.any(arrays["theta_ceiling"] >= np.pi / 2) or np.any(arrays["theta_floor"] <= -np.pi / 2):
            raise InvalidLayoutError("boundary elevations must stay inside (-pi/2, pi/2)")
        if np.any(arrays["corner_prob"] < 0) or np.any(arrays["corner_prob"] > 1):
            raise InvalidLayoutError("corner_prob must lie in [0, 1]")
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)

    @property
    def width(self) -> int:
        return self.camera.width

    def to_dict(self) -> Dict[str, Any]:
        return {
            "camera": self.camera.to_dict(),
            "theta_ceiling": [float(x) for x in self.theta_ceiling],
            "theta_floor": [float(x) for x in self.theta_floor],
            "corner_prob": [float(x) for x in self.corner_prob],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoundaryObservation":
        return cls(
            camera=CameraRig.from_dict(data["camera"]),
            theta_ceiling=data["theta_ceiling"],
            theta_floor=data["theta_floor"],
            corner_prob=data["corner_prob"],
        )


def column_visibility(layout: Layout, rig: CameraRig) -> Tuple[np.ndarray, np.ndarray]:
    """
    Visible wall index and horizontal range t for every image column.

    Each column's pencil sits at C(phi) and looks radially outward.
    """
    phi = rig.azimuth(np.arange(rig.width))
    origins = rig.radius * np.column_stack([np.cos(phi), np.sin(phi)])
    index, t = cast_rays(layout, origins, phi)
    missing = np.flatnonzero(~np.isfinite(t))
    if missing.size:
        col = int(missing[0])
        raise VisibilityError(origins[col], float(phi[col]))
    return index, t


def corner_indicator(wall_index: np.ndarray) -> np.ndarray:
    """1 where the visible wall differs from the previous column (circularly)."""
    return (wall_index != np.roll(wall_index, 1)).astype(np.float64)


def render_boundaries(layout: Layout, rig: CameraRig) -> BoundaryObservation:
    """
    Render the noise-free boundary observation of ``layout`` seen by ``rig``.

    Raises:
        CameraPlacementError: If the camera circle is not strictly inside.
    """
    layout.check_camera(rig.radius)
    index, t = column_visibility(layout, rig)
    obs = BoundaryObservation(
        camera=rig,
        theta_ceiling=np.arctan2(layout.h_c, t),
        theta_floor=np.arctan2(layout.h_f, t),
        corner_prob=corner_indicator(index),
    )
    logger.debug(
        f"Rendered {layout.n_walls}-wall layout at {rig.width}x{rig.height}, "
        f"{int(obs.corner_prob.sum())} corner columns"
    )
    return obs


def _triangular_kernel(half_width: int) -> np.ndarray:
    k = np.arange(-half_width, half_width + 1)
    return 1.0 - np.abs(k) / (half_width + 1.0)


def add_noise(
    obs: BoundaryObservation,
    sigma_px: float,
    seed: Union[int, Sequence[int]],
    blur_corners: bool = False,
) -> BoundaryObservation:
    """
    Add Gaussian boundary noise of ``sigma_px`` rows, converted to radians.

    Elevations are clamped so theta_ceiling > 0 > theta_floor still holds.
    With ``blur_corners`` the corner indicator is softened by a triangular
    kernel of half-width 2 columns.
    """
    if sigma_px < 0:
        raise ValueError(f"sigma_px must be >= 0, got {sigma_px}")

    theta_c = np.array(obs.theta_ceiling)
    theta_f = np.array(obs.theta_floor)
    corner = np.array(obs.corner_prob)

    if sigma_px > 0:
        rng = np.random.default_rng(seed)
        sigma_rad = sigma_px * obs.camera.radians_per_row()
        theta_c = theta_c + rng.normal(0.0, sigma_rad, size=theta_c.shape)
        theta_f = theta_f + rng.normal(0.0, sigma_rad, size=theta_f.shape)
        theta_c = np.clip(theta_c, ELEVATION_EPS, np.pi / 2 - ELEVATION_EPS)
        theta_f = np.clip(theta_f, -np.pi / 2 + ELEVATION_EPS, -ELEVATION_EPS)

    if blur_corners:
        corner = convolve1d(corner, _triangular_kernel(CORNER_BLUR_HALF_WIDTH), mode="wrap")
        corner = np.clip(corner, 0.0, 1.0)

    return BoundaryObservation(
        camera=obs.camera,
        theta_ceiling=theta_c,
        theta_floor=theta_f,
        corner_prob=corner,
    )
