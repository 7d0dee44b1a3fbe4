"""
Circular Panorama Camera

Non-central circular panorama: optical centers on a horizontal circle of
radius R around the origin, one central pencil per image column looking
radially outward, and an equirectangular row <-> elevation mapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Union

import numpy as np

from panolayout.exceptions import ElevationOutOfRangeError, GeometryError
from panolayout.geometry.plucker import ProjectingRay


@dataclass(frozen=True)
class CameraRig:
    """
    Camera rig parameters.

    Attributes:
        radius: Optical-center circle radius R (meters)
        width: Image width in pixels (columns span the full 2*pi azimuth)
        height: Image height in pixels (rows span elevations pi/2 .. -pi/2)
    """

    radius: float
    width: int
    height: int

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise GeometryError(f"Camera radius must be > 0, got {self.radius}")
        if int(self.width) != self.width or self.width < 2:
            raise GeometryError(f"Image width must be an integer >= 2, got {self.width}")
        if int(self.height) != self.height or self.height < 2:
            raise GeometryError(f"Image height must be an integer >= 2, got {self.height}")
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))

    # ─── Angular mappings ──────────────────────────────────────────────────

    def azimuth(self, col: Union[int, float, np.ndarray]):
        """Column -> azimuth phi = 2*pi*col/width (phi = 0 at x = 0, eastward)."""
        return 2.0 * np.pi * np.asarray(col, dtype=np.float64) / self.width

    def elevation(self, row: Union[float, np.ndarray]):
        """Row -> elevation theta = pi*(0.5 - row/height)."""
        return np.pi * (0.5 - np.asarray(row, dtype=np.float64) / self.height)

    def row_for_elevation(self, theta: Union[float, np.ndarray]):
        """Elevation -> (real-valued) row, the inverse of :meth:`elevation`."""
        return self.height * (0.5 - np.asarray(theta, dtype=np.float64) / np.pi)

    def radians_per_row(self) -> float:
        return math.pi / self.height

    def center(self, phi: float) -> np.ndarray:
        """Optical center C(phi) on the circle."""
        return np.array([self.radius * math.cos(phi), self.radius * math.sin(phi), 0.0])

    def scaled(self, factor: float) -> "CameraRig":
        return CameraRig(radius=self.radius * factor, width=self.width, height=self.height)

    def to_dict(self) -> Dict[str, float]:
        return {"radius": self.radius, "width": self.width, "height": self.height}

    @classmethod
    def from_dict(cls, data: Dict[str, float]) -> "CameraRig":
        return cls(radius=float(data["radius"]), width=int(data["width"]), height=int(data["height"]))


def back_project(rig: CameraRig, col: int, row: float) -> ProjectingRay:
    """
    Projecting ray of pixel (col, row).

    Raises:
        GeometryError: If the column is outside the image.
        ElevationOutOfRangeError: If the row maps onto a pole or beyond.
    """
    if not 0 <= col < rig.width:
        raise GeometryError(f"Column {col} outside [0, {rig.width})")
    theta = float(rig.elevation(row))
    if not -math.pi / 2 < theta < math.pi / 2:
        raise ElevationOutOfRangeError(row, rig.height)

    phi = float(rig.azimuth(col))
    radial = np.array([math.cos(phi), math.sin(phi), 0.0])
    direction = math.cos(theta) * radial + np.array([0.0, 0.0, math.sin(theta)])
    return ProjectingRay.from_origin_direction(rig.radius * radial, direction)


def back_project_elevation(rig: CameraRig, col: int, theta: float) -> ProjectingRay:
    """Projecting ray of column ``col`` at elevation ``theta`` (radians)."""
    return back_project(rig, col, float(rig.row_for_elevation(theta)))


def project_elevation(rig: CameraRig, col: int, point_distance: float, point_height: float) -> float:
    """
    Elevation at which the pencil of column ``col`` sees a point at horizontal
    range ``point_distance`` from C(phi) and height ``point_height``.

    The pencil is central within a column, so the result does not depend on
    the column itself.
    """
    if point_distance <= 0:
        raise GeometryError(f"Point distance must be > 0, got {point_distance}")
    return math.atan2(point_height, point_distance)
