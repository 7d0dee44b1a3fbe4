"""
Layout

Ground-truth (or reconstructed) room layout: a counter-clockwise floor-plan
polygon in the camera frame plus one ceiling and one floor height.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from shapely.geometry import LinearRing, LineString, Point, Polygon

from panolayout.exceptions import CameraPlacementError, InvalidLayoutError
from panolayout.geometry.wall import Wall


def signed_area(vertices: np.ndarray) -> float:
    """Shoelace area, positive for counter-clockwise vertex order."""
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def cross2(a: np.ndarray, b: np.ndarray):
    """2D cross product (broadcasting over leading axes)."""
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


@dataclass(frozen=True, eq=False)
class Layout:
    """
    Floor-plan polygon with shared ceiling and floor heights.

    Attributes:
        vertices: (N, 2) counter-clockwise polygon vertices, meters
        h_c: Ceiling height above the camera plane (> 0)
        h_f: Floor height relative to the camera plane (< 0)
        camera_poses: Optional extra camera placements (pose 0 is the origin)
    """

    vertices: np.ndarray
    h_c: float
    h_f: float
    camera_poses: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=np.float64)
        if verts.ndim != 2 or verts.shape[1] != 2:
            raise InvalidLayoutError(f"vertices must be an (N, 2) array, got shape {verts.shape}")
        if verts.shape[0] < 3:
            raise InvalidLayoutError(f"need at least 3 vertices, got {verts.shape[0]}")
        if not np.all(np.isfinite(verts)):
            raise InvalidLayoutError("vertices must be finite")
        if not LinearRing(verts).is_simple:
            raise InvalidLayoutError("polygon is self-intersecting")
        if signed_area(verts) <= 0:
            raise InvalidLayoutError("vertices must be in counter-clockwise order")
        h_c, h_f = float(self.h_c), float(self.h_f)
        if not (math.isfinite(h_c) and math.isfinite(h_f)) or not h_c > 0 > h_f:
            raise InvalidLayoutError(f"heights must satisfy h_c > 0 > h_f, got {h_c}, {h_f}")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "h_c", h_c)
        object.__setattr__(self, "h_f", h_f)
        if self.camera_poses is not None:
            poses = np.array(self.camera_poses, dtype=np.float64).reshape(-1, 2)
            poses.setflags(write=False)
            object.__setattr__(self, "camera_poses", poses)

    @classmethod
    def from_points(
        cls,
        points: Sequence[Sequence[float]],
        h_c: float,
        h_f: float,
        camera_poses: Optional[Sequence[Sequence[float]]] = None,
    ) -> "Layout":
        """Build a layout, reversing clockwise input."""
        verts = np.array(points, dtype=np.float64)
        if verts.ndim == 2 and verts.shape[0] >= 3 and signed_area(verts) < 0:
            verts = verts[::-1]
        return cls(vertices=verts, h_c=h_c, h_f=h_f, camera_poses=camera_poses)

    # ─── Shape ─────────────────────────────────────────────────────────────

    @property
    def n_walls(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def polygon(self) -> Polygon:
        return Polygon(self.vertices)

    @property
    def area(self) -> float:
        return signed_area(self.vertices)

    @property
    def room_height(self) -> float:
        return self.h_c - self.h_f

    @property
    def volume(self) -> float:
        return self.area * self.room_height

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """Edge start and end points; edge i runs from vertex i to vertex i+1."""
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def edge_lines(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Unit outward normals and offsets of the edge supporting lines.

        For a counter-clockwise polygon the interior lies to the left of each
        edge; a point p is on the interior side of edge i iff
        normals[i] . p < offsets[i].
        """
        a, b = self.edges()
        e = b - a
        length = np.linalg.norm(e, axis=1)
        # right-hand normal points out of a CCW polygon
        normals = np.stack([e[:, 1], -e[:, 0]], axis=1) / length[:, None]
        offsets = np.einsum("ij,ij->i", normals, a)
        return normals, offsets

    def walls(self) -> List[Wall]:
        """One sign-normalised :class:`Wall` per polygon edge."""
        normals, offsets = self.edge_lines()
        return [
            Wall.from_line2d(n, c, self.h_c, self.h_f) for n, c in zip(normals, offsets)
        ]

    def corners3d(self) -> np.ndarray:
        """(2N, 3) array: ceiling corners followed by floor corners."""
        n = self.n_walls
        ceiling = np.column_stack([self.vertices, np.full(n, self.h_c)])
        floor = np.column_stack([self.vertices, np.full(n, self.h_f)])
        return np.vstack([ceiling, floor])

    # ─── Camera relations ──────────────────────────────────────────────────

    def contains_origin(self) -> bool:
        return bool(self.polygon.contains(Point(0.0, 0.0)))

    def origin_in_kernel(self, margin: float = 0.0) -> bool:
        """True when the origin sees the interior side of every wall."""
        _, offsets = self.edge_lines()
        return bool(np.all(offsets > margin))

    def wall_angles(self) -> np.ndarray:
        """Signed angle each wall subtends at the origin (radians)."""
        a, b = self.edges()
        return np.arctan2(cross2(a, b), np.einsum("ij,ij->i", a, b))

    def wall_distances(self) -> np.ndarray:
        """Distance from the origin to each wall segment."""
        origin = Point(0.0, 0.0)
        a, b = self.edges()
        return np.array([LineString([p, q]).distance(origin) for p, q in zip(a, b)])

    def check_camera(self, radius: float) -> None:
        """
        Check the camera circle of ``radius`` lies strictly inside the room.

        Raises:
            CameraPlacementError: Naming the nearest violating wall.
        """
        distances = self.wall_distances()
        wall = int(np.argmin(distances))
        if not self.contains_origin() or distances[wall] <= radius:
            raise CameraPlacementError(wall, float(distances[wall]), radius)

    # ─── Transforms ────────────────────────────────────────────────────────

    def scaled(self, factor: float) -> "Layout":
        """Similarity scaling about the camera origin (footprint and heights)."""
        poses = None if self.camera_poses is None else self.camera_poses * factor
        return Layout(self.vertices * factor, self.h_c * factor, self.h_f * factor, poses)

    def translated(self, offset: Sequence[float]) -> "Layout":
        off = np.asarray(offset, dtype=np.float64)
        poses = None if self.camera_poses is None else self.camera_poses + off
        return Layout(self.vertices + off, self.h_c, self.h_f, poses)

    def rotated(self, angle: float) -> "Layout":
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        poses = None if self.camera_poses is None else self.camera_poses @ rot.T
        return Layout(self.vertices @ rot.T, self.h_c, self.h_f, poses)

    def rolled(self, shift: int) -> "Layout":
        """Same polygon with the vertex list cyclically rotated."""
        return Layout(np.roll(self.vertices, shift, axis=0), self.h_c, self.h_f, self.camera_poses)

    @property
    def n_poses(self) -> int:
        return 1 if self.camera_poses is None else int(self.camera_poses.shape[0])

    def at_pose(self, index: int) -> "Layout":
        """Layout re-expressed with camera pose ``index`` at the origin."""
        if index == 0 and self.camera_poses is None:
            return Layout(self.vertices, self.h_c, self.h_f)
        if not 0 <= index < self.n_poses:
            raise InvalidLayoutError(f"pose {index} out of range [0, {self.n_poses})")
        return Layout(self.vertices - self.camera_poses[index], self.h_c, self.h_f)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "h_c": self.h_c,
            "h_f": self.h_f,
        }
        if self.camera_poses is not None:
            data["camera_poses"] = [[float(x), float(y)] for x, y in self.camera_poses]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Layout":
        return cls(
            vertices=data["vertices"],
            h_c=data["h_c"],
            h_f=data["h_f"],
            camera_poses=data.get("camera_poses"),
        )
