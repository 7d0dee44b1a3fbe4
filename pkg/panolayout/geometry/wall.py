"""
Wall Parameterization

A vertical wall carries an orthonormal frame {e1, e2, e3}: e1 the horizontal
wall direction, e2 = e3 x e1 the horizontal normal pointing from the camera
to the wall plane, e3 the global vertical. The wall plane is x . e2 = d and
its ceiling and floor lines sit at heights h_c and h_f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Sequence, Union

import numpy as np

from panolayout.constants import VERTICAL
from panolayout.exceptions import GeometryError
from panolayout.geometry.plucker import PluckerLine, ProjectingRay, as_vec3

_E3 = np.array(VERTICAL)
_ORTHO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WallFrame:
    """Orthonormal right-handed basis attached to a vertical wall."""

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray

    def __post_init__(self):
        e1 = as_vec3(self.e1, "e1")
        e2 = as_vec3(self.e2, "e2")
        e3 = as_vec3(self.e3, "e3")
        if abs(e1[2]) > _ORTHO_TOL or abs(e2[2]) > _ORTHO_TOL:
            raise GeometryError("e1 and e2 must be horizontal")
        if np.max(np.abs(e3 - _E3)) > _ORTHO_TOL:
            raise GeometryError("e3 must be (0, 0, 1)")
        if abs(np.linalg.norm(e1) - 1.0) > _ORTHO_TOL:
            raise GeometryError("e1 must be unit length")
        if np.max(np.abs(e2 - np.cross(e3, e1))) > _ORTHO_TOL:
            raise GeometryError("e2 must equal e3 x e1")
        object.__setattr__(self, "e1", e1)
        object.__setattr__(self, "e2", e2)
        object.__setattr__(self, "e3", e3)

    @classmethod
    def from_direction(cls, u: Sequence[float]) -> "WallFrame":
        """Frame whose e1 is the horizontal direction ``u`` (normalised)."""
        u = np.asarray(u, dtype=np.float64)[:2]
        norm = float(np.linalg.norm(u))
        if norm == 0.0:
            raise GeometryError("wall direction has zero norm")
        e1 = np.array([u[0] / norm, u[1] / norm, 0.0])
        return cls(e1=e1, e2=np.cross(_E3, e1), e3=_E3.copy())

    @classmethod
    def from_normal(cls, n: Sequence[float]) -> "WallFrame":
        """Frame whose e2 is the horizontal normal ``n`` (normalised)."""
        n = np.asarray(n, dtype=np.float64)[:2]
        # e2 = e3 x e1  <=>  e1 = e2 x e3
        return cls.from_direction((n[1], -n[0]))

    @property
    def matrix(self) -> np.ndarray:
        """Basis-change matrix [e1 e2 e3]^T (world -> wall coordinates)."""
        return np.vstack([self.e1, self.e2, self.e3])

    @property
    def direction2d(self) -> np.ndarray:
        return self.e1[:2].copy()

    @property
    def normal2d(self) -> np.ndarray:
        return self.e2[:2].copy()


def line_from_wall_params(frame: WallFrame, h: float, d: float) -> PluckerLine:
    """
    Horizontal wall line at height ``h`` on the plane x . e2 = d.

    direction = e1, moment = (d e2 + h e3) x e1 = h e2 - d e3.
    """
    point = d * frame.e2 + h * frame.e3
    return PluckerLine(direction=frame.e1, moment=np.cross(point, frame.e1))


def ray_to_wall_frame(ray: Union[ProjectingRay, PluckerLine], frame: WallFrame):
    """
    Express a ray (or line) in the wall's local reference system.

    Both Plücker parts are rotated by [e1 e2 e3]^T, which preserves the
    Plücker constraint and every side value under a joint transform.
    """
    rot = frame.matrix
    if isinstance(ray, ProjectingRay):
        return ProjectingRay(
            direction=rot @ ray.direction,
            moment=rot @ ray.moment,
            origin=rot @ ray.origin,
        )
    return PluckerLine(direction=rot @ ray.direction, moment=rot @ ray.moment)


@dataclass(frozen=True, eq=False)
class Wall:
    """
    A vertical wall with shared-style ceiling and floor heights.

    Attributes:
        frame: Wall frame (e2 points from the camera towards the wall plane)
        d: Distance from the camera axis to the wall plane (meters, > 0)
        h_c: Ceiling height above the camera plane (meters)
        h_f: Floor height relative to the camera plane (meters, signed)
    """

    frame: WallFrame
    d: float
    h_c: float
    h_f: float

    def __post_init__(self):
        for name in ("d", "h_c", "h_f"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise GeometryError(f"Wall {name} must be finite")
            object.__setattr__(self, name, value)
        if self.d <= 0:
            raise GeometryError(f"Wall distance must be > 0, got {self.d}")
        if self.h_c <= self.h_f:
            raise GeometryError(f"Ceiling height {self.h_c} must exceed floor height {self.h_f}")

    @classmethod
    def from_line2d(cls, normal: Sequence[float], offset: float, h_c: float, h_f: float) -> "Wall":
        """
        Wall on the 2D line x . normal = offset, sign-normalised so d > 0.
        """
        n = np.asarray(normal, dtype=np.float64)[:2]
        norm = float(np.linalg.norm(n))
        if norm == 0.0:
            raise GeometryError("wall normal has zero norm")
        n, c = n / norm, float(offset) / norm
        if c < 0:
            n, c = -n, -c
        return cls(frame=WallFrame.from_normal(n), d=c, h_c=h_c, h_f=h_f)

    @property
    def ceiling_line(self) -> PluckerLine:
        return line_from_wall_params(self.frame, self.h_c, self.d)

    @property
    def floor_line(self) -> PluckerLine:
        return line_from_wall_params(self.frame, self.h_f, self.d)

    @property
    def u(self) -> np.ndarray:
        return self.frame.direction2d

    def solution_vector(self) -> np.ndarray:
        """Homogeneous vector W = (u, h_c u, h_f u, d)."""
        u = self.u
        return np.concatenate([u, self.h_c * u, self.h_f * u, [self.d]])

    def scaled(self, factor: float) -> "Wall":
        return Wall(frame=self.frame, d=self.d * factor, h_c=self.h_c * factor, h_f=self.h_f * factor)

    def to_dict(self) -> Dict[str, float]:
        u = self.u
        return {"u": [float(u[0]), float(u[1])], "d": self.d, "h_c": self.h_c, "h_f": self.h_f}
