"""
Plücker Lines

Lines and projecting rays in Plücker coordinates (direction, moment) and the
side operator between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from panolayout.constants import PLUCKER_TOL
from panolayout.exceptions import InvalidPluckerLineError

ArrayLike = Union[Sequence[float], np.ndarray]


def as_vec3(value: ArrayLike, name: str = "vector") -> np.ndarray:
    """Convert to a read-only float64 3-vector with finite components."""
    vec = np.array(value, dtype=np.float64).reshape(-1)
    if vec.shape != (3,):
        raise InvalidPluckerLineError(f"{name} must have 3 components, got {vec.shape[0]}")
    if not np.all(np.isfinite(vec)):
        raise InvalidPluckerLineError(f"{name} has non-finite components")
    vec.setflags(write=False)
    return vec


def _check_plucker(direction: np.ndarray, moment: np.ndarray) -> None:
    norm_d = float(np.linalg.norm(direction))
    if norm_d == 0.0:
        raise InvalidPluckerLineError("direction has zero norm")
    scale = max(1.0, norm_d * float(np.linalg.norm(moment)))
    if abs(float(direction @ moment)) > PLUCKER_TOL * scale:
        raise InvalidPluckerLineError(
            f"direction . moment = {float(direction @ moment):.3e} (not a line)"
        )


@dataclass(frozen=True, eq=False)
class PluckerLine:
    """
    A 3D line as a (direction, moment) pair.

    The moment is p x direction for any point p on the line, so
    direction . moment = 0 holds for every line.
    """

    direction: np.ndarray
    moment: np.ndarray

    def __post_init__(self):
        direction = as_vec3(self.direction, "direction")
        moment = as_vec3(self.moment, "moment")
        _check_plucker(direction, moment)
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "moment", moment)

    @classmethod
    def from_point_direction(cls, point: ArrayLike, direction: ArrayLike) -> "PluckerLine":
        p = np.asarray(point, dtype=np.float64)
        d = np.asarray(direction, dtype=np.float64)
        return cls(direction=d, moment=np.cross(p, d))

    @classmethod
    def from_points(cls, p: ArrayLike, q: ArrayLike) -> "PluckerLine":
        p = np.asarray(p, dtype=np.float64)
        return cls.from_point_direction(p, np.asarray(q, dtype=np.float64) - p)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.direction, self.moment])

    def closest_point(self) -> np.ndarray:
        """Point of the line closest to the origin."""
        d = self.direction
        return np.cross(d, self.moment) / float(d @ d)

    def distance_to_point(self, point: ArrayLike) -> float:
        p = np.asarray(point, dtype=np.float64)
        d = self.direction
        return float(np.linalg.norm(np.cross(p, d) - self.moment) / np.linalg.norm(d))


@dataclass(frozen=True, eq=False)
class ProjectingRay(PluckerLine):
    """
    The projecting ray of one pixel, with the optical center that generated it.

    moment = origin x direction.
    """

    origin: np.ndarray = None

    def __post_init__(self):
        super().__post_init__()
        origin = as_vec3(self.origin if self.origin is not None else np.zeros(3), "origin")
        expected = np.cross(origin, self.direction)
        scale = max(1.0, float(np.linalg.norm(origin) * np.linalg.norm(self.direction)))
        if np.max(np.abs(expected - self.moment)) > PLUCKER_TOL * scale:
            raise InvalidPluckerLineError("moment does not match origin x direction")
        object.__setattr__(self, "origin", origin)

    @classmethod
    def from_origin_direction(cls, origin: ArrayLike, direction: ArrayLike) -> "ProjectingRay":
        o = np.asarray(origin, dtype=np.float64)
        d = np.asarray(direction, dtype=np.float64)
        return cls(direction=d, moment=np.cross(o, d), origin=o)

    def scaled(self, factor: float) -> "ProjectingRay":
        """Same ray with its Plücker 6-vector multiplied by ``factor``."""
        if factor == 0:
            raise InvalidPluckerLineError("scale factor must be nonzero")
        return ProjectingRay(
            direction=self.direction * factor,
            moment=self.moment * factor,
            origin=self.origin,
        )

    def point_at(self, s: float) -> np.ndarray:
        return self.origin + s * self.direction


def side(ray: PluckerLine, line: PluckerLine) -> float:
    """
    Side operator xi . l_bar + xi_bar . l.

    Zero iff the two lines are coplanar (they intersect or are parallel).
    """
    return float(ray.direction @ line.moment + ray.moment @ line.direction)
