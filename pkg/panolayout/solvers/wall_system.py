"""
Wall Linear System

Each ray that meets a wall's ceiling (or floor) line gives one linear
equation side(ray, line) = 0 in the unknowns W = (u, v, w, d):

    ceiling: xb1 u_x + xb2 u_y + x2 v_x - x1 v_y - x3 d = 0
    floor:   xb1 u_x + xb2 u_y + x2 w_x - x1 w_y - x3 d = 0

with x the ray direction and xb its moment.
"""

from typing import Sequence, Tuple

import numpy as np

from panolayout.exceptions import SolverError
from panolayout.geometry.plucker import PluckerLine

N_UNKNOWNS = 7


def ray_arrays(rays: Sequence[PluckerLine]) -> Tuple[np.ndarray, np.ndarray]:
    """Stack ray directions and moments into two (n, 3) arrays."""
    if len(rays) == 0:
        return np.zeros((0, 3)), np.zeros((0, 3))
    directions = np.array([r.direction for r in rays])
    moments = np.array([r.moment for r in rays])
    return directions, moments


def _rows(directions: np.ndarray, moments: np.ndarray, block: slice) -> np.ndarray:
    rows = np.zeros((directions.shape[0], N_UNKNOWNS))
    rows[:, 0] = moments[:, 0]
    rows[:, 1] = moments[:, 1]
    rows[:, block.start] = directions[:, 1]
    rows[:, block.start + 1] = -directions[:, 0]
    rows[:, 6] = -directions[:, 2]
    return rows


def build_wall_system(
    ceiling_rays: Sequence[PluckerLine],
    floor_rays: Sequence[PluckerLine],
) -> np.ndarray:
    """
    Stack one row per ray: ceiling rays first, then floor rays.

    Rows are the raw side-operator expansions, so scaling a ray's Plücker
    vector scales its row by the same factor.

    Raises:
        SolverError: If either ray list is empty.
    """
    if len(ceiling_rays) == 0 or len(floor_rays) == 0:
        raise SolverError(
            f"need at least one ceiling and one floor ray, got "
            f"{len(ceiling_rays)} and {len(floor_rays)}",
            solver="wall_system",
        )
    ceiling = _rows(*ray_arrays(ceiling_rays), block=slice(2, 4))
    floor = _rows(*ray_arrays(floor_rays), block=slice(4, 6))
    return np.vstack([ceiling, floor])


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    """Scale every nonzero row to unit norm."""
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    return matrix / np.where(norms > 0, norms, 1.0)


def line_residuals(rays: Sequence[PluckerLine], line: PluckerLine) -> np.ndarray:
    """|side(ray, line)| per ray, with every ray direction scaled to unit length."""
    directions, moments = ray_arrays(rays)
    if directions.shape[0] == 0:
        return np.zeros(0)
    values = directions @ line.moment + moments @ line.direction
    return np.abs(values) / np.linalg.norm(directions, axis=1)


def _optical_center(ray: PluckerLine) -> np.ndarray:
    origin = getattr(ray, "origin", None)
    if origin is not None:
        return origin
    # the rig's optical centers lie on z = 0
    point = ray.closest_point()
    if ray.direction[2] == 0.0:
        return point
    return point - (point[2] / ray.direction[2]) * ray.direction


def elevation_tangents(rays: Sequence[PluckerLine]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Directions and moments of d(ray)/d(elevation), one row per ray.

    A ray pivots about its optical center as its elevation changes. The
    tangent keeps the ray's Plücker scale, so a row built from it is the
    first-order change of that ray's row per radian of elevation noise.

    Raises:
        SolverError: For a vertical ray.
    """
    directions, _ = ray_arrays(rays)
    if directions.shape[0] == 0:
        return np.zeros((0, 3)), np.zeros((0, 3))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    unit = directions / norms
    cos = np.sqrt(np.clip(1.0 - unit[:, 2:3] ** 2, 0.0, None))
    if np.any(cos == 0.0):
        raise SolverError("vertical ray has no elevation tangent", solver="wall_system")
    tangents = norms * (np.array([0.0, 0.0, 1.0]) - unit[:, 2:3] * unit) / cos
    centers = np.array([_optical_center(r) for r in rays])
    return tangents, np.cross(centers, tangents)
