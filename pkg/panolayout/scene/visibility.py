"""
Wall Visibility

2D ray casting against the floor-plan polygon; the nearest hit is the
visible wall, which handles occlusion in non-convex rooms.
"""

from typing import Sequence, Tuple

import numpy as np

from panolayout.exceptions import VisibilityError
from panolayout.scene.layout import Layout, cross2

_PARALLEL_EPS = 1e-15
_T_EPS = 1e-12
_S_EPS = 1e-12


def cast_rays(
    layout: Layout,
    origins: np.ndarray,
    azimuths: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cast many 2D rays origin + t (cos phi, sin phi) against every edge.

    Returns:
        (wall_index, t) arrays; t is np.inf where nothing was hit.
        Ties at a shared vertex go to the lower edge index.
    """
    origins = np.atleast_2d(np.asarray(origins, dtype=np.float64))
    azimuths = np.atleast_1d(np.asarray(azimuths, dtype=np.float64))
    directions = np.column_stack([np.cos(azimuths), np.sin(azimuths)])

    a, b = layout.edges()
    e = b - a                                            # (N, 2)
    denom = cross2(directions[:, None, :], e[None, :, :])  # (M, N)
    ao = a[None, :, :] - origins[:, None, :]               # (M, N, 2)

    with np.errstate(divide="ignore", invalid="ignore"):
        t = cross2(ao, e[None, :, :]) / denom
        s = cross2(ao, directions[:, None, :]) / denom

    valid = (np.abs(denom) > _PARALLEL_EPS) & (t > _T_EPS) & (s >= -_S_EPS) & (s <= 1.0 + _S_EPS)
    t = np.where(valid, t, np.inf)
    index = np.argmin(t, axis=1)
    return index, t[np.arange(t.shape[0]), index]


def visible_wall(layout: Layout, origin2d: Sequence[float], azimuth: float) -> Tuple[int, float]:
    """
    Nearest wall hit by the ray from ``origin2d`` at ``azimuth``.

    Raises:
        VisibilityError: If no edge is hit (origin outside the polygon).
    """
    index, t = cast_rays(layout, np.asarray(origin2d, dtype=np.float64), np.array([azimuth]))
    if not np.isfinite(t[0]):
        raise VisibilityError(origin2d, azimuth)
    return int(index[0]), float(t[0])
