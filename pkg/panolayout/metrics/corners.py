"""
Corner Error

Mean 3D corner distance under the best cyclic correspondence, in meters
and normalised by the ground-truth bounding-box diagonal.
"""

from typing import Tuple

import numpy as np

from panolayout.exceptions import CornerCountMismatchError, ZeroVolumeError
from panolayout.scene.layout import Layout


def bbox_diagonal(layout: Layout) -> float:
    """Length of the 3D bounding-box diagonal of the room prism."""
    corners = layout.corners3d()
    return float(np.linalg.norm(corners.max(axis=0) - corners.min(axis=0)))


def matched_corner_distances(pred: Layout, gt: Layout) -> np.ndarray:
    """
    Per-corner distances (ceiling corners then floor corners) under the
    cyclic shift of the prediction's vertex list with the smallest mean.

    Raises:
        CornerCountMismatchError: If the wall counts differ.
    """
    if pred.n_walls != gt.n_walls:
        raise CornerCountMismatchError(2 * pred.n_walls, 2 * gt.n_walls)
    gt_corners = gt.corners3d()
    best = None
    for shift in range(pred.n_walls):
        distances = np.linalg.norm(pred.rolled(shift).corners3d() - gt_corners, axis=1)
        if best is None or distances.mean() < best.mean():
            best = distances
    return best


def corner_error(pred: Layout, gt: Layout) -> Tuple[float, float]:
    """
    Returns:
        (ce, cen): mean matched corner distance in meters, and the same
        divided by the ground-truth bounding-box diagonal.
    """
    ce = float(matched_corner_distances(pred, gt).mean())
    diagonal = bbox_diagonal(gt)
    if diagonal <= 0:
        raise ZeroVolumeError("ground truth")
    return ce, ce / diagonal
