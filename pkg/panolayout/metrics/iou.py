"""
3D IoU

Prism IoU of two layouts in the same camera frame, and its up-to-scale
variant that first rescales the prediction about the camera origin.
"""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from shapely.geometry import Polygon

from panolayout import constants as C
from panolayout.exceptions import ZeroVolumeError
from panolayout.scene.layout import Layout


def polygon_intersection_area(p: Polygon, q: Polygon) -> float:
    """Area of the boolean intersection of two simple polygons (convex or not)."""
    if p.is_empty or q.is_empty:
        return 0.0
    return float(p.intersection(q).area)


def _height_overlap(a: Layout, b: Layout) -> float:
    return max(0.0, min(a.h_c, b.h_c) - max(a.h_f, b.h_f))


def iou3d(pred: Layout, gt: Layout) -> float:
    """
    Volume IoU of the two room prisms.

    Raises:
        ZeroVolumeError: If either layout has zero volume.
    """
    v_pred, v_gt = pred.volume, gt.volume
    if v_pred <= 0:
        raise ZeroVolumeError("prediction")
    if v_gt <= 0:
        raise ZeroVolumeError("ground truth")
    inter = polygon_intersection_area(pred.polygon, gt.polygon) * _height_overlap(pred, gt)
    union = v_pred + v_gt - inter
    return float(min(1.0, max(0.0, inter / union)))


def iou3d_u2s(
    pred: Layout,
    gt: Layout,
    scale_min: float = C.U2S_SCALE_MIN,
    scale_max: float = C.U2S_SCALE_MAX,
    tol: float = C.U2S_TOL,
    grid_size: int = C.U2S_GRID_SIZE,
) -> Tuple[float, float]:
    """
    Best iou3d(s * pred, gt) over s in [scale_min, scale_max].

    A log-spaced grid brackets the optimum, which golden-section search
    then narrows to ``tol`` in log-scale. The grid points and s = 1 stay
    candidates, so the result is never below plain iou3d.

    Returns:
        (iou, scale_star)
    """
    iou3d(pred, gt)  # volume checks

    lo, hi = math.log(scale_min), math.log(scale_max)

    def score(log_s: float) -> float:
        return iou3d(pred.scaled(math.exp(min(max(log_s, lo), hi))), gt)

    grid = np.linspace(lo, hi, grid_size)
    values = np.array([score(x) for x in grid])
    best = int(np.argmax(values))
    candidates = [(values[best], grid[best])]

    if 0 < best < grid_size - 1 and values[best] > max(values[best - 1], values[best + 1]):
        # shifted so the search variable stays >= 1 and the relative
        # tolerance of golden() bounds the absolute one
        shift = 1.0 - lo
        result = minimize_scalar(
            lambda y: -score(y - shift),
            bracket=tuple(grid[best - 1:best + 2] + shift),
            method="golden",
            options={"xtol": tol / (2.0 * (hi + shift))},
        )
        candidates.append((-float(result.fun), min(max(float(result.x) - shift, lo), hi)))

    if scale_min <= 1.0 <= scale_max:
        candidates.append((score(0.0), 0.0))
    iou, log_s = max(candidates, key=lambda c: c[0])
    return float(iou), float(math.exp(log_s))
