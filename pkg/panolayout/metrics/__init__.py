"""
PanoLayout Metrics

3D IoU (plain and up-to-scale), corner error and evaluation reports.
"""

from panolayout.metrics.corners import bbox_diagonal, corner_error
from panolayout.metrics.iou import iou3d, iou3d_u2s, polygon_intersection_area
from panolayout.metrics.report import EvaluationReport, SceneResult, evaluate, summary_rows

__all__ = [
    "EvaluationReport",
    "SceneResult",
    "bbox_diagonal",
    "corner_error",
    "evaluate",
    "iou3d",
    "iou3d_u2s",
    "polygon_intersection_area",
    "summary_rows",
]
