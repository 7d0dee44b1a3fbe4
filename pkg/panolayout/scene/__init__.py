"""
PanoLayout Scene Package

Synthetic rooms, their rendered boundary observations, column segmentation
and file I/O.
"""

from panolayout.scene.generator import DatasetSpec, generate_layout, generate_scene, sample_poses
from panolayout.scene.layout import Layout
from panolayout.scene.render import BoundaryObservation, add_noise, render_boundaries
from panolayout.scene.segmentation import ColumnRange, segment_columns
from panolayout.scene.visibility import visible_wall

__all__ = [
    "Layout",
    "BoundaryObservation",
    "ColumnRange",
    "DatasetSpec",
    "add_noise",
    "generate_layout",
    "generate_scene",
    "render_boundaries",
    "sample_poses",
    "segment_columns",
    "visible_wall",
]
