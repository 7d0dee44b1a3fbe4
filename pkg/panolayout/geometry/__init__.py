"""
Geometry core: Plücker algebra, wall parameterization and the circular
panorama camera model.
"""

from panolayout.geometry.camera import (
    CameraRig,
    back_project,
    back_project_elevation,
    project_elevation,
)
from panolayout.geometry.plucker import PluckerLine, ProjectingRay, side
from panolayout.geometry.wall import Wall, WallFrame, line_from_wall_params, ray_to_wall_frame

__all__ = [
    "CameraRig",
    "PluckerLine",
    "ProjectingRay",
    "Wall",
    "WallFrame",
    "back_project",
    "back_project_elevation",
    "line_from_wall_params",
    "project_elevation",
    "ray_to_wall_frame",
    "side",
]
