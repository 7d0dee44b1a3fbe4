"""
PanoLayout - Scaled Room Layouts from Non-Central Circular Panoramas

Recovers the floor plan and the ceiling and floor heights of a room, in
metric scale, from the ceiling/floor boundary of a single non-central
circular panorama. Supports Manhattan (orthogonal walls) and Atlanta
(arbitrary vertical walls) world models.

Example usage:
    >>> from panolayout import CameraRig, Layout, reconstruct_layout, render_boundaries
    >>> room = Layout.from_points([(-2, -2), (2, -2), (2, 2), (-2, 2)], 1.5, -1.5)
    >>> obs = render_boundaries(room, CameraRig(0.5, 1024, 512))
    >>> solution = reconstruct_layout(obs, "manhattan")
"""

__version__ = "0.3.0"
__author__ = "PanoLayout Developers"
__license__ = "MIT"

from panolayout.config import PanoLayoutConfig, load_config
from panolayout.constants import LayoutMode
from panolayout.exceptions import (
    ConfigurationError,
    GeometryError,
    MetricError,
    PanoLayoutError,
    SceneError,
    SolverError,
)
from panolayout.geometry import CameraRig, PluckerLine, ProjectingRay, Wall, side
from panolayout.metrics import corner_error, evaluate, iou3d, iou3d_u2s
from panolayout.scene import BoundaryObservation, Layout, add_noise, render_boundaries
from panolayout.solvers import LayoutSolution, SolverOptions, reconstruct_layout

# Public API
__all__ = [
    # Geometry
    "CameraRig",
    "PluckerLine",
    "ProjectingRay",
    "Wall",
    "side",
    # Scenes
    "Layout",
    "BoundaryObservation",
    "render_boundaries",
    "add_noise",
    # Solvers
    "LayoutMode",
    "LayoutSolution",
    "SolverOptions",
    "reconstruct_layout",
    # Metrics
    "evaluate",
    "iou3d",
    "iou3d_u2s",
    "corner_error",
    # Configuration
    "PanoLayoutConfig",
    "load_config",
    # Exceptions
    "PanoLayoutError",
    "GeometryError",
    "SceneError",
    "SolverError",
    "MetricError",
    "ConfigurationError",
    # Version info
    "__version__",
    "__author__",
]


def get_version() -> str:
    """Return the current version of PanoLayout."""
    return __version__


def get_info() -> dict:
    """Return package information as a dictionary."""
    return {
        "name": "panolayout",
        "version": __version__,
        "author": __author__,
        "license": __license__,
        "description": "Scaled room layout recovery from non-central circular panoramas",
    }
