"""
PanoLayout Constants

Defines constant values shared across the layout recovery pipeline.
"""

from enum import Enum


# =============================================================================
# Version Information
# =============================================================================

VERSION = "0.3.0"
VERSION_TUPLE = (0, 3, 0)


# =============================================================================
# World Models
# =============================================================================

class LayoutMode(str, Enum):
    """Structural assumption about wall directions."""

    MANHATTAN = "manhattan"
    ATLANTA = "atlanta"


class LineKind(str, Enum):
    """Which structural line of a wall a ray belongs to."""

    CEILING = "ceiling"
    FLOOR = "floor"


# =============================================================================
# Camera Defaults
# =============================================================================

DEFAULT_RADIUS = 0.5          # meters
DEFAULT_WIDTH = 1024          # pixels
DEFAULT_HEIGHT = 512          # pixels

# Global vertical axis e3
VERTICAL = (0.0, 0.0, 1.0)


# =============================================================================
# Default Thresholds
# =============================================================================

# Plücker constraint direction . moment, relative to |direction| |moment|
PLUCKER_TOL = 1e-9

# Singular value ratios sigma_k / sigma_1 counted as null
RANK_TOL_NOISE_FREE = 1e-10
RANK_TOL_NOISY = 1e-4

# Relative tolerance on |lambda_v - lambda_w| before a warning
LAMBDA_CONSISTENCY_TOL = 1e-3

# Cap on rays per structural line (uniform stride over the wall's columns)
MAX_RAYS_PER_LINE = 64

# sin of the angle below which two adjacent walls count as parallel
PARALLEL_TOL = 1e-3

# Minimal |first component| of the normalised Atlanta null vector
PINNING_TOL = 1e-6

# Direction class decision boundary margin (degrees from 45)
CLASS_AMBIGUITY_DEG = 5.0

# Alternating height / direction refinement after a joint solve
REFINE_ITERATIONS = 8
REFINE_CONVERGED = 1e-12          # sin of the largest direction update

# |log| of the depth ratio across a wall boundary that marks an occlusion
OCCLUSION_JUMP = 0.15
OCCLUSION_GAP = 0                 # columns skipped on each side of the boundary
OCCLUSION_WINDOW = 3              # columns averaged beyond the gap

# Elevations are kept this far inside the open intervals after noise
ELEVATION_EPS = 1e-6


# =============================================================================
# Segmentation
# =============================================================================

CORNER_THRESHOLD = 0.5
MIN_CORNER_SEPARATION = 3
CORNER_BLUR_HALF_WIDTH = 2


# =============================================================================
# Dataset Generation
# =============================================================================

DEFAULT_POSES_PER_LAYOUT = 4
CAMERA_CLEARANCE_MARGIN = 0.2     # meters beyond the camera radius
MIN_WALL_ANGLE_DEG = 3.0
MIN_TURN_ANGLE_DEG = 10.0
MAX_GENERATION_ATTEMPTS = 500
MIN_OCCLUSION_LOG_DEPTH = 0.3    # |log| range ratio across an occluding corner


# =============================================================================
# Metrics
# =============================================================================

U2S_SCALE_MIN = 0.1
U2S_SCALE_MAX = 10.0
U2S_TOL = 1e-4
U2S_GRID_SIZE = 41

# CSV columns, fixed order
REPORT_COLUMNS = ("iou3d", "iou3d_u2s", "ce", "cen", "scale_star")

# Plot colours (gt green, prediction orange)
GT_COLOR = "#2ca02c"
PRED_COLOR = "#ff7f0e"
