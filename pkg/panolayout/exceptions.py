"""
PanoLayout Exceptions

Custom exception classes for error handling in the layout recovery pipeline.
"""

from typing import Any, Optional


class PanoLayoutError(Exception):
    """Base exception class for all PanoLayout errors."""

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[Any] = None
    ):
        self.message = message
        self.code = code
        self.details = details
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.code:
            return f"[{self.code}] {self.message}"
        return self.message

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(message={self.message!r}, code={self.code!r})"


# =============================================================================
# Geometry
# =============================================================================

class GeometryError(PanoLayoutError, ValueError):
    """Exception raised for invalid geometric values."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, code="GEOMETRY_ERROR", **kwargs)


class InvalidPluckerLineError(GeometryError):
    """Exception raised when a 6-vector is not a valid line."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(message=f"Invalid Plücker line: {reason}")


class ElevationOutOfRangeError(GeometryError):
    """Exception raised when a row maps outside the open elevation range."""

    def __init__(self, row: float, height: int):
        self.row = row
        self.height = height
        super().__init__(
            message=f"Row {row} maps outside (-pi/2, pi/2) for image height {height}"
        )


# =============================================================================
# Scene
# =============================================================================

class SceneError(PanoLayoutError, ValueError):
    """Exception raised for scene-related errors."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, code="SCENE_ERROR", **kwargs)


class InvalidLayoutError(SceneError):
    """Exception raised when a layout violates its invariants."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(message=f"Invalid layout: {reason}")


class CameraPlacementError(SceneError):
    """Exception raised when the camera circle is not strictly inside the room."""

    def __init__(self, wall_index: int, distance: float, radius: float):
        self.wall_index = wall_index
        self.distance = distance
        self.radius = radius
        super().__init__(
            message=(
                f"Camera circle of radius {radius:.3f} m reaches wall {wall_index} "
                f"(distance {distance:.3f} m)"
            )
        )


class VisibilityError(SceneError):
    """Exception raised when a ray from inside the room hits no wall."""

    def __init__(self, origin: Any, azimuth: float):
        self.origin = origin
        self.azimuth = azimuth
        super().__init__(
            message=f"No wall hit from origin {tuple(origin)} at azimuth {azimuth:.6f}"
        )


class GenerationError(SceneError):
    """Exception raised when rejection sampling runs out of attempts."""

    def __init__(self, index: int, attempts: int, reason: Optional[str] = None):
        self.index = index
        self.attempts = attempts
        message = f"Could not generate layout {index} after {attempts} attempts"
        if reason:
            message += f" ({reason})"
        super().__init__(message=message)


class SegmentationError(SceneError):
    """Exception raised when corner detection cannot close a layout."""

    def __init__(self, corners_found: int, corners_required: int = 3):
        self.corners_found = corners_found
        self.corners_required = corners_required
        super().__init__(
            message=f"Segmentation found {corners_found} corners, need at least {corners_required}"
        )


# =============================================================================
# Solvers
# =============================================================================

class SolverError(PanoLayoutError):
    """Exception raised for solver failures."""

    def __init__(self, message: str, solver: Optional[str] = None, **kwargs):
        self.solver = solver
        super().__init__(message, code="SOLVER_ERROR", **kwargs)


class DegenerateConfigurationError(SolverError):
    """Exception raised when the ray configuration leaves the null space too large."""

    def __init__(self, solver: str, ratio: float, tolerance: float, expected_dim: int):
        self.ratio = ratio
        self.tolerance = tolerance
        self.expected_dim = expected_dim
        super().__init__(
            message=(
                f"Degenerate ray configuration: null space exceeds {expected_dim} "
                f"(sigma ratio {ratio:.3e} < {tolerance:.1e})"
            ),
            solver=solver,
        )


class NoRealSolutionError(SolverError):
    """Exception raised when the parallelism constraints have no real root."""

    def __init__(self, solver: str, reason: str = "both quadratics have complex roots"):
        super().__init__(message=f"No real solution: {reason}", solver=solver)


class InfeasibleLayoutError(SolverError):
    """Exception raised when the recovered layout is not physically valid."""

    def __init__(self, reason: str, solver: Optional[str] = None, wall_index: Optional[int] = None):
        self.reason = reason
        self.wall_index = wall_index
        message = f"Infeasible layout: {reason}"
        if wall_index is not None:
            message += f" (wall {wall_index})"
        super().__init__(message=message, solver=solver)


class PinningError(SolverError):
    """Exception raised when the pinned component of the Atlanta vector is near zero."""

    def __init__(self, component: float, tolerance: float):
        self.component = component
        self.tolerance = tolerance
        super().__init__(
            message=(
                f"Cannot pin first component to 1: null-vector component "
                f"{component:.3e} below {tolerance:.1e}"
            ),
            solver="atlanta",
        )


# =============================================================================
# Metrics
# =============================================================================

class MetricError(PanoLayoutError, ValueError):
    """Exception raised for evaluation errors."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, code="METRIC_ERROR", **kwargs)


class ZeroVolumeError(MetricError):
    """Exception raised when a layout has no volume."""

    def __init__(self, which: str):
        self.which = which
        super().__init__(message=f"Layout '{which}' has zero volume")


class CornerCountMismatchError(MetricError):
    """Exception raised when corner lists cannot be matched."""

    def __init__(self, pred_count: int, gt_count: int):
        self.pred_count = pred_count
        self.gt_count = gt_count
        super().__init__(
            message=f"Corner count mismatch: prediction has {pred_count}, ground truth has {gt_count}"
        )


# =============================================================================
# Configuration and data files
# =============================================================================

class ConfigurationError(PanoLayoutError):
    """Exception raised for configuration-related errors."""

    def __init__(self, message: str, parameter: Optional[str] = None, **kwargs):
        self.parameter = parameter
        super().__init__(message, code="CONFIG_ERROR", **kwargs)


class InvalidConfigValueError(ConfigurationError):
    """Exception raised for invalid configuration values."""

    def __init__(self, parameter: str, value: Any, expected: str):
        self.value = value
        self.expected = expected
        super().__init__(
            message=f"Invalid value for '{parameter}': {value!r}. Expected: {expected}",
            parameter=parameter,
        )


class ConfigFileNotFoundError(ConfigurationError):
    """Exception raised when configuration file is not found."""

    def __init__(self, path: str):
        self.path = path
        super().__init__(
            message=f"Configuration file not found: {path}",
            parameter="config_file",
        )


class ConfigParseError(ConfigurationError):
    """Exception raised when configuration file cannot be parsed."""

    def __init__(self, path: str, reason: Optional[str] = None):
        self.path = path
        message = f"Failed to parse configuration file: {path}"
        if reason:
            message += f" ({reason})"
        super().__init__(message=message, parameter="config_file")


class DataFileError(PanoLayoutError):
    """Exception raised for malformed layout or observation files."""

    def __init__(self, message: str, path: Optional[str] = None, **kwargs):
        self.path = path
        super().__init__(message, code="DATA_ERROR", **kwargs)


class LayoutParseError(DataFileError):
    """Exception raised when a layout file cannot be parsed."""

    def __init__(self, path: str, reason: Optional[str] = None):
        message = f"Failed to parse layout file: {path}"
        if reason:
            message += f" ({reason})"
        super().__init__(message=message, path=path)


class ObservationParseError(DataFileError):
    """Exception raised when an observation file cannot be parsed."""

    def __init__(self, path: str, reason: Optional[str] = None):
        message = f"Failed to parse observation file: {path}"
        if reason:
            message += f" ({reason})"
        super().__init__(message=message, path=path)


# =============================================================================
# Error Handlers
# =============================================================================

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_DEGENERATE = 4
EXIT_INFEASIBLE = 5
EXIT_IO = 6
EXIT_SCENE = 7
EXIT_METRIC = 8
EXIT_CONFIG = 9


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the documented CLI exit code."""
    if isinstance(error, DataFileError):
        return EXIT_PARSE
    if isinstance(error, DegenerateConfigurationError):
        return EXIT_DEGENERATE
    if isinstance(error, SolverError):
        return EXIT_INFEASIBLE
    if isinstance(error, (SceneError, GeometryError)):
        return EXIT_SCENE
    if isinstance(error, MetricError):
        return EXIT_METRIC
    if isinstance(error, ConfigurationError):
        return EXIT_CONFIG
    if isinstance(error, OSError):
        return EXIT_IO
    return EXIT_UNEXPECTED


def handle_solver_error(error: SolverError) -> dict:
    """Handle solver errors and return appropriate response."""
    suggestions = ["Check the observation was rendered with the same camera radius"]
    if isinstance(error, DegenerateConfigurationError):
        suggestions = [
            "Camera radius must be > 0; a central panorama cannot recover scale",
            "Make sure each wall spans at least a few columns",
            "Lower solver.rank_tol_noisy for very short walls",
        ]
    elif isinstance(error, (InfeasibleLayoutError, NoRealSolutionError)):
        suggestions = [
            "Reduce the boundary noise level",
            "Increase segmentation.min_separation to suppress spurious corners",
            "Try the other --mode",
        ]
    return {
        "error_type": "solver",
        "message": str(error),
        "solver": error.solver,
        "suggestions": suggestions,
    }
