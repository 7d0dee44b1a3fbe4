"""
Solver Data Types

Options, null-space parameterizations, wall solution vectors, minimal-solver
candidates and the final layout solution with its diagnostics.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from panolayout import constants as C
from panolayout.constants import LayoutMode
from panolayout.exceptions import InfeasibleLayoutError, InvalidLayoutError
from panolayout.geometry.wall import Wall, WallFrame
from panolayout.scene.layout import Layout


# =============================================================================
# Options
# =============================================================================

@dataclass(frozen=True)
class SolverOptions:
    """
    Tolerances and sampling used by every solver.

    Library calls take an options record instead of reading globals; build
    one from a :class:`~panolayout.config.PanoLayoutConfig` with
    :meth:`from_config`.
    """

    rank_tol: float = C.RANK_TOL_NOISE_FREE
    lambda_tol: float = C.LAMBDA_CONSISTENCY_TOL
    max_rays_per_line: int = C.MAX_RAYS_PER_LINE
    edge_margin: int = 1
    parallel_tol: float = C.PARALLEL_TOL
    pinning_tol: float = C.PINNING_TOL
    bridge_occlusions: bool = True
    corner_threshold: float = C.CORNER_THRESHOLD
    min_separation: int = C.MIN_CORNER_SEPARATION
    class_ambiguity_deg: float = C.CLASS_AMBIGUITY_DEG
    errors_in_variables: bool = True
    refine_iterations: int = C.REFINE_ITERATIONS
    occlusion_jump: float = C.OCCLUSION_JUMP

    @classmethod
    def from_config(cls, config, noisy: bool = False) -> "SolverOptions":
        solver = config.solver
        return cls(
            rank_tol=solver.rank_tol_noisy if noisy else solver.rank_tol,
            lambda_tol=solver.lambda_tol,
            max_rays_per_line=solver.max_rays_per_line,
            edge_margin=solver.edge_margin,
            parallel_tol=solver.parallel_tol,
            pinning_tol=solver.pinning_tol,
            bridge_occlusions=solver.bridge_occlusions,
            errors_in_variables=solver.errors_in_variables,
            refine_iterations=solver.refine_iterations,
            occlusion_jump=solver.occlusion_jump,
            corner_threshold=config.segmentation.threshold,
            min_separation=config.segmentation.min_separation,
        )


# =============================================================================
# Null space and solution vectors
# =============================================================================

@dataclass(frozen=True, eq=False)
class NullSpaceParam:
    """
    Approximate null space of a system matrix.

    Attributes:
        basis: (k, n) array, orthonormal rows ordered by ascending singular value
        singular_values: Full spectrum, descending, zero-padded to n
    """

    basis: np.ndarray
    singular_values: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def combine(self, coefficients: Sequence[float]) -> np.ndarray:
        """basis[0] + sum(c_i * basis[i + 1])."""
        coefficients = np.asarray(coefficients, dtype=np.float64)
        return self.basis[0] + coefficients @ self.basis[1:1 + coefficients.size]


def cross2d(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


@dataclass(frozen=True, eq=False)
class WallSolutionVector:
    """Homogeneous wall vector W = (u, v, w, d) with v = h_c u and w = h_f u."""

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    d: float

    @classmethod
    def from_vector(cls, vec: Sequence[float]) -> "WallSolutionVector":
        vec = np.asarray(vec, dtype=np.float64)
        return cls(u=vec[0:2].copy(), v=vec[2:4].copy(), w=vec[4:6].copy(), d=float(vec[6]))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.u, self.v, self.w, [self.d]])

    @property
    def h_c(self) -> float:
        return float(self.u @ self.v / (self.u @ self.u))

    @property
    def h_f(self) -> float:
        return float(self.u @ self.w / (self.u @ self.u))

    def parallel_residual(self) -> float:
        """max(|u x v|, |u x w|) relative to |u|^2; zero once parallelism holds."""
        nu = float(self.u @ self.u)
        return max(abs(cross2d(self.u, self.v)), abs(cross2d(self.u, self.w))) / nu

    def gauged(self) -> "WallSolutionVector":
        """Scale so |u| = 1 and d >= 0."""
        scale = 1.0 / float(np.linalg.norm(self.u))
        if self.d < 0:
            scale = -scale
        return WallSolutionVector.from_vector(self.as_vector() * scale)


@dataclass(frozen=True)
class WallCandidate:
    """
    One real solution of the minimal solver.

    Candidates with h_c <= h_f (or d <= 0) are kept but flagged infeasible.
    """

    u: tuple
    d: float
    h_c: float
    h_f: float
    feasible: bool
    parallel_residual: float

    def to_wall(self) -> Wall:
        if not self.feasible:
            raise InfeasibleLayoutError("candidate has ceiling below floor", solver="minimal")
        return Wall(frame=WallFrame.from_direction(self.u), d=self.d, h_c=self.h_c, h_f=self.h_f)

    def distance_to(self, wall: Wall) -> float:
        """Max absolute parameter difference to ``wall`` (u, d, h_c, h_f)."""
        du = float(np.max(np.abs(np.asarray(self.u) - wall.u)))
        return max(du, abs(self.d - wall.d), abs(self.h_c - wall.h_c), abs(self.h_f - wall.h_f))


# =============================================================================
# Layout solution
# =============================================================================

@dataclass
class SolverDiagnostics:
    """Everything a reconstruction measured on the way."""

    spectra: Dict[str, List[float]] = field(default_factory=dict)
    lambda_root: Optional[float] = None
    lambda_gap: Optional[float] = None
    lambda_consistent: bool = True
    approximate_roots: bool = False
    residuals: List[float] = field(default_factory=list)
    classes: Optional[List[int]] = None
    ambiguous: List[int] = field(default_factory=list)
    bridged: List[int] = field(default_factory=list)
    n_segments: int = 0
    failed_fits: List[int] = field(default_factory=list)
    refine_steps: int = 0

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["max_residual"] = self.max_residual
        return data


def intersect_walls(a: Wall, b: Wall, parallel_tol: float = C.PARALLEL_TOL) -> np.ndarray:
    """
    Floor-plan point where the planes of walls ``a`` and ``b`` meet.

    Raises:
        InfeasibleLayoutError: If the walls are (near-)parallel.
    """
    normals = np.vstack([a.frame.normal2d, b.frame.normal2d])
    if abs(np.linalg.det(normals)) < parallel_tol:
        raise InfeasibleLayoutError("adjacent walls are parallel, no corner")
    return np.linalg.solve(normals, np.array([a.d, b.d]))


def corners_from_walls(walls: Sequence[Wall], parallel_tol: float = C.PARALLEL_TOL) -> np.ndarray:
    """Vertex k is the corner between wall k-1 and wall k (cyclic)."""
    n = len(walls)
    return np.array([intersect_walls(walls[k - 1], walls[k], parallel_tol) for k in range(n)])


@dataclass(eq=False)
class LayoutSolution:
    """
    Reconstructed layout: ordered walls with shared heights.

    Wall k spans floor-plan vertices k and k+1 of :attr:`layout`.
    """

    walls: List[Wall]
    h_c: float
    h_f: float
    mode: LayoutMode
    diagnostics: SolverDiagnostics = field(default_factory=SolverDiagnostics)
    parallel_tol: float = C.PARALLEL_TOL

    @property
    def n_walls(self) -> int:
        return len(self.walls)

    @property
    def distances(self) -> np.ndarray:
        return np.array([w.d for w in self.walls])

    @property
    def layout(self) -> Layout:
        """
        Closed floor plan from adjacent wall intersections.

        Raises:
            InfeasibleLayoutError: If the polygon is not simple and
                counter-clockwise, or two adjacent walls are parallel.
        """
        corners = corners_from_walls(self.walls, self.parallel_tol)
        try:
            return Layout(corners, self.h_c, self.h_f)
        except InvalidLayoutError as e:
            raise InfeasibleLayoutError(f"reconstructed polygon rejected: {e.reason}") from e

    def scaled(self, factor: float) -> "LayoutSolution":
        return LayoutSolution(
            walls=[w.scaled(factor) for w in self.walls],
            h_c=self.h_c * factor,
            h_f=self.h_f * factor,
            mode=self.mode,
            diagnostics=self.diagnostics,
            parallel_tol=self.parallel_tol,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode.value,
            "h_c": self.h_c,
            "h_f": self.h_f,
            "walls": [w.to_dict() for w in self.walls],
            "diagnostics": self.diagnostics.to_dict(),
        }
