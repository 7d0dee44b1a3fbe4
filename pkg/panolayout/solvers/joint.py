"""
Joint Layout Solvers

All walls solved at once with shared ceiling and floor heights.

Manhattan: unknowns (u, v, w, d_1..d_N); walls of the orthogonal class use
u_perp = J u (and likewise v, w), which stays linear in the same unknowns.

Atlanta: wall directions are given; every ray is rotated into its wall's
frame and the unknowns are (1, h_c, h_f, d_1..d_N) with the first
component pinned.

Both solvers then alternate per-wall refits at fixed heights with pinned
joint solves, which removes most of the sensitivity to the initial wall
directions.
"""

from __future__ import annotations

from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from panolayout import constants as C
from panolayout.constants import LayoutMode
from panolayout.exceptions import (
    DegenerateConfigurationError,
    InfeasibleLayoutError,
    PinningError,
    SolverError,
)
from panolayout.geometry.plucker import PluckerLine
from panolayout.geometry.wall import Wall, WallFrame
from panolayout.solvers.nullspace import null_space, solve_lambda, weighted_null_vector
from panolayout.solvers.single_wall import MIN_RAYS_PER_LINE, wall_residual
from panolayout.solvers.solution import (
    LayoutSolution,
    SolverDiagnostics,
    SolverOptions,
    cross2d,
)
from panolayout.solvers.wall_system import (
    build_wall_system,
    elevation_tangents,
    normalize_rows,
    ray_arrays,
)

WallRays = Tuple[Sequence[PluckerLine], Sequence[PluckerLine]]

# Row action of u -> J u = (-u_y, u_x) on the (u, v, w) coefficient blocks
_PERP = np.zeros((6, 6))
for _k in range(3):
    _PERP[2 * _k + 1, 2 * _k] = 1.0
    _PERP[2 * _k, 2 * _k + 1] = -1.0

_ZERO_DISTANCE = 1e-12


def _rotate90(u: np.ndarray) -> np.ndarray:
    return np.array([-u[1], u[0]])


def _check_rays(wall_rays: Sequence[WallRays], minimum: int, solver: str) -> None:
    for i, (ceiling, floor) in enumerate(wall_rays):
        if len(ceiling) < minimum or len(floor) < minimum:
            raise SolverError(
                f"wall {i} needs >= {minimum} rays per line, got "
                f"{len(ceiling)} ceiling and {len(floor)} floor",
                solver=solver,
            )


# =============================================================================
# Manhattan
# =============================================================================

def build_manhattan_system(wall_rays: Sequence[WallRays], classes: Sequence[int]) -> np.ndarray:
    """Rows over (u, v, w, d_1..d_N); orthogonal-class rows act on J u, J v, J w."""
    n = len(wall_rays)
    blocks = []
    for i, ((ceiling, floor), cls) in enumerate(zip(wall_rays, classes)):
        rows = build_wall_system(ceiling, floor)
        block = np.zeros((rows.shape[0], 6 + n))
        block[:, 0:6] = rows[:, 0:6] @ _PERP if cls else rows[:, 0:6]
        block[:, 6 + i] = rows[:, 6]
        blocks.append(block)
    return np.vstack(blocks)


def solve_manhattan(
    wall_rays: Sequence[WallRays],
    classes: Sequence[int],
    options: Optional[SolverOptions] = None,
) -> LayoutSolution:
    """
    Manhattan layout from per-wall rays and per-wall direction classes.

    Class 0 walls run along the shared direction u, class 1 walls along
    u rotated by +90 degrees. A wall whose solved distance comes out
    negative is the same plane with its direction reversed. The result
    is then refined by :func:`refine_layout` with the axis shared.

    Raises:
        SolverError: With fewer than 4 walls or too few rays.
        DegenerateConfigurationError, NoRealSolutionError: From the null space.
        InfeasibleLayoutError: If a wall plane passes through the camera axis,
            or the refined layout has d_i <= 0 or h_c <= h_f.
    """
    options = options or SolverOptions()
    n = len(wall_rays)
    if n < 4:
        raise SolverError(f"Manhattan layout needs >= 4 walls, got {n}", solver="manhattan")
    if len(classes) != n:
        raise SolverError(f"{len(classes)} classes for {n} walls", solver="manhattan")
    _check_rays(wall_rays, MIN_RAYS_PER_LINE, "manhattan")

    system = build_manhattan_system(wall_rays, classes)
    nsp = null_space(system, dim=2, rank_tol=options.rank_tol, solver="manhattan")
    root = solve_lambda(nsp, lambda_tol=options.lambda_tol, solver="manhattan")

    u = root.vector[0:2]
    scale = float(np.max(np.abs(root.vector[6:])))
    walls: List[Wall] = []
    for i, cls in enumerate(classes):
        direction = _rotate90(u) if cls else u
        d = float(root.vector[6 + i])
        if abs(d) <= _ZERO_DISTANCE * max(scale, 1.0):
            raise InfeasibleLayoutError(
                "wall passes through the camera axis", solver="manhattan", wall_index=i
            )
        if d < 0:
            direction, d = -direction, -d
        walls.append(Wall(frame=WallFrame.from_direction(direction), d=d, h_c=root.h_c, h_f=root.h_f))

    h_c, h_f = root.h_c, root.h_f
    spectra = {"manhattan": nsp.singular_values.tolist()}
    steps = 0
    if options.refine_iterations > 0:
        refined = refine_layout(wall_rays, [w.u for w in walls], h_c, h_f, options, classes=classes)
        h_c, h_f = refined.h_c, refined.h_f
        walls = _checked_walls(refined.frames, refined.distances, h_c, h_f, "manhattan")
        spectra["refinement"] = refined.spectrum.tolist()
        steps = refined.steps

    diagnostics = SolverDiagnostics(
        spectra=spectra,
        lambda_root=root.lam,
        lambda_gap=root.gap,
        lambda_consistent=root.consistent,
        approximate_roots=not root.exact,
        residuals=[wall_residual(w, *rays) for w, rays in zip(walls, wall_rays)],
        classes=[int(c) for c in classes],
        refine_steps=steps,
    )
    logger.debug(
        f"Manhattan: {n} walls, h_c={h_c:.4f} h_f={h_f:.4f}, "
        f"max residual {diagnostics.max_residual:.2e}"
    )
    return LayoutSolution(
        walls=walls,
        h_c=h_c,
        h_f=h_f,
        mode=LayoutMode.MANHATTAN,
        diagnostics=diagnostics,
        parallel_tol=options.parallel_tol,
    )


# =============================================================================
# Atlanta
# =============================================================================

def _atlanta_blocks(wall_arrays, frames: Sequence[WallFrame]) -> np.ndarray:
    n = len(wall_arrays)
    blocks = []
    for i, (lines, frame) in enumerate(zip(wall_arrays, frames)):
        rot = frame.matrix
        for (directions, moments), column in zip(lines, (1, 2)):
            local_d, local_m = directions @ rot.T, moments @ rot.T
            block = np.zeros((directions.shape[0], 3 + n))
            block[:, 0] = local_m[:, 0]
            block[:, column] = local_d[:, 1]
            block[:, 3 + i] = -local_d[:, 2]
            blocks.append(block)
    return np.vstack(blocks)


def build_atlanta_system(
    wall_rays: Sequence[WallRays],
    frames: Sequence[WallFrame],
) -> np.ndarray:
    """
    Rows over (1, h_c, h_f, d_1..d_N) in each wall's own frame:

        xb'_1 + h x'_2 - d_i x'_3 = 0
    """
    return _atlanta_blocks([(ray_arrays(c), ray_arrays(f)) for c, f in wall_rays], frames)


def build_atlanta_noise(
    wall_rays: Sequence[WallRays],
    frames: Sequence[WallFrame],
) -> np.ndarray:
    """Elevation-noise rows matching :func:`build_atlanta_system` row for row."""
    return _atlanta_blocks(
        [(elevation_tangents(c), elevation_tangents(f)) for c, f in wall_rays], frames
    )


def _atlanta_pass(
    wall_rays: Sequence[WallRays],
    directions: Sequence[Sequence[float]],
    options: SolverOptions,
) -> Tuple[List[WallFrame], float, float, np.ndarray, np.ndarray]:
    """One pinned solve: (frames, h_c, h_f, distances, spectrum)."""
    frames = [WallFrame.from_direction(u) for u in directions]
    raw = build_atlanta_system(wall_rays, frames)

    if options.errors_in_variables:
        noise = build_atlanta_noise(wall_rays, frames)
        q, s = weighted_null_vector(raw, noise, options.rank_tol, "atlanta")
        if abs(q[0]) < options.pinning_tol:
            raise PinningError(float(abs(q[0])), options.pinning_tol)
        params = q[1:] / q[0]
    else:
        system = normalize_rows(raw)
        _, s, vt = np.linalg.svd(system, full_matrices=False)
        ratio = s[-2] / s[0] if s[0] > 0 else 0.0
        if ratio < options.rank_tol:
            raise DegenerateConfigurationError("atlanta", float(ratio), options.rank_tol, 1)
        v_min = vt[-1] / np.linalg.norm(vt[-1])
        if abs(v_min[0]) < options.pinning_tol:
            raise PinningError(float(abs(v_min[0])), options.pinning_tol)
        # pin the first component to 1 and move its column to the right-hand side
        params, *_ = np.linalg.lstsq(system[:, 1:], -system[:, 0], rcond=None)

    return frames, float(params[0]), float(params[1]), np.asarray(params[2:]), s


def _check_heights(h_c: float, h_f: float, solver: str) -> None:
    if h_c <= h_f:
        raise InfeasibleLayoutError(f"ceiling {h_c:.4g} below floor {h_f:.4g}", solver=solver)


def refit_wall(
    ceiling_rays: Sequence[PluckerLine],
    floor_rays: Sequence[PluckerLine],
    h_c: float,
    h_f: float,
    options: Optional[SolverOptions] = None,
    solver: str = "refit",
) -> Tuple[np.ndarray, float]:
    """
    Direction and distance of one wall with both heights held fixed.

    With v = h_c u and w = h_f u substituted every ray is linear in
    (u_x, u_y, d); the wall is the null vector of those rows, oriented so
    that d > 0.

    Raises:
        DegenerateConfigurationError: If the rays leave more than one null direction.
        InfeasibleLayoutError: If the null vector has no horizontal direction.
    """
    options = options or SolverOptions()
    lines = [(r, h) for r, h in ((ceiling_rays, h_c), (floor_rays, h_f)) if len(r)]
    system = np.vstack([_fixed_height_rows(*ray_arrays(r), h) for r, h in lines])
    if options.errors_in_variables:
        noise = np.vstack([_fixed_height_rows(*elevation_tangents(r), h) for r, h in lines])
        q, _ = weighted_null_vector(system, noise, options.rank_tol, solver)
    else:
        q = null_space(system, dim=1, rank_tol=options.rank_tol, solver=solver).basis[0]

    norm = float(np.linalg.norm(q[:2]))
    if norm <= _ZERO_DISTANCE:
        raise InfeasibleLayoutError("refit wall has no horizontal direction", solver=solver)
    u, d = q[:2] / norm, float(q[2]) / norm
    if d < 0:
        u, d = -u, -d
    return u, d


def _fixed_height_rows(directions: np.ndarray, moments: np.ndarray, h: float) -> np.ndarray:
    """xb1 u_x + xb2 u_y + h (x2 u_x - x1 u_y) - x3 d over (u_x, u_y, d)."""
    return np.column_stack([
        moments[:, 0] + h * directions[:, 1],
        moments[:, 1] - h * directions[:, 0],
        -directions[:, 2],
    ])


def manhattan_directions(
    directions: Sequence[Sequence[float]],
    classes: Sequence[int],
    weights: Optional[Sequence[float]] = None,
) -> List[np.ndarray]:
    """
    Snap per-wall directions onto one shared Manhattan axis.

    The axis is the weighted circular mean of the doubled angles, with
    class 1 walls turned back by 90 degrees. Each wall keeps the sign of
    its own direction.
    """
    u = np.asarray(directions, dtype=np.float64)
    w = np.ones(len(u)) if weights is None else np.asarray(weights, dtype=np.float64)
    theta = np.arctan2(u[:, 1], u[:, 0]) - np.asarray(classes) * (np.pi / 2)
    axis = 0.5 * float(np.angle((w * np.exp(2j * theta)).sum()))
    base = np.array([np.cos(axis), np.sin(axis)])
    snapped = []
    for direction, cls in zip(u, classes):
        snap = _rotate90(base) if cls else base
        snapped.append(snap if snap @ direction >= 0 else -snap)
    return snapped


class _Refined(NamedTuple):
    frames: List[WallFrame]
    h_c: float
    h_f: float
    distances: np.ndarray
    spectrum: np.ndarray
    steps: int


def refine_layout(
    wall_rays: Sequence[WallRays],
    directions: Sequence[Sequence[float]],
    h_c: float,
    h_f: float,
    options: SolverOptions,
    classes: Optional[Sequence[int]] = None,
) -> _Refined:
    """
    Alternate per-wall refits at fixed heights with pinned joint solves.

    Each step refits every wall's direction from its own rays at the
    current heights (snapped to the Manhattan axis when ``classes`` is
    given) and re-solves heights and distances. Stops after
    ``options.refine_iterations`` steps or once no direction moves by more
    than REFINE_CONVERGED.
    """
    weights = [len(c) + len(f) for c, f in wall_rays]
    current = [np.asarray(u, dtype=np.float64)[:2] for u in directions]
    result = None
    for step in range(1, options.refine_iterations + 1):
        _check_heights(h_c, h_f, "refine")
        refit = [
            refit_wall(c, f, h_c, h_f, options, solver=f"wall {i}")[0]
            for i, (c, f) in enumerate(wall_rays)
        ]
        if classes is not None:
            refit = manhattan_directions(refit, classes, weights)
        change = max(abs(cross2d(a, b)) / np.linalg.norm(a) for a, b in zip(current, refit))
        current = refit
        frames, h_c, h_f, distances, spectrum = _atlanta_pass(wall_rays, current, options)
        result = _Refined(frames, h_c, h_f, distances, spectrum, step)
        if change < C.REFINE_CONVERGED:
            break
    if result is not None:
        logger.debug(f"Refinement: {result.steps} step(s), h_c={h_c:.4f} h_f={h_f:.4f}")
    return result


def _checked_walls(frames, distances, h_c: float, h_f: float, solver: str) -> List[Wall]:
    bad = np.flatnonzero(np.asarray(distances) <= 0)
    if bad.size:
        raise InfeasibleLayoutError(
            f"negative wall distance {distances[bad[0]]:.4g}", solver=solver, wall_index=int(bad[0])
        )
    _check_heights(h_c, h_f, solver)
    return [Wall(frame=f, d=float(d), h_c=h_c, h_f=h_f) for f, d in zip(frames, distances)]


def solve_atlanta(
    wall_rays: Sequence[WallRays],
    wall_directions: Sequence[Sequence[float]],
    options: Optional[SolverOptions] = None,
) -> LayoutSolution:
    """
    Atlanta layout from per-wall rays and known per-wall directions.

    Directions must be oriented with the wall normal e3 x e1 pointing away
    from the camera (as :func:`solve_wall_overdetermined` returns them).
    The pinned solve is followed by ``options.refine_iterations`` rounds
    of :func:`refine_layout`, which also corrects the given directions.

    Raises:
        SolverError: With fewer than 3 walls or too few rays.
        DegenerateConfigurationError: If the system has more than one null direction.
        PinningError: If the null vector's first component is near zero.
        InfeasibleLayoutError: If any d_i <= 0 or h_c <= h_f.
    """
    options = options or SolverOptions()
    n = len(wall_rays)
    if n < 3:
        raise SolverError(f"Atlanta layout needs >= 3 walls, got {n}", solver="atlanta")
    if len(wall_directions) != n:
        raise SolverError(f"{len(wall_directions)} directions for {n} walls", solver="atlanta")
    _check_rays(wall_rays, 2, "atlanta")

    frames, h_c, h_f, distances, s = _atlanta_pass(wall_rays, wall_directions, options)
    spectra = {"atlanta": s.tolist()}
    steps = 0
    if options.refine_iterations > 0:
        _check_heights(h_c, h_f, "atlanta")
        refined = refine_layout(wall_rays, [f.direction2d for f in frames], h_c, h_f, options)
        frames, h_c, h_f, distances = refined.frames, refined.h_c, refined.h_f, refined.distances
        spectra["refinement"] = refined.spectrum.tolist()
        steps = refined.steps

    walls = _checked_walls(frames, distances, h_c, h_f, "atlanta")
    diagnostics = SolverDiagnostics(
        spectra=spectra,
        residuals=[wall_residual(w, *rays) for w, rays in zip(walls, wall_rays)],
        refine_steps=steps,
    )
    logger.debug(
        f"Atlanta: {n} walls, h_c={h_c:.4f} h_f={h_f:.4f}, "
        f"max residual {diagnostics.max_residual:.2e}"
    )
    return LayoutSolution(
        walls=walls,
        h_c=h_c,
        h_f=h_f,
        mode=LayoutMode.ATLANTA,
        diagnostics=diagnostics,
        parallel_tol=options.parallel_tol,
    )
