"""
Layout Reconstruction Pipeline

Boundary observation -> column segments -> per-wall ray bundles ->
per-wall directions -> joint Manhattan or Atlanta solve -> closed,
scaled floor plan.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from panolayout.constants import LayoutMode
from panolayout.exceptions import InfeasibleLayoutError, SolverError
from panolayout.geometry.camera import back_project_elevation
from panolayout.geometry.plucker import ProjectingRay
from panolayout.geometry.wall import Wall
from panolayout.scene.render import BoundaryObservation
from panolayout.scene.segmentation import ColumnRange, depth_jumps, segment_columns
from panolayout.solvers.directions import alternating_classes
from panolayout.solvers.joint import refit_wall, solve_atlanta, solve_manhattan
from panolayout.solvers.single_wall import WallFit, fit_wall
from panolayout.solvers.solution import LayoutSolution, SolverOptions, cross2d

WallRays = Tuple[List[ProjectingRay], List[ProjectingRay]]


def sample_columns(segment: ColumnRange, edge_margin: int, cap: int) -> np.ndarray:
    """Interior columns of a segment, thinned to at most ``cap`` by uniform stride."""
    cols = segment.interior(edge_margin)
    if cols.size > cap:
        idx = np.unique(np.round(np.linspace(0, cols.size - 1, cap)).astype(int))
        cols = cols[idx]
    return cols


def wall_ray_bundles(
    obs: BoundaryObservation,
    segments: Sequence[ColumnRange],
    options: SolverOptions,
) -> List[WallRays]:
    """Ceiling and floor projecting rays for every segment."""
    rig = obs.camera
    bundles = []
    for segment in segments:
        cols = sample_columns(segment, options.edge_margin, options.max_rays_per_line)
        ceiling = [back_project_elevation(rig, int(c), obs.theta_ceiling[c]) for c in cols]
        floor = [back_project_elevation(rig, int(c), obs.theta_floor[c]) for c in cols]
        bundles.append((ceiling, floor))
    return bundles


def _distance_along(wall: Wall, direction: np.ndarray) -> float:
    """Range from the origin to the wall's line along a 2D unit direction."""
    cos = float(wall.frame.normal2d @ direction)
    return wall.d / cos if cos > 0 else math.inf


def bridge_wall(before: Wall, after: Wall, azimuth: float) -> Wall:
    """
    Hidden wall between two parallel visible walls.

    It runs along the normal of the nearer wall (measured along the boundary
    azimuth) and passes through that wall's point on the boundary ray.
    """
    direction = np.array([math.cos(azimuth), math.sin(azimuth)])
    t_before = _distance_along(before, direction)
    t_after = _distance_along(after, direction)
    near = before if t_before <= t_after else after
    t = min(t_before, t_after)
    if not math.isfinite(t):
        raise InfeasibleLayoutError("occlusion boundary does not meet either wall")
    point = t * direction
    # the hidden wall's direction is the near wall's normal, so its own
    # normal is the near wall's direction
    normal = near.frame.direction2d
    return Wall.from_line2d(normal, float(normal @ point), near.h_c, near.h_f)


def close_layout(
    solution: LayoutSolution,
    segments: Sequence[ColumnRange],
    options: SolverOptions,
) -> LayoutSolution:
    """Insert hidden walls between parallel neighbours, recorded in diagnostics."""
    walls = solution.walls
    width = segments[0].width
    closed: List[Wall] = []
    bridged: List[int] = []
    for k, wall in enumerate(walls):
        prev = walls[k - 1]
        sin = abs(cross2d(prev.frame.normal2d, wall.frame.normal2d))
        if sin < options.parallel_tol:
            if not options.bridge_occlusions:
                raise InfeasibleLayoutError(
                    "adjacent walls are parallel", solver="pipeline", wall_index=k
                )
            azimuth = 2.0 * math.pi * (segments[k].start - 0.5) / width
            closed.append(bridge_wall(prev, wall, azimuth))
            bridged.append(len(closed) - 1)
        closed.append(wall)

    if bridged:
        logger.info(f"Bridged {len(bridged)} occluded wall(s) at positions {bridged}")
    solution.diagnostics.bridged = bridged
    return LayoutSolution(
        walls=closed,
        h_c=solution.h_c,
        h_f=solution.h_f,
        mode=solution.mode,
        diagnostics=solution.diagnostics,
        parallel_tol=solution.parallel_tol,
    )


def fit_walls(bundles: Sequence[WallRays], options: SolverOptions) -> List[Optional[WallFit]]:
    """
    Single-wall fits, with None for walls whose own fit failed.

    A short or badly conditioned wall still contributes its rays to the
    joint solve, so its failure is logged instead of raised.
    """
    fits: List[Optional[WallFit]] = []
    for i, (ceiling, floor) in enumerate(bundles):
        try:
            fits.append(fit_wall(ceiling, floor, options, solver=f"wall {i}"))
        except SolverError as e:
            logger.warning(f"Wall {i}: single-wall fit failed, left to the joint solve ({e})")
            fits.append(None)
    return fits


def complete_directions(
    bundles: Sequence[WallRays],
    fits: Sequence[Optional[WallFit]],
    options: SolverOptions,
) -> List[np.ndarray]:
    """
    A direction for every wall.

    Walls without a fit are refitted at the heights of an Atlanta solve
    over the walls that have one.

    Raises:
        SolverError: If fewer than 3 walls have a fit.
    """
    known = [i for i, fit in enumerate(fits) if fit is not None]
    if len(known) == len(fits):
        return [fit.wall.u for fit in fits]
    if len(known) < 3:
        raise SolverError(f"only {len(known)} walls have a direction estimate", solver="atlanta")

    partial = solve_atlanta([bundles[i] for i in known], [fits[i].wall.u for i in known], options)
    directions = []
    for i, fit in enumerate(fits):
        if fit is not None:
            directions.append(partial.walls[known.index(i)].u)
        else:
            u, _ = refit_wall(*bundles[i], partial.h_c, partial.h_f, options, solver=f"wall {i}")
            directions.append(u)
    return directions


def reconstruct_layout(
    obs: BoundaryObservation,
    mode: LayoutMode = LayoutMode.MANHATTAN,
    options: Optional[SolverOptions] = None,
) -> LayoutSolution:
    """
    Full reconstruction of one panorama's layout, in meters.

    Manhattan classes alternate around the room, except across boundaries
    whose depth jump marks an occlusion.

    Raises:
        SegmentationError: If fewer than 3 corners are detected.
        SolverError: Any solver failure; a non-simple polygon raises
            InfeasibleLayoutError.
    """
    options = options or SolverOptions()
    mode = LayoutMode(mode)

    segments = segment_columns(obs, options.corner_threshold, options.min_separation)
    bundles = wall_ray_bundles(obs, segments, options)
    fits = fit_walls(bundles, options)

    if mode is LayoutMode.MANHATTAN:
        # +1 at twice the jump threshold, -1 at a continuous corner
        occlusion = depth_jumps(obs, segments) / options.occlusion_jump - 1.0
        classes = alternating_classes(
            [None if fit is None else fit.wall.u for fit in fits],
            occlusion,
            options.class_ambiguity_deg,
            weights=[len(s) for s in segments],
        )
        solution = solve_manhattan(bundles, classes.classes, options)
        solution.diagnostics.ambiguous = classes.ambiguous
    else:
        solution = solve_atlanta(bundles, complete_directions(bundles, fits, options), options)

    for i, fit in enumerate(fits):
        if fit is not None:
            solution.diagnostics.spectra[f"wall_{i}"] = fit.nullspace.singular_values.tolist()
    solution.diagnostics.failed_fits = [i for i, fit in enumerate(fits) if fit is None]
    solution.diagnostics.n_segments = len(segments)

    solution = close_layout(solution, segments, options)
    layout = solution.layout  # validates simplicity and orientation
    logger.info(
        f"Reconstructed {mode.value} layout: {solution.n_walls} walls, "
        f"area {layout.area:.3f} m^2, h_c={solution.h_c:.3f} h_f={solution.h_f:.3f}"
    )
    return solution
