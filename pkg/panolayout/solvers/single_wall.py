"""
Over-determined Single-Wall Solver

Recovers one wall (direction, distance, ceiling and floor heights) from at
least three rays on each of its ceiling and floor lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from panolayout.exceptions import InfeasibleLayoutError, SolverError
from panolayout.geometry.plucker import PluckerLine
from panolayout.geometry.wall import Wall, WallFrame
from panolayout.solvers.nullspace import LambdaRoot, null_space, solve_lambda
from panolayout.solvers.solution import NullSpaceParam, SolverOptions
from panolayout.solvers.wall_system import build_wall_system, line_residuals

MIN_RAYS_PER_LINE = 3


@dataclass(frozen=True, eq=False)
class WallFit:
    """A single-wall solve with what it measured."""

    wall: Wall
    nullspace: NullSpaceParam
    root: LambdaRoot
    residual: float


def wall_residual(wall: Wall, ceiling_rays: Sequence[PluckerLine], floor_rays: Sequence[PluckerLine]) -> float:
    """Max |side| of the (unit-direction) rays against the wall's lines."""
    values = np.concatenate([
        line_residuals(ceiling_rays, wall.ceiling_line),
        line_residuals(floor_rays, wall.floor_line),
    ])
    return float(values.max()) if values.size else 0.0


def fit_wall(
    ceiling_rays: Sequence[PluckerLine],
    floor_rays: Sequence[PluckerLine],
    options: Optional[SolverOptions] = None,
    solver: str = "overdetermined",
) -> WallFit:
    """
    Solve one wall and keep the null space, root and residual.

    Raises:
        SolverError: With fewer than 3 rays on either line.
        DegenerateConfigurationError: If the rays leave more than a
            two-dimensional null space (e.g. every ray through one center).
        NoRealSolutionError, InfeasibleLayoutError: From the lambda step.
    """
    options = options or SolverOptions()
    if len(ceiling_rays) < MIN_RAYS_PER_LINE or len(floor_rays) < MIN_RAYS_PER_LINE:
        raise SolverError(
            f"need >= {MIN_RAYS_PER_LINE} rays per line, got "
            f"{len(ceiling_rays)} ceiling and {len(floor_rays)} floor",
            solver=solver,
        )

    system = build_wall_system(ceiling_rays, floor_rays)
    nsp = null_space(system, dim=2, rank_tol=options.rank_tol, solver=solver)
    root = solve_lambda(nsp, lambda_tol=options.lambda_tol, solver=solver)

    vec = root.vector
    if vec[6] <= 0:
        raise InfeasibleLayoutError("wall passes through the camera axis", solver=solver)
    wall = Wall(frame=WallFrame.from_direction(vec[0:2]), d=float(vec[6]), h_c=root.h_c, h_f=root.h_f)
    residual = wall_residual(wall, ceiling_rays, floor_rays)
    logger.debug(
        f"{solver}: d={wall.d:.4f} h_c={wall.h_c:.4f} h_f={wall.h_f:.4f} "
        f"lambda={root.lam:.3e} residual={residual:.2e}"
    )
    return WallFit(wall=wall, nullspace=nsp, root=root, residual=residual)


def solve_wall_overdetermined(
    ceiling_rays: Sequence[PluckerLine],
    floor_rays: Sequence[PluckerLine],
    options: Optional[SolverOptions] = None,
) -> Wall:
    """Wall seen by >= 3 ceiling rays and >= 3 floor rays."""
    return fit_wall(ceiling_rays, floor_rays, options).wall
