"""
PanoLayout Solvers

Linear wall systems, single-wall minimal and over-determined solvers, the
Manhattan and Atlanta joint solvers and the reconstruction pipeline.
"""

from panolayout.solvers.directions import DirectionClasses, estimate_direction_classes
from panolayout.solvers.joint import solve_atlanta, solve_manhattan
from panolayout.solvers.minimal import select_candidate, solve_wall_minimal
from panolayout.solvers.nullspace import LambdaRoot, null_space, solve_lambda
from panolayout.solvers.pipeline import reconstruct_layout
from panolayout.solvers.single_wall import fit_wall, solve_wall_overdetermined
from panolayout.solvers.solution import (
    LayoutSolution,
    NullSpaceParam,
    SolverDiagnostics,
    SolverOptions,
    WallCandidate,
    WallSolutionVector,
)
from panolayout.solvers.wall_system import build_wall_system

__all__ = [
    "DirectionClasses",
    "LambdaRoot",
    "LayoutSolution",
    "NullSpaceParam",
    "SolverDiagnostics",
    "SolverOptions",
    "WallCandidate",
    "WallSolutionVector",
    "build_wall_system",
    "estimate_direction_classes",
    "fit_wall",
    "null_space",
    "reconstruct_layout",
    "select_candidate",
    "solve_atlanta",
    "solve_lambda",
    "solve_manhattan",
    "solve_wall_minimal",
    "solve_wall_overdetermined",
]
