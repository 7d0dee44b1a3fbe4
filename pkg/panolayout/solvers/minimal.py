"""
Minimal Single-Wall Solver

Two ceiling rays and two floor rays leave a three-dimensional null space
W = W0 + l1 W1 + l2 W2. The parallelism constraints u x v = 0 and
u x w = 0 are two conics in (l1, l2); their Sylvester resultant in l2 is a
quartic in l1, so there are at most four real solutions.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from panolayout.exceptions import DegenerateConfigurationError, InfeasibleLayoutError, SolverError
from panolayout.geometry.plucker import PluckerLine
from panolayout.solvers.nullspace import null_space
from panolayout.solvers.solution import (
    NullSpaceParam,
    SolverOptions,
    WallCandidate,
    WallSolutionVector,
    cross2d,
)
from panolayout.solvers.single_wall import wall_residual
from panolayout.solvers.wall_system import build_wall_system

_IMAG_TOL = 1e-6
_DENOM_EPS = 1e-12
_DEGENERATE_U = 1e-9
_DUPLICATE_TOL = 1e-9
_NEWTON_STEPS = 4
_RESULTANT_TOL = 1e-12


def _conic_coefficients(nsp: NullSpaceParam, block: slice) -> Tuple[Polynomial, Polynomial, Polynomial]:
    """
    cross(u, x) for x = v or w, written as c2 l2^2 + c1(l1) l2 + c0(l1).
    """
    (u0, u1, u2) = (b[0:2] for b in nsp.basis)
    (x0, x1, x2) = (b[block] for b in nsp.basis)
    c2 = Polynomial([cross2d(u2, x2)])
    c1 = Polynomial([
        cross2d(u0, x2) + cross2d(u2, x0),
        cross2d(u1, x2) + cross2d(u2, x1),
    ])
    c0 = Polynomial([
        cross2d(u0, x0),
        cross2d(u0, x1) + cross2d(u1, x0),
        cross2d(u1, x1),
    ])
    return c2, c1, c0


def _constraints(nsp: NullSpaceParam, l1: float, l2: float) -> Tuple[np.ndarray, np.ndarray]:
    """(f, g) and their Jacobian at (l1, l2)."""
    b0, b1, b2 = nsp.basis
    vec = b0 + l1 * b1 + l2 * b2
    u, v, w = vec[0:2], vec[2:4], vec[4:6]
    f = cross2d(u, v)
    g = cross2d(u, w)
    jac = np.array([
        [cross2d(b1[0:2], v) + cross2d(u, b1[2:4]), cross2d(b2[0:2], v) + cross2d(u, b2[2:4])],
        [cross2d(b1[0:2], w) + cross2d(u, b1[4:6]), cross2d(b2[0:2], w) + cross2d(u, b2[4:6])],
    ])
    return np.array([f, g]), jac


def _polish(nsp: NullSpaceParam, l1: float, l2: float) -> Tuple[float, float]:
    x = np.array([l1, l2])
    value, _ = _constraints(nsp, *x)
    for _ in range(_NEWTON_STEPS):
        _, jac = _constraints(nsp, *x)
        try:
            step = np.linalg.solve(jac, -value)
        except np.linalg.LinAlgError:
            break
        candidate = x + step
        new_value, _ = _constraints(nsp, *candidate)
        if np.max(np.abs(new_value)) >= np.max(np.abs(value)):
            break
        x, value = candidate, new_value
    return float(x[0]), float(x[1])


def _second_parameter(a, b, l1: float) -> List[float]:
    """l2 values sharing the root l1 between the two conics."""
    a2, a1, a0 = (p(l1) for p in a)
    b2, b1, b0 = (p(l1) for p in b)
    denom = b2 * a1 - a2 * b1
    scale = max(abs(a2), abs(a1), abs(a0), abs(b2), abs(b1), abs(b0), 1e-300)
    if abs(denom) > _DENOM_EPS * scale * scale:
        return [-(b2 * a0 - a2 * b0) / denom]
    # conics proportional in l2 at this l1: take f's roots that best satisfy g
    roots = Polynomial([a0, a1, a2]).roots()
    real = [float(r.real) for r in roots if abs(r.imag) <= _IMAG_TOL * (1 + abs(r))]
    if not real:
        return []
    residual = [abs(b2 * r * r + b1 * r + b0) for r in real]
    return [real[int(np.argmin(residual))]]


def solve_wall_minimal(
    ceiling_rays: Sequence[PluckerLine],
    floor_rays: Sequence[PluckerLine],
    options: Optional[SolverOptions] = None,
) -> List[WallCandidate]:
    """
    All real walls consistent with exactly two ceiling and two floor rays.

    Candidates are gauge-fixed (|u| = 1, d >= 0); those with the ceiling
    below the floor are returned with ``feasible=False``.

    Raises:
        SolverError: Unless given exactly 2 + 2 rays.
        DegenerateConfigurationError: If the null space exceeds three
            dimensions (e.g. a duplicated ray) or the resultant vanishes
            identically (ceiling and floor rays from the same columns).
    """
    options = options or SolverOptions()
    if len(ceiling_rays) != 2 or len(floor_rays) != 2:
        raise SolverError(
            f"minimal solver needs 2 + 2 rays, got {len(ceiling_rays)} + {len(floor_rays)}",
            solver="minimal",
        )
    system = build_wall_system(ceiling_rays, floor_rays)
    nsp = null_space(system, dim=3, rank_tol=options.rank_tol, solver="minimal")

    a = _conic_coefficients(nsp, slice(2, 4))
    b = _conic_coefficients(nsp, slice(4, 6))
    a2, a1, a0 = a
    b2, b1, b0 = b
    resultant = (a2 * b0 - a0 * b2) ** 2 - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1)
    # quartic in the conic coefficients; if it vanishes relative to them the
    # conics share a component and every l1 is a root
    scale = max(float(np.max(np.abs(p.coef))) for p in (*a, *b))
    ratio = float(np.max(np.abs(resultant.coef))) / scale**4 if scale > 0 else 0.0
    if ratio < _RESULTANT_TOL:
        raise DegenerateConfigurationError("minimal", ratio, _RESULTANT_TOL, 3)

    candidates: List[WallCandidate] = []
    vectors: List[np.ndarray] = []
    for root in resultant.trim().roots() if resultant.degree() > 0 else []:
        if abs(root.imag) > _IMAG_TOL * (1 + abs(root)):
            continue
        l1 = float(root.real)
        for l2 in _second_parameter(a, b, l1):
            l1p, l2p = _polish(nsp, l1, l2)
            vec = nsp.combine([l1p, l2p])
            if np.linalg.norm(vec[0:2]) < _DEGENERATE_U * np.linalg.norm(vec):
                # u = 0 satisfies both constraints trivially
                continue
            sol = WallSolutionVector.from_vector(vec).gauged()
            gauged = sol.as_vector()
            if any(np.max(np.abs(gauged - other)) < _DUPLICATE_TOL for other in vectors):
                continue
            vectors.append(gauged)
            candidates.append(WallCandidate(
                u=(float(sol.u[0]), float(sol.u[1])),
                d=sol.d,
                h_c=sol.h_c,
                h_f=sol.h_f,
                feasible=bool(sol.h_c > sol.h_f and sol.d > 0),
                parallel_residual=sol.parallel_residual(),
            ))
    return candidates[:4]


def select_candidate(
    candidates: Sequence[WallCandidate],
    ceiling_rays: Sequence[PluckerLine],
    floor_rays: Sequence[PluckerLine],
) -> WallCandidate:
    """
    The feasible candidate that best fits extra rays (smallest max |side|).

    Raises:
        InfeasibleLayoutError: If no candidate is feasible.
    """
    feasible = [c for c in candidates if c.feasible]
    if not feasible:
        raise InfeasibleLayoutError("no feasible minimal-solver candidate", solver="minimal")
    scores = [wall_residual(c.to_wall(), ceiling_rays, floor_rays) for c in feasible]
    return feasible[int(np.argmin(scores))]
