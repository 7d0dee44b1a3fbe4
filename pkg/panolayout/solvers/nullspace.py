"""
Null Space and Parallelism Enforcement

SVD null spaces of the (row-normalised) ray systems, and the pair of
quadratics that pick the member of a two-vector null space whose v and w
are parallel to u.
"""

from __future__ import annotations

from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from loguru import logger

from panolayout.exceptions import (
    DegenerateConfigurationError,
    InfeasibleLayoutError,
    NoRealSolutionError,
)
from panolayout.solvers.solution import NullSpaceParam, cross2d
from panolayout.solvers.wall_system import normalize_rows

_LINEAR_EPS = 1e-12
_NOISE_RANK_EPS = 1e-12


def null_space(matrix: np.ndarray, dim: int, rank_tol: float, solver: str) -> NullSpaceParam:
    """
    The ``dim`` right singular vectors of smallest singular value.

    Rows are normalised first, which makes the result independent of the
    scale of each ray.

    Raises:
        DegenerateConfigurationError: If the next singular value is also
            null, i.e. sigma_(dim+1 smallest) / sigma_max < rank_tol.
    """
    a = normalize_rows(np.asarray(matrix, dtype=np.float64))
    n_cols = a.shape[1]
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    spectrum = np.zeros(n_cols)
    spectrum[:s.size] = s

    ratio = spectrum[n_cols - dim - 1] / spectrum[0] if spectrum[0] > 0 else 0.0
    if ratio < rank_tol:
        raise DegenerateConfigurationError(solver, float(ratio), rank_tol, dim)

    basis = vt[n_cols - dim:][::-1].copy()
    return NullSpaceParam(basis=basis, singular_values=spectrum)


def weighted_null_vector(
    matrix: np.ndarray,
    noise: np.ndarray,
    rank_tol: float,
    solver: str,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Unit vector q minimising |A q| / |G q|, with G the elevation-noise rows of A.

    Elevation noise adds about sigma^2 |G q|^2 to |A q|^2, which a plain
    smallest singular vector trades against the length of the metric
    unknowns. Both matrices are scaled by the norms of A's rows.

    Returns:
        (q, spectrum of the row-normalised A, descending)

    Raises:
        DegenerateConfigurationError: If A has more than one null direction
            or G is rank deficient.
    """
    a = np.asarray(matrix, dtype=np.float64)
    g = np.asarray(noise, dtype=np.float64)
    norms = np.linalg.norm(a, axis=1, keepdims=True)
    norms = np.where(norms > 0, norms, 1.0)
    a, g = a / norms, g / norms

    _, s, _ = np.linalg.svd(a, full_matrices=False)
    ratio = s[-2] / s[0] if s[0] > 0 else 0.0
    if ratio < rank_tol:
        raise DegenerateConfigurationError(solver, float(ratio), rank_tol, 1)

    _, sg, vgt = np.linalg.svd(g, full_matrices=False)
    noise_ratio = sg[-1] / sg[0] if sg[0] > 0 else 0.0
    if sg.size < a.shape[1] or noise_ratio <= _NOISE_RANK_EPS:
        raise DegenerateConfigurationError(solver, float(noise_ratio), _NOISE_RANK_EPS, 1)

    transform = vgt.T / sg
    _, _, vt = np.linalg.svd(a @ transform, full_matrices=False)
    q = transform @ vt[-1]
    return q / np.linalg.norm(q), s


# =============================================================================
# Quadratics
# =============================================================================

def quadratic_roots(a: float, b: float, c: float) -> Tuple[Optional[List[float]], bool]:
    """
    Real roots of a x^2 + b x + c.

    Returns:
        (roots, exact). ``roots`` is None when the polynomial vanishes
        identically. A negative discriminant yields the vertex -b / 2a
        with exact=False; a nonzero constant yields no roots.
    """
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        return None, True
    a, b, c = a / scale, b / scale, c / scale
    if abs(a) < _LINEAR_EPS:
        if abs(b) < _LINEAR_EPS:
            return [], False
        return [-c / b], True

    disc = b * b - 4.0 * a * c
    if disc < 0:
        return [-b / (2.0 * a)], False
    q = -0.5 * (b + np.copysign(np.sqrt(disc), b))
    if q == 0.0:
        return [0.0, 0.0], True
    return [q / a, c / q], True


def _cross_quadratic(p0, p1, q0, q1) -> Tuple[float, float, float]:
    """Coefficients (a, b, c) of cross(p0 + x p1, q0 + x q1) in x."""
    return (
        cross2d(p1, q1),
        cross2d(p0, q1) + cross2d(p1, q0),
        cross2d(p0, q0),
    )


class LambdaRoot(NamedTuple):
    """Chosen member W = W0 + lam W1 of a two-vector null space."""

    lam: float
    h_c: float
    h_f: float
    vector: np.ndarray      # gauge-fixed: |u| = 1, first d component >= 0
    lambda_v: float
    lambda_w: float
    gap: float
    consistent: bool
    exact: bool


def _pairings(roots_v, roots_w) -> List[Tuple[float, float]]:
    if roots_v is None and roots_w is None:
        return [(0.0, 0.0)]
    if roots_v is None:
        return [(r, r) for r in roots_w]
    if roots_w is None or not roots_w:
        return [(r, r) for r in roots_v]
    if not roots_v:
        return [(r, r) for r in roots_w]
    return [(rv, rw) for rv in roots_v for rw in roots_w]


def solve_lambda(
    nsp: NullSpaceParam,
    lambda_tol: float = 1e-3,
    solver: str = "lambda",
) -> LambdaRoot:
    """
    Enforce v || u and w || u on W = W0 + lam W1.

    Both cross(u, v) = 0 and cross(u, w) = 0 are quadratics in lam; their
    roots are paired by increasing |lam_v - lam_w| and the first pairing
    with the ceiling above the floor wins. Only the first six components
    (u, v, w) enter the quadratics; any further components are distances.

    Raises:
        ValueError: If the null space does not hold exactly two vectors.
        NoRealSolutionError: If neither quadratic has a real root.
        InfeasibleLayoutError: If no pairing puts the ceiling above the floor.
    """
    if nsp.dim != 2:
        raise ValueError(f"solve_lambda needs a 2-vector null space, got {nsp.dim}")
    w0, w1 = nsp.basis
    roots_v, exact_v = quadratic_roots(*_cross_quadratic(w0[0:2], w1[0:2], w0[2:4], w1[2:4]))
    roots_w, exact_w = quadratic_roots(*_cross_quadratic(w0[0:2], w1[0:2], w0[4:6], w1[4:6]))
    real_v = roots_v is None or (exact_v and bool(roots_v))
    real_w = roots_w is None or (exact_w and bool(roots_w))
    if not (real_v or real_w):
        raise NoRealSolutionError(solver)

    pairs = sorted(_pairings(roots_v, roots_w), key=lambda p: abs(p[0] - p[1]))
    for lambda_v, lambda_w in pairs:
        lam = 0.5 * (lambda_v + lambda_w)
        vec = w0 + lam * w1
        u = vec[0:2]
        nu = float(u @ u)
        if nu < _LINEAR_EPS:
            continue
        h_c = float(u @ vec[2:4]) / nu
        h_f = float(u @ vec[4:6]) / nu
        if h_c <= h_f:
            logger.debug(f"{solver}: root {lam:.6g} rejected (h_c={h_c:.4g} <= h_f={h_f:.4g})")
            continue

        vec = vec / np.sqrt(nu)
        if vec[6] < 0:
            vec = -vec
        gap = abs(lambda_v - lambda_w)
        consistent = gap <= lambda_tol * (1.0 + abs(lam))
        if not consistent:
            logger.warning(
                f"{solver}: quadratic roots disagree, |lambda_v - lambda_w| = {gap:.3e}"
            )
        return LambdaRoot(
            lam=lam,
            h_c=h_c,
            h_f=h_f,
            vector=vec,
            lambda_v=lambda_v,
            lambda_w=lambda_w,
            gap=gap,
            consistent=consistent,
            exact=real_v and real_w,
        )

    raise InfeasibleLayoutError("no root puts the ceiling above the floor", solver=solver)
