"""
Manhattan Direction Classes

Splits per-wall directions into the two Manhattan classes (along u or
along u rotated by 90 degrees), either from the directions alone or by
walking around the room, where consecutive walls alternate.
"""

import math
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from loguru import logger

from panolayout.constants import CLASS_AMBIGUITY_DEG
from panolayout.exceptions import SolverError


class DirectionClasses(NamedTuple):
    u_global: np.ndarray     # unit 2D vector
    classes: List[int]       # 0: along u_global, 1: along its perpendicular
    ambiguous: List[int]     # walls within the margin of the 45 degree boundary


def _weights(n: int, weights: Optional[Sequence[float]]) -> np.ndarray:
    if weights is None:
        return np.ones(n)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,) or np.any(w < 0):
        raise SolverError(f"need {n} non-negative weights", solver="directions")
    return w


def estimate_direction_classes(
    per_wall_u: Sequence[Sequence[float]],
    ambiguity_deg: float = CLASS_AMBIGUITY_DEG,
    weights: Optional[Sequence[float]] = None,
) -> DirectionClasses:
    """
    Global Manhattan direction and per-wall class.

    Angles are multiplied by 4, which maps u, -u, u_perp and -u_perp to the
    same point of the circle; the (weighted) circular mean divided by 4 is
    the global direction, turned by a multiple of 90 degrees to lie closest
    to the first wall.

    Raises:
        SolverError: With fewer than 2 walls.
    """
    if len(per_wall_u) < 2:
        raise SolverError(f"need >= 2 walls, got {len(per_wall_u)}", solver="directions")
    u = np.asarray(per_wall_u, dtype=np.float64)
    theta = np.arctan2(u[:, 1], u[:, 0])
    w = _weights(theta.size, weights)

    resultant = (w * np.exp(4j * theta)).sum()
    if abs(resultant) < 1e-12 * w.sum():
        mean = float(theta[0])
    else:
        mean = float(np.angle(resultant)) / 4.0
        mean += round((theta[0] - mean) / (math.pi / 2)) * (math.pi / 2)

    # offset of each wall from u_global, folded into [-pi/2, pi/2)
    delta = (theta - mean + math.pi / 2) % math.pi - math.pi / 2
    classes = [int(abs(x) >= math.pi / 4) for x in delta]

    margin = math.radians(ambiguity_deg)
    ambiguous = [i for i, x in enumerate(delta) if abs(abs(x) - math.pi / 4) < margin]
    if ambiguous:
        logger.warning(f"Walls {ambiguous} lie near the 45 degree class boundary")

    return DirectionClasses(
        u_global=np.array([math.cos(mean), math.sin(mean)]),
        classes=classes,
        ambiguous=ambiguous,
    )


def alternating_classes(
    per_wall_u: Sequence[Optional[Sequence[float]]],
    occlusion: Sequence[float],
    ambiguity_deg: float = CLASS_AMBIGUITY_DEG,
    weights: Optional[Sequence[float]] = None,
) -> DirectionClasses:
    """
    Manhattan classes for walls listed in order around the room.

    Wall k keeps the class of wall k-1 (an occluded wall lies between two
    parallel walls) when the boundary evidence ``occlusion[k]`` in [-1, 1]
    plus the direction evidence is positive, and takes the other class
    otherwise. Direction evidence is 1 - 2 |sin(turn)| between the two
    walls' measured directions, or 0 when either is None. If the decisions
    do not close around the cycle, the one with the smallest margin is
    flipped. Walls whose direction sits closer to the other class than the
    ambiguity margin allows are reported as ambiguous.

    Raises:
        SolverError: With fewer than 2 walls or mismatched lengths.
    """
    n = len(occlusion)
    if n < 2 or len(per_wall_u) != n:
        raise SolverError(
            f"need >= 2 walls with one boundary score each, got {len(per_wall_u)} and {n}",
            solver="directions",
        )
    w = _weights(n, weights)
    theta = np.array([math.nan if u is None else math.atan2(u[1], u[0]) for u in per_wall_u])

    evidence = np.clip(np.asarray(occlusion, dtype=np.float64), -1.0, 1.0)
    for k in range(n):
        turn = theta[k] - theta[k - 1]
        if not math.isnan(turn):
            evidence[k] += 1.0 - 2.0 * abs(math.sin(turn))
    parallel = evidence > 0
    if np.count_nonzero(~parallel) % 2:
        k = int(np.argmin(np.abs(evidence)))
        parallel[k] = not parallel[k]
        logger.warning(f"Wall classes do not close around the room; boundary {k} flipped")

    classes = [0]
    for k in range(1, n):
        classes.append(classes[-1] if parallel[k] else 1 - classes[-1])

    known = ~np.isnan(theta)
    folded = theta[known] - np.asarray(classes)[known] * (math.pi / 2)
    resultant = (w[known] * np.exp(2j * folded)).sum()
    axis = 0.5 * float(np.angle(resultant)) if abs(resultant) > 0 else 0.0

    margin = math.radians(ambiguity_deg)
    ambiguous = []
    for k in np.flatnonzero(known):
        delta = (theta[k] - classes[k] * math.pi / 2 - axis + math.pi / 2) % math.pi - math.pi / 2
        if abs(delta) > math.pi / 4 - margin:
            ambiguous.append(int(k))
    if ambiguous:
        logger.warning(f"Walls {ambiguous} disagree with their alternating class")

    return DirectionClasses(
        u_global=np.array([math.cos(axis), math.sin(axis)]),
        classes=classes,
        ambiguous=ambiguous,
    )
