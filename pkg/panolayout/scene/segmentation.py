"""
Column Segmentation

Turns the per-column corner probability into one contiguous (circular)
column range per visible wall, and measures the depth jump at every
range boundary.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from panolayout.constants import OCCLUSION_GAP, OCCLUSION_WINDOW
from panolayout.exceptions import SegmentationError
from panolayout.scene.render import BoundaryObservation


@dataclass(frozen=True)
class ColumnRange:
    """
    Half-open column range [start, stop) on a circular image of ``width``.

    ``stop`` may exceed ``width`` when the range wraps past column 0.
    """

    start: int
    stop: int
    width: int

    def __len__(self) -> int:
        return self.stop - self.start

    def columns(self) -> np.ndarray:
        return np.arange(self.start, self.stop) % self.width

    def interior(self, margin: int) -> np.ndarray:
        """Columns with ``margin`` dropped at both ends, kept when too short."""
        cols = self.columns()
        if margin <= 0 or cols.size <= 2 * margin + 2:
            return cols
        return cols[margin:cols.size - margin]


def circular_distance(a: int, b: int, width: int) -> int:
    d = abs(a - b) % width
    return min(d, width - d)


def detect_corners(corner_prob: np.ndarray, threshold: float, min_separation: int) -> np.ndarray:
    """
    Corner columns: values above ``threshold`` thinned by greedy
    non-maximum suppression within ``min_separation`` columns (circular).
    """
    width = corner_prob.shape[0]
    candidates = np.flatnonzero(corner_prob > threshold)
    # strongest first; stable sort keeps lower columns first on ties
    order = candidates[np.argsort(-corner_prob[candidates], kind="stable")]
    kept: List[int] = []
    for col in order:
        if all(circular_distance(int(col), k, width) >= min_separation for k in kept):
            kept.append(int(col))
    return np.array(sorted(kept), dtype=int)


def segment_columns(
    obs: BoundaryObservation,
    threshold: float = 0.5,
    min_separation: int = 3,
) -> List[ColumnRange]:
    """
    Split the circular column domain into one range per wall.

    Each detected corner column starts a new wall segment.

    Raises:
        ValueError: If threshold is outside (0, 1).
        SegmentationError: If fewer than 3 corners are found.
    """
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    if min_separation < 1:
        raise ValueError(f"min_separation must be >= 1, got {min_separation}")

    corners = detect_corners(obs.corner_prob, threshold, min_separation)
    if corners.size < 3:
        raise SegmentationError(int(corners.size))

    width = obs.width
    segments = []
    for i, start in enumerate(corners):
        stop = corners[i + 1] if i + 1 < corners.size else corners[0] + width
        segments.append(ColumnRange(int(start), int(stop), width))
    return segments


def _side_columns(segment: ColumnRange, gap: int, window: int, from_end: bool) -> np.ndarray:
    cols = segment.columns()
    if from_end:
        cols = cols[::-1]
    skip = min(gap, cols.size - 1)
    return cols[skip:skip + window]


def depth_jumps(
    obs: BoundaryObservation,
    segments: List[ColumnRange],
    gap: int = OCCLUSION_GAP,
    window: int = OCCLUSION_WINDOW,
) -> np.ndarray:
    """
    |log| of the depth ratio across the start of every segment.

    Both boundaries give depth up to the unknown height, t = h / tan(theta),
    so the ratio of tan(theta) on either side of a boundary is a depth
    ratio. It stays near 1 at a corner and moves away from 1 where a nearer
    wall hides part of the room. Each side averages ``window`` columns
    after skipping ``gap`` columns next to the boundary.
    """
    log_c = np.log(np.tan(obs.theta_ceiling))
    log_f = np.log(np.tan(-obs.theta_floor))
    jumps = np.zeros(len(segments))
    for k, segment in enumerate(segments):
        left = _side_columns(segments[k - 1], gap, window, from_end=True)
        right = _side_columns(segment, gap, window, from_end=False)
        jump_c = log_c[left].mean() - log_c[right].mean()
        jump_f = log_f[left].mean() - log_f[right].mean()
        jumps[k] = abs(0.5 * (jump_c + jump_f))
    return jumps
