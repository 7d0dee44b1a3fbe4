"""
Dataset Generator

Seeded synthetic rooms: rotated rectilinear rooms with rectangular corner
notches (Manhattan) and angle-sorted star polygons (Atlanta), both
rejection-sampled for camera clearance and full wall visibility, plus
extra camera poses per layout. Occluded Manhattan rooms move the camera
out of the kernel so that walls hide behind reflex corners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np
from loguru import logger

from panolayout import constants as C
from panolayout.constants import LayoutMode
from panolayout.exceptions import GenerationError, InvalidLayoutError, VisibilityError
from panolayout.geometry.camera import CameraRig
from panolayout.scene.layout import Layout, cross2
from panolayout.scene.render import column_visibility

# Manhattan corners in counter-clockwise order: (sx, sy, arrives along a horizontal edge)
_CORNERS = ((1, -1, True), (1, 1, False), (-1, 1, True), (-1, -1, False))
_MIN_NOTCH = 0.3


@dataclass(frozen=True)
class DatasetSpec:
    """
    What to generate.

    Attributes:
        n_layouts: Number of layouts
        walls_min, walls_max: Wall count range (Manhattan draws even counts only)
        mode: Manhattan or Atlanta
        seed: Base seed; layout i uses the seed sequence (seed, i)
        poses_per_layout: Camera placements per layout (pose 0 at the origin)
        radius: Camera circle radius used for the clearance test
        occluded: Manhattan only; place the camera outside the kernel so
            each occlusion hides exactly one wall between two parallel walls
        width: Image columns used for the visibility test of occluded rooms
    """

    n_layouts: int = 650
    walls_min: int = 6
    walls_max: int = 10
    mode: LayoutMode = LayoutMode.MANHATTAN
    seed: int = 7
    poses_per_layout: int = C.DEFAULT_POSES_PER_LAYOUT
    ceiling_range: Tuple[float, float] = (0.8, 1.6)
    floor_range: Tuple[float, float] = (-1.8, -1.2)
    size_range: Tuple[float, float] = (2.0, 5.0)
    radius: float = C.DEFAULT_RADIUS
    clearance_margin: float = C.CAMERA_CLEARANCE_MARGIN
    min_wall_angle_deg: float = C.MIN_WALL_ANGLE_DEG
    min_turn_angle_deg: float = C.MIN_TURN_ANGLE_DEG
    max_attempts: int = C.MAX_GENERATION_ATTEMPTS
    occluded: bool = False
    width: int = C.DEFAULT_WIDTH

    def __post_init__(self):
        object.__setattr__(self, "mode", LayoutMode(self.mode))
        if self.n_layouts < 1:
            raise ValueError(f"n_layouts must be >= 1, got {self.n_layouts}")
        if self.walls_min > self.walls_max:
            raise ValueError(f"walls_min {self.walls_min} > walls_max {self.walls_max}")
        if self.mode is LayoutMode.MANHATTAN:
            if self.walls_min < 4:
                raise ValueError("Manhattan layouts need walls_min >= 4")
            if not self.wall_counts():
                raise ValueError(
                    f"no Manhattan wall count in [{self.walls_min}, {self.walls_max}] "
                    "(even counts from 4 to 12)"
                )
        elif self.walls_min < 3:
            raise ValueError("Atlanta layouts need walls_min >= 3")
        if self.occluded and (self.mode is not LayoutMode.MANHATTAN or self.walls_min < 6):
            raise ValueError("occluded layouts are Manhattan with walls_min >= 6")
        if self.poses_per_layout < 1:
            raise ValueError("poses_per_layout must be >= 1")
        for name in ("ceiling_range", "floor_range", "size_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty: {lo} > {hi}")
        if not (self.ceiling_range[0] > 0 and self.floor_range[1] < 0):
            raise ValueError("heights must keep the camera between floor and ceiling")

    @property
    def clearance(self) -> float:
        return self.radius + self.clearance_margin

    def wall_counts(self) -> List[int]:
        counts = range(self.walls_min, self.walls_max + 1)
        if self.mode is LayoutMode.MANHATTAN:
            return [n for n in counts if n % 2 == 0 and 4 <= n <= 12]
        return list(counts)

    @classmethod
    def from_config(cls, dataset, radius: float) -> "DatasetSpec":
        """Build from a :class:`~panolayout.config.DatasetConfig`."""
        return cls(
            n_layouts=dataset.n_layouts,
            walls_min=dataset.walls_min,
            walls_max=dataset.walls_max,
            mode=LayoutMode(dataset.mode),
            seed=dataset.seed,
            poses_per_layout=dataset.poses_per_layout,
            ceiling_range=(dataset.ceiling_min, dataset.ceiling_max),
            floor_range=(dataset.floor_min, dataset.floor_max),
            size_range=(dataset.size_min, dataset.size_max),
            radius=radius,
            clearance_margin=dataset.clearance_margin,
            min_wall_angle_deg=dataset.min_wall_angle_deg,
            min_turn_angle_deg=dataset.min_turn_angle_deg,
            occluded=dataset.occluded,
        )


# ─── ACCEPTANCE ───────────────────────────────────────────────────────────────

def _turn_angles(vertices: np.ndarray) -> np.ndarray:
    e = np.roll(vertices, -1, axis=0) - vertices
    e_prev = np.roll(e, 1, axis=0)
    return np.abs(np.arctan2(cross2(e_prev, e), np.einsum("ij,ij->i", e_prev, e)))


def _occlusion_failure(layout: Layout, spec: DatasetSpec) -> Optional[str]:
    if not layout.contains_origin() or np.min(layout.wall_distances()) < spec.clearance:
        return "camera circle not inside the room with clearance"
    if layout.origin_in_kernel():
        return "camera in kernel, nothing occluded"
    try:
        index, t = column_visibility(layout, CameraRig(spec.radius, spec.width, spec.width // 2))
    except VisibilityError:
        return "a column sees no wall"

    starts = np.flatnonzero(index != np.roll(index, 1))
    runs = index[starts]
    if np.unique(runs).size != runs.size:
        return "a wall is seen in more than one piece"
    lengths = np.diff(np.append(starts, starts[0] + spec.width))
    if np.min(lengths) * 2.0 * math.pi / spec.width < math.radians(spec.min_wall_angle_deg):
        return "visible wall subtends too small an angle"

    normals, _ = layout.edge_lines()
    hidden = 0
    for k, start in enumerate(starts):
        before, after = int(runs[k - 1]), int(runs[k])
        skipped = (after - before) % layout.n_walls - 1
        if skipped == 0:
            continue
        if skipped != 1:
            return "more than one wall hidden at a boundary"
        if abs(float(cross2(normals[before], normals[after]))) > 1e-9:
            return "hidden wall not between parallel walls"
        if abs(math.log(t[start - 1] / t[start])) < C.MIN_OCCLUSION_LOG_DEPTH:
            return "depth jump at the occlusion too small"
        hidden += 1
    if hidden == 0:
        return "nothing occluded"
    return None


def acceptance_failure(layout: Layout, spec: DatasetSpec) -> Optional[str]:
    """Reason the layout is rejected for ``spec``, or None when accepted."""
    if spec.occluded:
        return _occlusion_failure(layout, spec)
    _, offsets = layout.edge_lines()
    if not np.all(offsets >= spec.clearance):
        return "camera not in kernel with clearance"
    if np.min(layout.wall_angles()) < math.radians(spec.min_wall_angle_deg):
        return "wall subtends too small an angle"
    if np.min(_turn_angles(layout.vertices)) < math.radians(spec.min_turn_angle_deg):
        return "adjacent walls nearly parallel"
    return None


# ─── MANHATTAN ────────────────────────────────────────────────────────────────

def _manhattan_vertices(rng: np.random.Generator, n_walls: int, spec: DatasetSpec) -> np.ndarray:
    lo, hi = spec.size_range
    # half extents: right, top, left, bottom
    xr, yt, xl, yb = rng.uniform(lo, hi, size=4)
    n_notches = (n_walls - 4) // 2
    notched = set(int(c) for c in rng.choice(4, size=n_notches, replace=False))
    inner = spec.clearance + 0.1

    vertices = []
    for k, (sx, sy, horizontal) in enumerate(_CORNERS):
        X = xr if sx > 0 else xl
        Y = yt if sy > 0 else yb
        if k not in notched:
            vertices.append((sx * X, sy * Y))
            continue
        if X - _MIN_NOTCH <= inner or Y - _MIN_NOTCH <= inner:
            raise InvalidLayoutError("room too small for a notch")
        x1 = rng.uniform(inner, X - _MIN_NOTCH)
        y1 = rng.uniform(inner, Y - _MIN_NOTCH)
        if horizontal:
            vertices += [(sx * x1, sy * Y), (sx * x1, sy * y1), (sx * X, sy * y1)]
        else:
            vertices += [(sx * X, sy * y1), (sx * x1, sy * y1), (sx * x1, sy * Y)]

    angle = rng.uniform(0.0, math.pi / 2)
    c, s = math.cos(angle), math.sin(angle)
    return np.asarray(vertices) @ np.array([[c, -s], [s, c]]).T


# ─── ATLANTA ──────────────────────────────────────────────────────────────────

def _atlanta_vertices(rng: np.random.Generator, n_walls: int, spec: DatasetSpec) -> np.ndarray:
    gaps = rng.uniform(0.5, 1.5, size=n_walls)
    gaps *= 2.0 * math.pi / gaps.sum()
    if np.max(gaps) >= math.pi:
        raise InvalidLayoutError("angular gap reaches pi")
    angles = rng.uniform(0.0, 2.0 * math.pi) + np.concatenate([[0.0], np.cumsum(gaps[:-1])])
    radii = rng.uniform(*spec.size_range, size=n_walls)
    return radii[:, None] * np.column_stack([np.cos(angles), np.sin(angles)])


# ─── PUBLIC API ───────────────────────────────────────────────────────────────

def layout_rng(spec: DatasetSpec, index: int, stream: int = 0) -> np.random.Generator:
    """Generator seeded by (seed, index, stream); independent of call order."""
    return np.random.default_rng([spec.seed, index, stream])


def generate_layout(spec: DatasetSpec, index: int) -> Layout:
    """
    Layout ``index`` of the dataset described by ``spec``.

    Deterministic in (spec.seed, index).

    Raises:
        GenerationError: If no acceptable room is found within max_attempts.
    """
    rng = layout_rng(spec, index)
    counts = spec.wall_counts()
    n_walls = int(counts[rng.integers(len(counts))])
    h_c = float(rng.uniform(*spec.ceiling_range))
    h_f = float(rng.uniform(*spec.floor_range))
    build = _manhattan_vertices if spec.mode is LayoutMode.MANHATTAN else _atlanta_vertices

    reason = None
    for _ in range(spec.max_attempts):
        try:
            layout = Layout(build(rng, n_walls, spec), h_c, h_f)
            if spec.occluded:
                shift = rng.uniform(layout.vertices.min(axis=0), layout.vertices.max(axis=0))
                layout = layout.translated(-shift)
        except InvalidLayoutError as e:
            reason = e.reason
            continue
        reason = acceptance_failure(layout, spec)
        if reason is None:
            return layout
    raise GenerationError(index, spec.max_attempts, reason)


def sample_poses(layout: Layout, spec: DatasetSpec, index: int) -> np.ndarray:
    """
    Camera placements for ``layout``: the origin plus up to
    ``poses_per_layout - 1`` rejection-sampled points that satisfy the
    same acceptance test as the origin.
    """
    rng = layout_rng(spec, index, stream=1)
    poses = [np.zeros(2)]
    lo = layout.vertices.min(axis=0)
    hi = layout.vertices.max(axis=0)
    attempts = 0
    while len(poses) < spec.poses_per_layout and attempts < spec.max_attempts:
        attempts += 1
        p = rng.uniform(lo, hi)
        try:
            candidate = Layout(layout.vertices - p, layout.h_c, layout.h_f)
        except InvalidLayoutError:
            continue
        if acceptance_failure(candidate, spec) is None:
            poses.append(p)
    if len(poses) < spec.poses_per_layout:
        logger.warning(
            f"Layout {index}: found {len(poses)}/{spec.poses_per_layout} camera poses"
        )
    return np.asarray(poses)


def generate_scene(spec: DatasetSpec, index: int) -> Layout:
    """Layout ``index`` with its camera poses attached."""
    layout = generate_layout(spec, index)
    poses = sample_poses(layout, spec, index)
    return Layout(layout.vertices, layout.h_c, layout.h_f, camera_poses=poses)


def iter_dataset(spec: DatasetSpec) -> Iterator[Tuple[int, Layout]]:
    for index in range(spec.n_layouts):
        yield index, generate_scene(spec, index)
