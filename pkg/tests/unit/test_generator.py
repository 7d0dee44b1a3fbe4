"""
Tests for the Synthetic Dataset Generator
"""

import math

import numpy as np
import pytest

from panolayout.config import DatasetConfig
from panolayout.constants import LayoutMode
from panolayout.exceptions import GenerationError
from panolayout.scene.generator import (
    DatasetSpec,
    acceptance_failure,
    generate_layout,
    generate_scene,
    iter_dataset,
    sample_poses,
)
from panolayout.scene.layout import Layout


def _is_manhattan(layout: Layout) -> bool:
    a, b = layout.edges()
    e = (b - a) / np.linalg.norm(b - a, axis=1)[:, None]
    dots = np.einsum("ij,ij->i", e, np.roll(e, -1, axis=0))
    return bool(np.all(np.abs(dots) < 1e-9))


def test_spec_validation():
    with pytest.raises(ValueError):
        DatasetSpec(walls_min=8, walls_max=6)
    with pytest.raises(ValueError):
        DatasetSpec(walls_min=3, walls_max=3)
    with pytest.raises(ValueError):
        DatasetSpec(walls_min=5, walls_max=5)
    with pytest.raises(ValueError):
        DatasetSpec(mode="atlanta", walls_min=2, walls_max=5)
    with pytest.raises(ValueError):
        DatasetSpec(ceiling_range=(-1.0, 1.0))


def test_wall_counts():
    assert DatasetSpec(walls_min=4, walls_max=9).wall_counts() == [4, 6, 8]
    assert DatasetSpec(mode="atlanta", walls_min=3, walls_max=5).wall_counts() == [3, 4, 5]


def test_from_config():
    spec = DatasetSpec.from_config(DatasetConfig(walls_min=4, walls_max=4, seed=11), radius=0.3)
    assert spec.seed == 11
    assert spec.clearance == pytest.approx(0.5)
    assert spec.mode is LayoutMode.MANHATTAN


@pytest.mark.parametrize("n_walls", [4, 6, 8, 10, 12])
def test_manhattan_layouts(n_walls):
    spec = DatasetSpec(n_layouts=3, walls_min=n_walls, walls_max=n_walls, seed=5)
    for index in range(3):
        layout = generate_layout(spec, index)
        assert layout.n_walls == n_walls
        assert _is_manhattan(layout)
        assert acceptance_failure(layout, spec) is None
        assert spec.ceiling_range[0] <= layout.h_c <= spec.ceiling_range[1]
        assert spec.floor_range[0] <= layout.h_f <= spec.floor_range[1]


@pytest.mark.parametrize("n_walls", [3, 5, 7, 9])
def test_atlanta_layouts(n_walls):
    spec = DatasetSpec(mode="atlanta", walls_min=n_walls, walls_max=n_walls, seed=2)
    layout = generate_layout(spec, 0)
    assert layout.n_walls == n_walls
    _, offsets = layout.edge_lines()
    assert np.all(offsets >= spec.clearance)
    assert np.min(layout.wall_angles()) >= math.radians(spec.min_wall_angle_deg)


def test_generation_is_deterministic():
    spec = DatasetSpec(walls_min=4, walls_max=10, seed=42)
    a = generate_scene(spec, 7)
    b = generate_scene(spec, 7)
    np.testing.assert_array_equal(a.vertices, b.vertices)
    np.testing.assert_array_equal(a.camera_poses, b.camera_poses)
    c = generate_layout(DatasetSpec(walls_min=4, walls_max=10, seed=43), 7)
    assert not np.array_equal(a.vertices, c.vertices)


def test_single_rectangle():
    spec = DatasetSpec(n_layouts=1, walls_min=4, walls_max=4, seed=0)
    layouts = list(iter_dataset(spec))
    assert len(layouts) == 1
    assert layouts[0][1].n_walls == 4


def test_poses_pass_acceptance():
    spec = DatasetSpec(walls_min=6, walls_max=6, seed=3, poses_per_layout=3)
    layout = generate_layout(spec, 0)
    poses = sample_poses(layout, spec, 0)
    assert poses.shape[1] == 2
    np.testing.assert_array_equal(poses[0], [0.0, 0.0])
    for p in poses:
        moved = Layout(layout.vertices - p, layout.h_c, layout.h_f)
        assert acceptance_failure(moved, spec) is None


def test_acceptance_rejects_camera_near_wall():
    spec = DatasetSpec(radius=0.5, clearance_margin=0.2)
    tight = Layout.from_points([(-0.6, -2), (2, -2), (2, 2), (-0.6, 2)], 1.0, -1.0)
    assert acceptance_failure(tight, spec) == "camera not in kernel with clearance"


def test_generation_gives_up():
    spec = DatasetSpec(walls_min=4, walls_max=4, size_range=(0.5, 0.6), max_attempts=5)
    with pytest.raises(GenerationError) as exc:
        generate_layout(spec, 0)
    assert exc.value.attempts == 5


def test_occluded_spec_validation():
    with pytest.raises(ValueError):
        DatasetSpec(walls_min=4, walls_max=8, occluded=True)
    with pytest.raises(ValueError):
        DatasetSpec(mode="atlanta", walls_min=6, walls_max=8, occluded=True)
    spec = DatasetSpec.from_config(DatasetConfig(walls_min=6, walls_max=8, occluded=True), radius=0.5)
    assert spec.occluded


def test_occluded_layouts_hide_a_wall():
    spec = DatasetSpec(walls_min=6, walls_max=8, seed=3, occluded=True)
    for index in range(3):
        layout = generate_layout(spec, index)
        assert _is_manhattan(layout)
        assert layout.contains_origin()
        assert not layout.origin_in_kernel()
        assert acceptance_failure(layout, spec) is None
        assert acceptance_failure(layout, DatasetSpec(walls_min=6, walls_max=8)) is not None


def test_occlusion_acceptance_reasons(l_room, square_room):
    spec = DatasetSpec(walls_min=6, walls_max=6, occluded=True)
    assert acceptance_failure(square_room, spec) == "camera in kernel, nothing occluded"
    assert acceptance_failure(l_room, spec) is None
