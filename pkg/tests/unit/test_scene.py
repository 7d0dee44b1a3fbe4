"""
Tests for Layouts, Visibility, Rendering and Segmentation
"""

import math

import numpy as np
import pytest

from panolayout.exceptions import (
    CameraPlacementError,
    InvalidLayoutError,
    SegmentationError,
    VisibilityError,
)
from panolayout.geometry.camera import CameraRig
from panolayout.scene.layout import Layout
from panolayout.scene.render import BoundaryObservation, add_noise, render_boundaries
from panolayout.scene.segmentation import ColumnRange, depth_jumps, detect_corners, segment_columns
from panolayout.scene.visibility import visible_wall


# ─── Layout ───────────────────────────────────────────────────────────────────

def test_square_room_measures(square_room):
    assert square_room.n_walls == 4
    assert square_room.area == pytest.approx(16.0)
    assert square_room.volume == pytest.approx(48.0)
    assert square_room.corners3d().shape == (8, 3)
    np.testing.assert_allclose(square_room.wall_angles(), np.full(4, math.pi / 2))
    np.testing.assert_allclose([w.d for w in square_room.walls()], [2, 2, 2, 2])


def test_edge_lines_point_outward(square_room):
    normals, offsets = square_room.edge_lines()
    np.testing.assert_allclose(normals[0], [0, -1], atol=1e-12)
    np.testing.assert_allclose(offsets, [2, 2, 2, 2])
    assert square_room.origin_in_kernel(margin=1.9)
    assert not square_room.origin_in_kernel(margin=2.1)


def test_layout_invariants():
    with pytest.raises(InvalidLayoutError):
        Layout([(0, 0), (1, 1), (1, 0), (0, 1)], 1.0, -1.0)
    with pytest.raises(InvalidLayoutError):
        Layout([(0, 0), (0, 1), (1, 1), (1, 0)], 1.0, -1.0)
    with pytest.raises(InvalidLayoutError):
        Layout([(0, 0), (1, 0)], 1.0, -1.0)
    with pytest.raises(InvalidLayoutError):
        Layout([(0, 0), (1, 0), (0, 1)], -0.5, -1.0)


def test_from_points_reverses_clockwise_input():
    layout = Layout.from_points([(0, 0), (0, 1), (1, 1), (1, 0)], 1.0, -1.0)
    assert layout.area == pytest.approx(1.0)


def test_transforms(square_room):
    assert square_room.scaled(2.0).volume == pytest.approx(8 * square_room.volume)
    np.testing.assert_allclose(square_room.rolled(1).vertices[0], [-2, 2])
    moved = square_room.translated([1.0, 0.0])
    np.testing.assert_allclose(moved.vertices[0], [-1, -2])
    assert square_room.rotated(0.7).area == pytest.approx(square_room.area)


def test_camera_poses_and_dict_round_trip(square_room):
    room = Layout(square_room.vertices, 1.5, -1.5, camera_poses=[(0, 0), (0.5, 0.5)])
    assert room.n_poses == 2
    np.testing.assert_allclose(room.at_pose(1).vertices[0], [-2.5, -2.5])
    with pytest.raises(InvalidLayoutError):
        room.at_pose(2)
    restored = Layout.from_dict(room.to_dict())
    np.testing.assert_allclose(restored.camera_poses, room.camera_poses)
    assert restored.h_c == room.h_c


def test_check_camera(square_room):
    square_room.check_camera(0.5)
    with pytest.raises(CameraPlacementError) as exc:
        square_room.check_camera(2.5)
    assert exc.value.radius == 2.5


# ─── Visibility ───────────────────────────────────────────────────────────────

def test_visible_wall_in_square(square_room):
    assert visible_wall(square_room, (0, 0), 0.0) == (1, pytest.approx(2.0))
    index, t = visible_wall(square_room, (0, 0), math.pi / 2)
    assert index == 2 and t == pytest.approx(2.0)


def test_visible_wall_handles_occlusion(l_room):
    index, t = visible_wall(l_room, (0, 0), math.pi / 2)
    assert index == 4 and t == pytest.approx(1.0)
    index, _ = visible_wall(l_room, (0, 0), math.atan2(3.0, 3.5))
    assert index == 2


def test_visible_wall_matches_brute_force(l_room):
    rng = np.random.default_rng(12)
    a, b = l_room.edges()
    checked = 0
    while checked < 10_000:
        origin = rng.uniform([-1.9, -1.9], [3.9, 0.9])
        azimuth = rng.uniform(0, 2 * math.pi)
        direction = np.array([math.cos(azimuth), math.sin(azimuth)])
        hits = []
        for k in range(l_room.n_walls):
            edge = b[k] - a[k]
            matrix = np.column_stack([direction, -edge])
            if abs(np.linalg.det(matrix)) < 1e-9:
                continue
            t, s = np.linalg.solve(matrix, a[k] - origin)
            if t > 0 and 0 <= s <= 1:
                hits.append((t, k))
        hits.sort()
        if len(hits) > 1 and hits[1][0] - hits[0][0] < 1e-9:
            continue
        index, t = visible_wall(l_room, origin, azimuth)
        assert index == hits[0][1]
        assert t == pytest.approx(hits[0][0], abs=1e-9)
        checked += 1


def test_visible_wall_outside_room(square_room):
    with pytest.raises(VisibilityError):
        visible_wall(square_room, (10.0, 0.0), 0.0)


# ─── Rendering ────────────────────────────────────────────────────────────────

def test_render_square(square_obs, rig):
    assert square_obs.width == rig.width
    # column 0 sees x = 2 from (0.5, 0) at range 1.5
    assert square_obs.theta_ceiling[0] == pytest.approx(math.atan2(1.5, 1.5))
    assert square_obs.theta_floor[0] == pytest.approx(-math.atan2(1.5, 1.5))
    assert square_obs.corner_prob.sum() == 4
    corners = np.flatnonzero(square_obs.corner_prob)
    np.testing.assert_allclose(corners, [128, 384, 640, 896], atol=1)


def test_render_rejects_camera_touching_wall(square_room):
    with pytest.raises(CameraPlacementError):
        render_boundaries(square_room, CameraRig(radius=2.5, width=256, height=128))


def test_observation_validation(rig):
    n = rig.width
    with pytest.raises(InvalidLayoutError):
        BoundaryObservation(rig, np.full(n - 1, 0.3), np.full(n - 1, -0.3), np.zeros(n - 1))
    with pytest.raises(InvalidLayoutError):
        BoundaryObservation(rig, np.full(n, -0.3), np.full(n, -0.3), np.zeros(n))
    with pytest.raises(InvalidLayoutError):
        BoundaryObservation(rig, np.full(n, 0.3), np.full(n, -0.3), np.full(n, 1.5))


def test_noise_is_seeded(square_obs):
    a = add_noise(square_obs, 1.0, seed=3)
    b = add_noise(square_obs, 1.0, seed=3)
    c = add_noise(square_obs, 1.0, seed=[3, 0, 1])
    np.testing.assert_array_equal(a.theta_ceiling, b.theta_ceiling)
    assert not np.array_equal(a.theta_ceiling, c.theta_ceiling)
    assert not np.array_equal(a.theta_ceiling, square_obs.theta_ceiling)
    np.testing.assert_array_equal(a.corner_prob, square_obs.corner_prob)


def test_zero_noise_is_identity(square_obs):
    same = add_noise(square_obs, 0.0, seed=1)
    np.testing.assert_array_equal(same.theta_floor, square_obs.theta_floor)
    with pytest.raises(ValueError):
        add_noise(square_obs, -1.0, seed=1)


def test_noise_std_is_one_row(square_obs):
    # sigma = 1 row on a 512-row image is pi / 512 radians
    samples = []
    for seed in range(50):
        noisy = add_noise(square_obs, 1.0, seed=[seed, 0, 0, 1])
        samples.append(noisy.theta_ceiling - square_obs.theta_ceiling)
        samples.append(noisy.theta_floor - square_obs.theta_floor)
    samples = np.concatenate(samples)
    assert samples.size >= 100_000
    assert np.std(samples) == pytest.approx(math.pi / 512, rel=0.05)
    assert abs(np.mean(samples)) < 0.05 * math.pi / 512


def test_heavy_noise_keeps_elevation_signs(square_obs):
    noisy = add_noise(square_obs, 50.0, seed=0)
    assert np.all(noisy.theta_ceiling > 0)
    assert np.all(noisy.theta_floor < 0)


def test_blurred_corners(square_obs):
    blurred = add_noise(square_obs, 0.0, seed=0, blur_corners=True)
    assert blurred.corner_prob.max() <= 1.0
    assert np.count_nonzero(blurred.corner_prob) > np.count_nonzero(square_obs.corner_prob)
    assert len(segment_columns(blurred)) == 4


# ─── Segmentation ─────────────────────────────────────────────────────────────

def test_segment_square(square_obs):
    segments = segment_columns(square_obs)
    assert len(segments) == 4
    assert sum(len(s) for s in segments) == square_obs.width
    assert all(250 <= len(s) <= 262 for s in segments)
    assert segments[-1].stop > square_obs.width


def test_column_range_wraps():
    segment = ColumnRange(1000, 1030, 1024)
    cols = segment.columns()
    assert cols[0] == 1000 and cols[-1] == 5
    assert segment.interior(2).size == 26
    assert ColumnRange(0, 4, 1024).interior(2).size == 4


def test_detect_corners_non_maximum_suppression():
    prob = np.zeros(100)
    prob[[10, 11, 50]] = [0.9, 0.8, 0.7]
    np.testing.assert_array_equal(detect_corners(prob, 0.5, 3), [10, 50])
    prob = np.zeros(100)
    prob[[0, 99]] = [0.9, 0.8]
    np.testing.assert_array_equal(detect_corners(prob, 0.5, 3), [0])


def test_segmentation_errors(square_obs, rig):
    with pytest.raises(ValueError):
        segment_columns(square_obs, threshold=1.5)
    empty = BoundaryObservation(
        rig, square_obs.theta_ceiling, square_obs.theta_floor, np.zeros(rig.width)
    )
    with pytest.raises(SegmentationError):
        segment_columns(empty)


def test_depth_jumps_mark_the_occlusion(l_room, rig):
    obs = render_boundaries(l_room, rig)
    segments = segment_columns(obs)
    jumps = depth_jumps(obs, segments)
    assert jumps.shape == (5,)
    occluded = int(np.argmax(jumps))
    # about 3.7 m of range on the far side against 0.9 m on the near side
    assert jumps[occluded] > 0.9
    assert np.all(np.delete(jumps, occluded) < 0.05)


def test_depth_jumps_are_small_at_corners(square_obs):
    jumps = depth_jumps(square_obs, segment_columns(square_obs))
    assert np.all(jumps < 0.05)
