"""
Tests for Plücker Lines, the Camera Rig and Wall Frames
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panolayout.exceptions import ElevationOutOfRangeError, GeometryError, InvalidPluckerLineError
from panolayout.geometry.camera import CameraRig, back_project, back_project_elevation, project_elevation
from panolayout.geometry.plucker import PluckerLine, ProjectingRay, side
from panolayout.geometry.wall import Wall, WallFrame, line_from_wall_params, ray_to_wall_frame

coords = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
vectors = st.tuples(coords, coords, coords).filter(lambda v: np.linalg.norm(v) > 0.1)


def test_plucker_constraint_enforced():
    with pytest.raises(InvalidPluckerLineError):
        PluckerLine(direction=[1, 0, 0], moment=[1, 0, 0])
    with pytest.raises(InvalidPluckerLineError):
        PluckerLine(direction=[0, 0, 0], moment=[0, 0, 0])
    with pytest.raises(InvalidPluckerLineError):
        PluckerLine(direction=[1, 0], moment=[0, 0, 1])


def test_line_is_immutable():
    line = PluckerLine.from_points([0, 0, 0], [1, 0, 0])
    with pytest.raises(ValueError):
        line.direction[0] = 5.0


def test_side_of_intersecting_and_skew_lines():
    a = PluckerLine.from_points([0, 0, 0], [1, 0, 0])
    b = PluckerLine.from_points([0, 0, 0], [0, 1, 0])
    c = PluckerLine.from_points([0, 0, 1], [0, 1, 1])
    assert side(a, b) == pytest.approx(0.0)
    assert abs(side(a, c)) > 0.5
    # parallel lines are coplanar
    d = PluckerLine.from_point_direction([0, 3, 2], [2, 0, 0])
    assert side(a, d) == pytest.approx(0.0)


@settings(max_examples=50, deadline=None)
@given(p=vectors, dp=vectors, q=vectors, dq=vectors)
def test_side_is_symmetric(p, dp, q, dq):
    a = PluckerLine.from_point_direction(p, dp)
    b = PluckerLine.from_point_direction(q, dq)
    assert side(a, b) == pytest.approx(side(b, a), abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(p=vectors, d=vectors, t=st.floats(min_value=-3, max_value=3))
def test_line_through_point_on_ray_meets_it(p, d, t):
    ray = ProjectingRay.from_origin_direction(p, d)
    other = PluckerLine.from_point_direction(ray.point_at(t), [0.3, -0.2, 1.0])
    assert side(ray, other) == pytest.approx(0.0, abs=1e-8)


def test_projecting_ray_checks_moment():
    with pytest.raises(InvalidPluckerLineError):
        ProjectingRay(direction=[1, 0, 0], moment=[0, 0, 1], origin=[0, 0, 0])
    ray = ProjectingRay.from_origin_direction([1, 2, 0], [0, 0, 1])
    scaled = ray.scaled(-2.0)
    np.testing.assert_allclose(scaled.as_vector(), -2.0 * ray.as_vector())
    with pytest.raises(InvalidPluckerLineError):
        ray.scaled(0.0)


def test_distance_and_closest_point():
    line = PluckerLine.from_point_direction([0, 2, 0], [1, 0, 0])
    np.testing.assert_allclose(line.closest_point(), [0, 2, 0], atol=1e-12)
    assert line.distance_to_point([5, 0, 0]) == pytest.approx(2.0)


def test_camera_mappings(rig):
    assert rig.azimuth(0) == 0.0
    assert rig.azimuth(rig.width // 4) == pytest.approx(math.pi / 2)
    assert rig.elevation(0) == pytest.approx(math.pi / 2)
    assert rig.elevation(rig.height / 2) == pytest.approx(0.0)
    assert rig.row_for_elevation(rig.elevation(100.25)) == pytest.approx(100.25)
    np.testing.assert_allclose(rig.center(math.pi), [-0.5, 0.0, 0.0], atol=1e-12)


def test_camera_validation():
    with pytest.raises(GeometryError):
        CameraRig(radius=0.0, width=1024, height=512)
    with pytest.raises(GeometryError):
        CameraRig(radius=0.5, width=1, height=512)
    with pytest.raises(GeometryError):
        CameraRig(radius=float("nan"), width=1024, height=512)


def test_back_project_starts_on_the_circle(rig):
    ray = back_project(rig, 256, 100.0)
    np.testing.assert_allclose(ray.origin, rig.center(math.pi / 2), atol=1e-12)
    assert np.linalg.norm(ray.direction) == pytest.approx(1.0)
    # looks radially outward and upward
    assert ray.direction[1] > 0 and ray.direction[2] > 0
    assert ray.direction[0] == pytest.approx(0.0, abs=1e-12)


def test_back_project_rejects_poles_and_bad_columns(rig):
    with pytest.raises(ElevationOutOfRangeError):
        back_project(rig, 0, 0.0)
    with pytest.raises(ElevationOutOfRangeError):
        back_project(rig, 0, rig.height)
    with pytest.raises(GeometryError):
        back_project(rig, rig.width, 10.0)


def test_project_elevation(rig):
    assert project_elevation(rig, 0, 1.5, 1.5) == pytest.approx(math.pi / 4)
    assert project_elevation(rig, 300, 2.0, -1.0) == pytest.approx(math.atan2(-1.0, 2.0))
    with pytest.raises(GeometryError):
        project_elevation(rig, 0, 0.0, 1.0)


def test_ray_meets_the_wall_it_was_rendered_from(rig):
    wall = Wall.from_line2d([1, 0], 2.0, h_c=1.5, h_f=-1.5)
    col = 10
    phi = rig.azimuth(col)
    t = 2.0 / math.cos(phi) - rig.radius
    ray = back_project_elevation(rig, col, project_elevation(rig, col, t, 1.5))
    assert side(ray, wall.ceiling_line) == pytest.approx(0.0, abs=1e-12)
    assert abs(side(ray, wall.floor_line)) > 1e-3


def test_wall_frame():
    frame = WallFrame.from_direction([0, 3])
    np.testing.assert_allclose(frame.e1, [0, 1, 0])
    np.testing.assert_allclose(frame.e2, [-1, 0, 0])
    np.testing.assert_allclose(WallFrame.from_normal([-1, 0]).e1, frame.e1)
    with pytest.raises(GeometryError):
        WallFrame(e1=[1, 0, 0], e2=[0, -1, 0], e3=[0, 0, 1])
    with pytest.raises(GeometryError):
        WallFrame.from_direction([0, 0])


def test_wall_line_moment():
    frame = WallFrame.from_direction([1, 0])
    line = line_from_wall_params(frame, h=1.2, d=3.0)
    np.testing.assert_allclose(line.moment, 1.2 * frame.e2 - 3.0 * frame.e3, atol=1e-12)


def test_wall_from_line2d_normalises_sign():
    wall = Wall.from_line2d([0, -2], -4.0, h_c=1.0, h_f=-1.0)
    assert wall.d == pytest.approx(2.0)
    np.testing.assert_allclose(wall.frame.normal2d, [0, 1])
    np.testing.assert_allclose(wall.solution_vector(), [1, 0, 1, 0, -1, 0, 2], atol=1e-12)
    with pytest.raises(GeometryError):
        Wall.from_line2d([1, 0], 1.0, h_c=-1.0, h_f=1.0)
    with pytest.raises(GeometryError):
        Wall.from_line2d([1, 0], 0.0, h_c=1.0, h_f=-1.0)


def test_side_invariant_under_wall_frame(rig):
    wall = Wall.from_line2d([0.6, 0.8], 2.5, h_c=1.1, h_f=-1.3)
    ray = back_project(rig, 77, 150.0)
    local_ray = ray_to_wall_frame(ray, wall.frame)
    local_line = ray_to_wall_frame(wall.ceiling_line, wall.frame)
    assert side(local_ray, local_line) == pytest.approx(side(ray, wall.ceiling_line), abs=1e-12)
    np.testing.assert_allclose(local_ray.origin, wall.frame.matrix @ ray.origin)


def test_side_matches_parametric_distance():
    rng = np.random.default_rng(8)
    n = 10_000
    p, q = rng.uniform(-5, 5, (n, 3)), rng.uniform(-5, 5, (n, 3))
    dp, dq = rng.normal(size=(n, 3)), rng.normal(size=(n, 3))
    meet = rng.random(n) < 0.5
    # half of the pairs share a point, the rest are skew in general
    q[meet] = p[meet] + rng.uniform(-2, 2, (int(meet.sum()), 1)) * dp[meet]

    checked = 0
    for i in range(n):
        normal = np.cross(dp[i], dq[i])
        if np.linalg.norm(normal) < 0.1:
            continue
        value = side(PluckerLine.from_point_direction(p[i], dp[i]), PluckerLine.from_point_direction(q[i], dq[i]))
        params, *_ = np.linalg.lstsq(np.column_stack([dp[i], -dq[i]]), q[i] - p[i], rcond=None)
        gap = np.linalg.norm(p[i] + params[0] * dp[i] - q[i] - params[1] * dq[i])
        assert abs(value) / np.linalg.norm(normal) == pytest.approx(gap, abs=1e-10)
        if meet[i]:
            assert abs(value) < 1e-10 * max(1.0, np.linalg.norm(normal))
        checked += 1
    assert checked > 9_000
