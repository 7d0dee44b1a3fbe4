"""
Tests for the End-to-End Reconstruction Pipeline
"""

import math

import numpy as np
import pytest

from panolayout.constants import LayoutMode
from panolayout.exceptions import (
    DegenerateConfigurationError,
    InfeasibleLayoutError,
    PanoLayoutError,
    SegmentationError,
    SolverError,
)
from panolayout.geometry.camera import CameraRig
from panolayout.geometry.wall import Wall
from panolayout.metrics.iou import iou3d, iou3d_u2s
from panolayout.scene.generator import DatasetSpec, generate_layout
from panolayout.scene.layout import Layout
from panolayout.scene.render import BoundaryObservation, add_noise, render_boundaries
from panolayout.scene.segmentation import ColumnRange
from panolayout.solvers import pipeline
from panolayout.solvers.pipeline import bridge_wall, reconstruct_layout, sample_columns
from panolayout.solvers.solution import SolverOptions


def test_sample_columns():
    segment = ColumnRange(100, 400, 1024)
    cols = sample_columns(segment, edge_margin=1, cap=64)
    assert cols.size == 64
    assert cols[0] == 101 and cols[-1] == 398
    assert sample_columns(ColumnRange(0, 10, 1024), 1, 64).size == 8


@pytest.mark.parametrize("mode", ["manhattan", "atlanta"])
def test_square_room(square_obs, square_room, mode):
    solution = reconstruct_layout(square_obs, mode)
    assert solution.mode is LayoutMode(mode)
    assert solution.n_walls == 4
    assert solution.h_c == pytest.approx(1.5, abs=1e-9)
    assert solution.h_f == pytest.approx(-1.5, abs=1e-9)
    np.testing.assert_allclose(solution.distances, 2.0, atol=1e-9)
    assert iou3d(solution.layout, square_room) == pytest.approx(1.0, abs=1e-5)
    assert solution.diagnostics.n_segments == 4
    assert "wall_0" in solution.diagnostics.spectra


def test_atlanta_hexagon(hexagon_room, rig):
    solution = reconstruct_layout(render_boundaries(hexagon_room, rig), LayoutMode.ATLANTA)
    assert solution.n_walls == 6
    assert iou3d(solution.layout, hexagon_room) == pytest.approx(1.0, abs=1e-5)


def test_occluded_wall_is_bridged(l_room, rig):
    solution = reconstruct_layout(render_boundaries(l_room, rig), "manhattan")
    assert solution.diagnostics.n_segments == 5
    assert len(solution.diagnostics.bridged) == 1
    assert solution.n_walls == 6
    assert solution.h_c == pytest.approx(1.3, abs=1e-8)
    assert solution.h_f == pytest.approx(-1.5, abs=1e-8)

    hidden = solution.diagnostics.bridged[0]
    visible = sorted(w.d for k, w in enumerate(solution.walls) if k != hidden)
    np.testing.assert_allclose(visible, [1.0, 2.0, 2.0, 3.0, 4.0], atol=1e-8)
    # the boundary is only known to half a column
    assert solution.walls[hidden].d == pytest.approx(1.0, abs=0.01)
    assert iou3d(solution.layout, l_room) > 0.99


def test_bridged_wall_is_exact_at_a_column_boundary(rig):
    # reflex vertex at the azimuth halfway between two columns
    phi = 2.0 * math.pi * 128.5 / rig.width
    x = 1.0 / math.tan(phi)
    room = Layout.from_points([(-2, -2), (4, -2), (4, 3), (x, 3), (x, 1), (-2, 1)], h_c=1.3, h_f=-1.5)
    solution = reconstruct_layout(render_boundaries(room, rig), "manhattan")
    assert len(solution.diagnostics.bridged) == 1
    np.testing.assert_allclose(sorted(solution.distances), sorted([1.0, 2.0, 2.0, 3.0, 4.0, x]), atol=1e-8)
    assert solution.h_c == pytest.approx(1.3, abs=1e-8)
    assert solution.h_f == pytest.approx(-1.5, abs=1e-8)
    assert iou3d(solution.layout, room) == pytest.approx(1.0, abs=1e-6)


def test_occlusion_without_bridging_fails(l_room, rig):
    with pytest.raises(InfeasibleLayoutError):
        reconstruct_layout(
            render_boundaries(l_room, rig), "manhattan", SolverOptions(bridge_occlusions=False)
        )


@pytest.mark.parametrize("index", [0, 1, 2])
def test_generated_occluded_rooms_are_bridged(rig, index):
    spec = DatasetSpec(walls_min=6, walls_max=8, seed=3, occluded=True)
    room = generate_layout(spec, index)
    solution = reconstruct_layout(render_boundaries(room, rig), "manhattan")
    assert solution.diagnostics.bridged
    assert solution.n_walls == room.n_walls
    assert solution.h_c == pytest.approx(room.h_c, abs=1e-6)
    assert solution.h_f == pytest.approx(room.h_f, abs=1e-6)
    assert iou3d(solution.layout, room) > 0.95


def test_bridge_wall_passes_through_the_near_wall():
    top = Wall.from_line2d([0, 1], 3.0, 1.3, -1.5)
    lower = Wall.from_line2d([0, 1], 1.0, 1.3, -1.5)
    hidden = bridge_wall(top, lower, math.pi / 4)
    np.testing.assert_allclose(np.abs(hidden.frame.normal2d), [1, 0], atol=1e-12)
    assert hidden.d == pytest.approx(1.0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_generated_manhattan_rooms(seed, rig):
    spec = DatasetSpec(walls_min=4, walls_max=8, seed=seed)
    room = generate_layout(spec, 0)
    solution = reconstruct_layout(render_boundaries(room, rig), "manhattan")
    assert iou3d(solution.layout, room) > 0.99


@pytest.mark.parametrize("s", [0.5, 2.0, 5.0])
def test_similarity_scaling(rect_room, s):
    # scaling the scene and the rig together scales the reconstruction
    base = reconstruct_layout(render_boundaries(rect_room, CameraRig(0.5, 1024, 512)))
    scaled = reconstruct_layout(render_boundaries(rect_room.scaled(s), CameraRig(0.5 * s, 1024, 512)))
    np.testing.assert_allclose(sorted(scaled.distances), sorted(s * base.distances), rtol=1e-8)
    assert scaled.h_c == pytest.approx(s * base.h_c, rel=1e-8)
    assert scaled.h_f == pytest.approx(s * base.h_f, rel=1e-8)


@pytest.mark.parametrize("angle", [0.7, 2.0 * math.pi * 37 / 1024])
def test_rotation_equivariance(rect_room, rig, angle):
    base = reconstruct_layout(render_boundaries(rect_room, rig))
    turned = reconstruct_layout(render_boundaries(rect_room.rotated(angle), rig))
    np.testing.assert_allclose(sorted(turned.distances), sorted(base.distances), atol=1e-8)
    assert turned.h_c == pytest.approx(base.h_c, abs=1e-8)
    assert iou3d(turned.layout, base.layout.rotated(angle)) == pytest.approx(1.0, abs=1e-6)


def test_noisy_reconstruction(rect_room, rig):
    noisy = add_noise(render_boundaries(rect_room, rig), 0.5, seed=[0, 0, 0, 1])
    solution = reconstruct_layout(noisy, "manhattan", SolverOptions(rank_tol=1e-4))
    iou, scale = iou3d_u2s(solution.layout, rect_room)
    assert iou > 0.8
    assert 0.5 < scale < 2.0


def test_too_few_corners(square_obs):
    flat = BoundaryObservation(
        square_obs.camera, square_obs.theta_ceiling, square_obs.theta_floor, np.zeros(square_obs.width)
    )
    with pytest.raises(SegmentationError):
        reconstruct_layout(flat)


def _mean_iou(rooms, rig, sigma, mode):
    """Mean 3D IoU over noisy renders; a failed reconstruction scores 0."""
    options = SolverOptions(rank_tol=1e-4) if sigma > 0 else SolverOptions()
    scores, scales = [], []
    for index, room in enumerate(rooms):
        obs = add_noise(render_boundaries(room, rig), sigma, seed=[11, index, 0, int(sigma * 10)])
        try:
            solution = reconstruct_layout(obs, mode, options)
            _, scale = iou3d_u2s(solution.layout, room)
            scores.append(iou3d(solution.layout, room))
        except PanoLayoutError:
            scores.append(0.0)
            continue
        scales.append(scale)
    return float(np.mean(scores)), scales


def test_accuracy_degrades_gracefully_with_noise(rig):
    spec = DatasetSpec(walls_min=6, walls_max=6, seed=5)
    rooms = [generate_layout(spec, i) for i in range(10)]
    means = [_mean_iou(rooms, rig, sigma, "manhattan")[0] for sigma in (0.0, 0.5, 1.0)]
    assert means[0] > 0.999
    assert means[0] >= means[1] >= means[2]
    assert means[1] >= 0.8


def test_atlanta_scale_is_unbiased_under_noise(hexagon_room, rig):
    rooms = [hexagon_room.rotated(0.1 * i) for i in range(6)]
    mean, scales = _mean_iou(rooms, rig, 0.5, "atlanta")
    assert mean >= 0.8
    assert 0.93 <= float(np.mean(scales)) <= 1.07


def test_failed_wall_fit_is_absorbed(hexagon_room, square_obs, square_room, rig, mocker):
    real = pipeline.fit_wall

    def flaky(ceiling, floor, options=None, solver="overdetermined"):
        if solver == "wall 2":
            raise DegenerateConfigurationError(solver, 0.0, 1e-10, 2)
        return real(ceiling, floor, options, solver=solver)

    mocker.patch("panolayout.solvers.pipeline.fit_wall", side_effect=flaky)
    atlanta = reconstruct_layout(render_boundaries(hexagon_room, rig), "atlanta")
    assert atlanta.diagnostics.failed_fits == [2]
    assert "wall_2" not in atlanta.diagnostics.spectra
    np.testing.assert_allclose(atlanta.distances, 2.0, atol=1e-8)

    manhattan = reconstruct_layout(square_obs, "manhattan")
    assert manhattan.diagnostics.failed_fits == [2]
    assert iou3d(manhattan.layout, square_room) == pytest.approx(1.0, abs=1e-6)


def test_atlanta_needs_three_fitted_walls(square_obs, mocker):
    mocker.patch(
        "panolayout.solvers.pipeline.fit_wall",
        side_effect=DegenerateConfigurationError("wall", 0.0, 1e-10, 2),
    )
    with pytest.raises(SolverError):
        reconstruct_layout(square_obs, "atlanta")
