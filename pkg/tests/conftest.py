"""
Pytest Configuration
"""

import math

import numpy as np
import pytest

from panolayout.config import PanoLayoutConfig
from panolayout.geometry.camera import CameraRig
from panolayout.scene.layout import Layout
from panolayout.scene.render import render_boundaries


def regular_polygon(n: int, apothem: float, phase: float = 0.0):
    """CCW regular polygon whose edges sit at distance ``apothem`` from the origin."""
    circumradius = apothem / math.cos(math.pi / n)
    angles = phase + math.pi / n + 2.0 * math.pi * np.arange(n) / n
    return circumradius * np.column_stack([np.cos(angles), np.sin(angles)])


@pytest.fixture
def config(tmp_path):
    return PanoLayoutConfig(output_directory=str(tmp_path / "out"))


@pytest.fixture
def rig():
    return CameraRig(radius=0.5, width=1024, height=512)


@pytest.fixture
def square_room():
    """4 x 4 m room centred on the camera."""
    return Layout.from_points([(-2, -2), (2, -2), (2, 2), (-2, 2)], h_c=1.5, h_f=-1.5)


@pytest.fixture
def rect_room():
    """Off-centre 5 x 4 m room, rotated so no wall is axis-aligned."""
    room = Layout.from_points([(-1.5, -1.8), (3.5, -1.8), (3.5, 2.2), (-1.5, 2.2)], h_c=1.2, h_f=-1.4)
    return room.rotated(0.3)


@pytest.fixture
def hexagon_room():
    return Layout(regular_polygon(6, 2.0, phase=0.1), h_c=1.5, h_f=-1.2)


@pytest.fixture
def l_room():
    """Non-convex room; the wall x = 1 is hidden from the origin."""
    return Layout.from_points(
        [(-2, -2), (4, -2), (4, 3), (1, 3), (1, 1), (-2, 1)], h_c=1.3, h_f=-1.5
    )


@pytest.fixture
def square_obs(square_room, rig):
    return render_boundaries(square_room, rig)
