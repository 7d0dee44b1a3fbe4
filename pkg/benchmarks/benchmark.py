import os
import sys

import numpy as np
from loguru import logger

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from panolayout.config import load_config
from panolayout.constants import LayoutMode
from panolayout.exceptions import PanoLayoutError
from panolayout.geometry.camera import CameraRig
from panolayout.metrics.iou import iou3d
from panolayout.scene.generator import DatasetSpec, generate_layout
from panolayout.scene.render import render_boundaries
from panolayout.solvers.pipeline import reconstruct_layout
from panolayout.solvers.solution import SolverOptions
from panolayout.utils.timing import StageTimer

N_LAYOUTS = 50


def run_benchmark():
    logger.info("Initializing PanoLayout solver benchmark...")
    config = load_config()
    rig = CameraRig(config.camera.radius, config.camera.width, config.camera.height)
    options = SolverOptions.from_config(config)

    timer = StageTimer()
    ious = {mode: [] for mode in LayoutMode}
    failures = {mode: 0 for mode in LayoutMode}

    for mode in LayoutMode:
        spec = DatasetSpec(walls_min=4, walls_max=10, mode=mode, seed=config.dataset.seed,
                           radius=config.camera.radius)
        logger.info(f"Timing {mode.value}: {N_LAYOUTS} layouts...")
        for index in range(N_LAYOUTS):
            room = generate_layout(spec, index)
            with timer.stage("render"):
                obs = render_boundaries(room, rig)
            try:
                with timer.stage(f"solve_{mode.value}"):
                    solution = reconstruct_layout(obs, mode, options)
            except PanoLayoutError as e:
                failures[mode] += 1
                logger.warning(f"{mode.value} layout {index}: {e}")
                continue
            ious[mode].append(iou3d(solution.layout, room))

    print("\n" + "=" * 50)
    print("PANOLAYOUT SOLVER BENCHMARK")
    print("=" * 50)
    for name, stats in timer.summary().items():
        print(f"{name:<22}: {stats['mean_ms']:8.2f} ms mean over {int(stats['count'])} runs")
    print("-" * 50)
    for mode in LayoutMode:
        mean_iou = np.mean(ious[mode]) if ious[mode] else float("nan")
        print(f"{mode.value:<22}: iou3d {mean_iou:.6f}, {failures[mode]} failed")
    print("=" * 50 + "\n")


if __name__ == "__main__":
    run_benchmark()
