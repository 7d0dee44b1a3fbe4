"""
PanoLayout Floor-Plan Plots

Static SVG floor plans: ground truth in green, reconstruction in orange,
the camera circle, wall indices with distances and the heights in the
title. Output is byte-stable across runs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Circle, Polygon as MplPolygon  # noqa: E402

from panolayout.constants import GT_COLOR, PRED_COLOR  # noqa: E402
from panolayout.scene.layout import Layout  # noqa: E402

_RC = {"svg.hashsalt": "panolayout", "svg.fonttype": "none"}


def _draw_layout(ax, layout: Layout, color: str, label: str, annotate: bool) -> None:
    ax.add_patch(MplPolygon(layout.vertices, closed=True, fc="none", ec=color, lw=1.5, label=label))
    if not annotate:
        return
    _, offsets = layout.edge_lines()
    a, b = layout.edges()
    for i, (p, q, d) in enumerate(zip(a, b, offsets)):
        mid = 0.5 * (p + q)
        ax.text(mid[0], mid[1], f"{i}: {d:.2f} m", fontsize=7, color=color, ha="center", va="center")


def plot_floor_plan(
    path: Union[str, Path],
    pred: Optional[Layout] = None,
    gt: Optional[Layout] = None,
    radius: Optional[float] = None,
    title: Optional[str] = None,
) -> Path:
    """
    Write an SVG floor plan of ``pred`` and/or ``gt`` in the camera frame.
    """
    if pred is None and gt is None:
        raise ValueError("nothing to plot")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with plt.rc_context(_RC):
        fig, ax = plt.subplots(1, 1, figsize=(6, 6))
        points = []
        heights = []
        if gt is not None:
            _draw_layout(ax, gt, GT_COLOR, "ground truth", annotate=pred is None)
            points.append(gt.vertices)
            heights.append(f"gt h_c={gt.h_c:.3f} h_f={gt.h_f:.3f}")
        if pred is not None:
            _draw_layout(ax, pred, PRED_COLOR, "reconstruction", annotate=True)
            points.append(pred.vertices)
            heights.append(f"pred h_c={pred.h_c:.3f} h_f={pred.h_f:.3f}")
        if radius:
            ax.add_patch(Circle((0.0, 0.0), radius, fc="none", ec="#555555", lw=0.8, ls="--"))
        ax.plot([0.0], [0.0], "k+", ms=6)

        pts = np.vstack(points)
        pad = 0.1 * float(np.max(pts.max(axis=0) - pts.min(axis=0)))
        ax.set_xlim(pts[:, 0].min() - pad, pts[:, 0].max() + pad)
        ax.set_ylim(pts[:, 1].min() - pad, pts[:, 1].max() + pad)
        ax.set_aspect("equal")
        ax.set_xlabel("x (m)")
        ax.set_ylabel("y (m)")
        ax.legend(loc="upper right", fontsize=7)
        ax.set_title((title + "\n" if title else "") + ", ".join(heights), fontsize=9)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
