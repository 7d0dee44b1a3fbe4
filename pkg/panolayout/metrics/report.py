"""
Evaluation Reports

Per-scene evaluation reports, batch result rows and their aggregation
into mean / median / per-wall-count summary rows, written as CSV.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from panolayout.constants import REPORT_COLUMNS
from panolayout.metrics.corners import corner_error, matched_corner_distances
from panolayout.metrics.iou import iou3d, iou3d_u2s
from panolayout.scene.io import write_json
from panolayout.scene.layout import Layout

BATCH_COLUMNS = ("scene", "pose", "mode", "sigma", "n_walls") + REPORT_COLUMNS + ("status",)


@dataclass(frozen=True)
class EvaluationReport:
    """Metrics of one prediction against its ground truth."""

    iou3d: float
    iou3d_u2s: float
    ce: float
    cen: float
    scale_star: float
    corner_distances: Tuple[float, ...] = field(default=(), repr=False)

    def values(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in REPORT_COLUMNS}

    def to_text(self) -> str:
        """Flat ``key=value`` lines."""
        return "".join(f"{k}={format_value(v)}\n" for k, v in self.values().items())

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = dict(self.values())
        data["corner_distances"] = list(self.corner_distances)
        return data


def evaluate(pred: Layout, gt: Layout, metrics=None) -> EvaluationReport:
    """
    Compare a predicted layout with the ground truth.

    ``metrics`` is an optional :class:`~panolayout.config.MetricsConfig`
    for the up-to-scale search.

    Raises:
        ZeroVolumeError, CornerCountMismatchError
    """
    kwargs = {}
    if metrics is not None:
        kwargs = dict(
            scale_min=metrics.scale_min,
            scale_max=metrics.scale_max,
            tol=metrics.scale_tol,
            grid_size=metrics.grid_size,
        )
    iou = iou3d(pred, gt)
    iou_u2s, scale_star = iou3d_u2s(pred, gt, **kwargs)
    ce, cen = corner_error(pred, gt)
    return EvaluationReport(
        iou3d=iou,
        iou3d_u2s=max(iou_u2s, iou),
        ce=ce,
        cen=cen,
        scale_star=scale_star,
        corner_distances=tuple(float(x) for x in matched_corner_distances(pred, gt)),
    )


# =============================================================================
# Batch rows
# =============================================================================

def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


@dataclass(frozen=True)
class SceneResult:
    """One row of a batch: a scene evaluation or the reason it failed."""

    scene: str
    n_walls: int
    report: Optional[EvaluationReport] = None
    error: Optional[str] = None
    pose: int = 0
    mode: str = ""
    sigma: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.report is not None

    def to_row(self) -> Dict[str, str]:
        values = self.report.values() if self.report else {}
        row = {
            "scene": self.scene,
            "pose": str(self.pose),
            "mode": self.mode,
            "sigma": format_value(self.sigma),
            "n_walls": str(self.n_walls),
            "status": "ok" if self.ok else f"failed: {self.error}",
        }
        for name in REPORT_COLUMNS:
            row[name] = format_value(values.get(name))
        return row


def _aggregate(label: str, results: Sequence[SceneResult], reduce, template: SceneResult, n_walls="") -> Dict[str, str]:
    ok = [r for r in results if r.ok]
    row = {
        "scene": label,
        "pose": "",
        "mode": template.mode,
        "sigma": format_value(template.sigma),
        "n_walls": str(n_walls),
        "status": f"ok={len(ok)} failed={len(results) - len(ok)}",
    }
    for name in REPORT_COLUMNS:
        values = [getattr(r.report, name) for r in ok]
        row[name] = format_value(float(reduce(values))) if values else ""
    return row


def summary_rows(results: Sequence[SceneResult]) -> List[Dict[str, str]]:
    """
    Mean and median rows per (mode, sigma) group, followed by one mean row
    per wall count. Groups keep their first-appearance order.
    """
    groups: Dict[Tuple[str, Optional[float]], List[SceneResult]] = {}
    for r in results:
        groups.setdefault((r.mode, r.sigma), []).append(r)

    rows = []
    for members in groups.values():
        template = members[0]
        rows.append(_aggregate("mean", members, np.mean, template))
        rows.append(_aggregate("median", members, np.median, template))
        by_walls = defaultdict(list)
        for r in members:
            by_walls[r.n_walls].append(r)
        for n in sorted(by_walls):
            rows.append(_aggregate("mean", by_walls[n], np.mean, template, n_walls=n))
    return rows


def mean_metric(results: Iterable[SceneResult], name: str = "iou3d") -> float:
    values = [getattr(r.report, name) for r in results if r.ok]
    return float(np.mean(values)) if values else float("nan")


def config_sidecar(path: Union[str, Path]) -> Path:
    """``table.csv`` -> ``table.config.json``."""
    return Path(path).with_suffix(".config.json")


def write_csv(
    target: Union[str, Path, TextIO],
    rows: Iterable[Dict[str, str]],
    config: Optional[Dict[str, Any]] = None,
) -> None:
    """
    UTF-8 CSV with a header row, ``,`` separator and ``\\n`` line endings.

    When writing to a path with ``config`` given, the producing
    configuration goes next to it in :func:`config_sidecar`.
    """
    if isinstance(target, (str, Path)):
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            write_csv(f, rows)
        if config is not None:
            write_json(config_sidecar(path), {"config": config, "table": path.name})
        return
    writer = csv.DictWriter(target, fieldnames=list(BATCH_COLUMNS), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def report_csv_row(report: EvaluationReport) -> str:
    """The five metric columns as one CSV line (no header)."""
    return ",".join(format_value(report.values()[name]) for name in REPORT_COLUMNS)
