"""
PanoLayout Command Line Interface

Dataset generation, boundary rendering, layout reconstruction, evaluation
and the Monte-Carlo benchmark.
"""

from __future__ import annotations

import functools
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import click
from loguru import logger
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from tqdm import tqdm

from panolayout import __version__
from panolayout.config import PanoLayoutConfig, load_config
from panolayout.constants import REPORT_COLUMNS, LayoutMode
from panolayout.exceptions import (
    EXIT_CONFIG,
    EXIT_IO,
    PanoLayoutError,
    SolverError,
    exit_code_for,
    handle_solver_error,
)

console = Console()

COLORS = {
    "primary": "white",
    "secondary": "bright_blue",
    "accent": "cyan",
    "success": "green",
    "warning": "yellow",
    "error": "red",
    "muted": "bright_black",
}

CSV_HELP = (
    "CSV columns: scene, pose, mode, sigma, n_walls, iou3d, iou3d_u2s, ce, cen, "
    "scale_star, status. Lengths in meters, angles in radians."
)

EXIT_HELP = (
    "Exit codes: 0 ok, 1 unexpected, 2 usage, 3 parse, 4 degenerate geometry, "
    "5 infeasible layout, 6 I/O, 7 scene, 8 metric, 9 configuration."
)


def _fail(error: BaseException) -> None:
    """Print a red panel and exit with the documented code."""
    if isinstance(error, PanoLayoutError):
        code = exit_code_for(error)
    elif isinstance(error, OSError):
        code = EXIT_IO
    elif isinstance(error, ValueError):
        code = EXIT_CONFIG
    else:
        code = exit_code_for(error)

    body = str(error)
    if isinstance(error, SolverError):
        info = handle_solver_error(error)
        body += "\n\n" + "\n".join(f"  • {s}" for s in info["suggestions"])
    console.print(Panel(body, title=f"[bold {COLORS['error']}]✖ {type(error).__name__}[/]",
                        border_style=COLORS["error"], expand=False))
    logger.debug(f"Exiting with code {code}")
    sys.exit(code)


def handle_errors(func):
    """Turn library errors into a panel and an exit code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (click.exceptions.Exit, click.ClickException, SystemExit):
            raise
        except Exception as e:  # noqa: BLE001
            _fail(e)

    return wrapper


def _override(config: PanoLayoutConfig, section: str, **values: Any) -> PanoLayoutConfig:
    values = {k: v for k, v in values.items() if v is not None}
    if not values:
        return config
    return config.merge_with({section: values})


def _parse_walls(ctx, param, value: Optional[str]):
    if value is None:
        return None
    try:
        lo, hi = (int(x) for x in value.split(":"))
    except ValueError:
        raise click.BadParameter("expected MIN:MAX, e.g. 6:10")
    if lo > hi:
        raise click.BadParameter(f"MIN {lo} is larger than MAX {hi}")
    return lo, hi


def _progress(iterable, total: int, desc: str):
    return tqdm(iterable, total=total, desc=desc, disable=not sys.stderr.isatty())


# ─── MAIN ENTRY ───────────────────────────────────────────────────────────────

@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="YAML or JSON configuration file.")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr.")
@click.version_option(__version__, prog_name="panolayout")
@click.pass_context
def cli(ctx, config_path, verbose):
    """
    PanoLayout: scaled room layouts from non-central circular panoramas.

    \b
    Exit codes: 0 ok, 1 unexpected, 2 usage, 3 parse, 4 degenerate geometry,
    5 infeasible layout, 6 I/O, 7 scene, 8 metric, 9 configuration.
    """
    from panolayout.utils.logger import setup_logging

    try:
        config = load_config(config_path)
    except Exception as e:  # noqa: BLE001
        _fail(e)
    setup_logging(config if config.debug_mode else None, verbose=verbose)
    ctx.obj = {"config": config}


# ─── GENERATE ─────────────────────────────────────────────────────────────────

@cli.command()
@click.option("--n", "n_layouts", type=int, default=None, help="Number of layouts.")
@click.option("--walls", callback=_parse_walls, default=None, help="Wall count range MIN:MAX.")
@click.option("--mode", type=click.Choice([m.value for m in LayoutMode]), default=None)
@click.option("--seed", type=int, default=None, help="Base seed.")
@click.option("--poses", type=int, default=None, help="Camera poses per layout.")
@click.option("--radius", type=float, default=None, help="Camera radius used for clearance (m).")
@click.option("--occluded/--no-occluded", default=None,
              help="Manhattan rooms with the camera outside the kernel (hidden walls).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Output directory.")
@click.pass_context
@handle_errors
def generate(ctx, n_layouts, walls, mode, seed, poses, radius, occluded, out_dir):
    """Generate seeded synthetic layouts and a manifest."""
    from panolayout.scene.generator import DatasetSpec, generate_scene, layout_rng
    from panolayout.scene.io import ManifestEntry, layout_filename, save_layout, write_manifest

    config = ctx.obj["config"]
    config = _override(
        config, "dataset",
        n_layouts=n_layouts,
        walls_min=walls[0] if walls else None,
        walls_max=walls[1] if walls else None,
        mode=mode,
        seed=seed,
        poses_per_layout=poses,
        occluded=occluded,
    )
    config = _override(config, "camera", radius=radius)
    out = Path(out_dir) if out_dir else config.get_output_path() / "layouts"
    spec = DatasetSpec.from_config(config.dataset, config.camera.radius)
    console.print(f"[{COLORS['muted']}]seed={spec.seed} mode={spec.mode.value} "
                  f"walls={spec.walls_min}:{spec.walls_max}[/]")

    config_data = config.to_dict()
    entries: List[ManifestEntry] = []
    for index in _progress(range(spec.n_layouts), spec.n_layouts, "generate"):
        layout = generate_scene(spec, index)
        path = save_layout(out / layout_filename(index), layout, config=config_data)
        entries.append(ManifestEntry(
            index=index,
            path=path,
            seed=[spec.seed, index],
            n_walls=layout.n_walls,
            n_poses=layout.n_poses,
        ))
    manifest = write_manifest(out, entries, config=config_data)
    console.print(f"[{COLORS['success']}]✓ {len(entries)} layouts written, manifest {manifest}[/]")


# ─── RENDER ───────────────────────────────────────────────────────────────────

@cli.command()
@click.argument("layout_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--radius", type=float, default=None, help="Camera radius (m).")
@click.option("--width", type=int, default=None, help="Image width (px).")
@click.option("--height", type=int, default=None, help="Image height (px).")
@click.option("--noise-sigma", type=float, default=None, help="Boundary noise (px).")
@click.option("--seed", type=int, default=None, help="Noise seed.")
@click.option("--blur-corners", is_flag=True, default=None, help="Soften the corner indicator.")
@click.option("--pose", type=int, default=0, show_default=True, help="Camera pose index.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@handle_errors
def render(ctx, layout_path, radius, width, height, noise_sigma, seed, blur_corners, pose, out_path):
    """Render the boundary observation of a layout."""
    from panolayout.geometry.camera import CameraRig
    from panolayout.scene.io import load_layout, save_observation
    from panolayout.scene.render import add_noise, render_boundaries

    config = ctx.obj["config"]
    config = _override(config, "camera", radius=radius, width=width, height=height)
    config = _override(config, "noise", sigma_px=noise_sigma, seed=seed, blur_corners=blur_corners)

    layout = load_layout(layout_path).at_pose(pose)
    rig = CameraRig(config.camera.radius, config.camera.width, config.camera.height)
    obs = render_boundaries(layout, rig)
    if config.noise.sigma_px > 0 or config.noise.blur_corners:
        obs = add_noise(obs, config.noise.sigma_px, config.noise.seed, config.noise.blur_corners)

    out = Path(out_path) if out_path else (
        config.get_output_path() / f"{Path(layout_path).stem}_pose{pose}.obs.json"
    )
    save_observation(out, obs, config=config.to_dict())
    console.print(f"[{COLORS['success']}]✓ Observation written to {out}[/]")


# ─── SOLVE ────────────────────────────────────────────────────────────────────

@cli.command()
@click.argument("observation_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice([m.value for m in LayoutMode]), default=None)
@click.option("--noisy", is_flag=True, help="Use the noisy-data rank tolerance.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), default=None,
              help="Also write an SVG floor plan.")
@click.pass_context
@handle_errors
def solve(ctx, observation_path, mode, noisy, out_path, plot_path):
    """Reconstruct the scaled layout seen in an observation."""
    from panolayout.scene.io import load_observation, save_solution
    from panolayout.solvers.pipeline import reconstruct_layout
    from panolayout.solvers.solution import SolverOptions

    from panolayout.utils.timing import StageTimer

    config = ctx.obj["config"]
    mode = LayoutMode(mode or config.dataset.mode)
    timer = StageTimer()
    with timer.stage("read"):
        obs = load_observation(observation_path)
    options = SolverOptions.from_config(config, noisy=noisy)

    with console.status(f"[{COLORS['accent']}]Solving {mode.value} layout...[/]", spinner="dots"):
        with timer.stage("solve"):
            solution = reconstruct_layout(obs, mode, options)
    layout = solution.layout

    out = Path(out_path) if out_path else (
        config.get_output_path() / f"{Path(observation_path).stem.replace('.obs', '')}.layout.json"
    )
    with timer.stage("write"):
        diagnostics = save_solution(out, solution, config=config.to_dict())
    logger.debug(f"Stage timings (ms): {timer.summary()}")

    table = Table(title=f"{mode.value} layout", show_header=True, header_style="bold cyan")
    table.add_column("Wall", style="cyan")
    table.add_column("d (m)", justify="right")
    table.add_column("Residual", justify="right", style="dim")
    residuals = solution.diagnostics.residuals
    bridged = set(solution.diagnostics.bridged)
    r = iter(residuals)
    for i, wall in enumerate(solution.walls):
        res = "hidden" if i in bridged else f"{next(r, 0.0):.2e}"
        table.add_row(str(i), f"{wall.d:.4f}", res)
    console.print(table)
    console.print(f"h_c = {solution.h_c:.4f} m, h_f = {solution.h_f:.4f} m, "
                  f"area = {layout.area:.3f} m²")

    if plot_path:
        from panolayout.plotting import plot_floor_plan
        plot_floor_plan(plot_path, pred=layout, radius=obs.camera.radius, title=Path(out).stem)
    console.print(f"[{COLORS['success']}]✓ Layout written to {out} (diagnostics {diagnostics})[/]")


# ─── EVALUATE ─────────────────────────────────────────────────────────────────

def _print_summary(rows: Sequence[Dict[str, str]], title: str) -> None:
    table = Table(title=title, show_header=True, header_style="bold cyan")
    for name in ("scene", "mode", "sigma", "n_walls") + REPORT_COLUMNS[:4] + ("status",):
        table.add_column(name)
    for row in rows:
        table.add_row(*(row[name][:10] if name in REPORT_COLUMNS else row[name]
                        for name in ("scene", "mode", "sigma", "n_walls") + REPORT_COLUMNS[:4] + ("status",)))
    console.print(table)


@cli.command(epilog=CSV_HELP)
@click.argument("pred_path", type=click.Path(exists=True, dir_okay=False), required=False)
@click.argument("gt_path", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--manifest", "manifest_path", type=click.Path(exists=True), default=None,
              help="Ground-truth manifest for batch mode.")
@click.option("--pred-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Predictions named like the manifest's layout files (batch mode).")
@click.option("--pose", type=int, default=0, show_default=True, help="Ground-truth pose.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="CSV output.")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), default=None,
              help="SVG with ground truth (green) and prediction overlaid.")
@click.pass_context
@handle_errors
def evaluate(ctx, pred_path, gt_path, manifest_path, pred_dir, pose, out_path, plot_path):
    """Compare reconstructed layouts with ground truth."""
    from panolayout.metrics.report import SceneResult, evaluate as evaluate_layouts
    from panolayout.metrics.report import config_sidecar, report_csv_row, summary_rows, write_csv
    from panolayout.scene.io import load_layout, read_manifest

    config = ctx.obj["config"]

    if manifest_path:
        if not pred_dir:
            raise click.UsageError("--manifest needs --pred-dir")
        results = []
        for entry in read_manifest(manifest_path):
            gt = load_layout(entry.path).at_pose(pose)
            try:
                pred = load_layout(Path(pred_dir) / entry.path.name)
                report = evaluate_layouts(pred, gt, config.metrics)
                results.append(SceneResult(entry.path.stem, gt.n_walls, report, pose=pose))
            except (PanoLayoutError, OSError) as e:
                results.append(SceneResult(entry.path.stem, gt.n_walls, error=str(e), pose=pose))
        rows = [r.to_row() for r in results] + summary_rows(results)
        _print_summary(rows, "Evaluation")
    else:
        if not (pred_path and gt_path):
            raise click.UsageError("give PRED_PATH and GT_PATH, or --manifest")
        pred = load_layout(pred_path)
        gt = load_layout(gt_path).at_pose(pose)
        report = evaluate_layouts(pred, gt, config.metrics)
        rows = [SceneResult(Path(pred_path).stem, gt.n_walls, report, pose=pose).to_row()]
        console.print(report.to_text(), end="")
        console.print(",".join(REPORT_COLUMNS), markup=False, soft_wrap=True)
        console.print(report_csv_row(report), markup=False, soft_wrap=True)
        if plot_path:
            from panolayout.plotting import plot_floor_plan
            plot_floor_plan(plot_path, pred=pred, gt=gt, radius=config.camera.radius)

    out = Path(out_path) if out_path else config.get_output_path() / "evaluation.csv"
    write_csv(out, rows, config=config.to_dict())
    console.print(f"[{COLORS['success']}]✓ Report written to {out} (config {config_sidecar(out).name})[/]")


# ─── BENCH ────────────────────────────────────────────────────────────────────

class BenchTask(NamedTuple):
    scene: str
    index: int
    layout: Dict[str, Any]
    pose: int
    sigma: float
    sigma_index: int
    mode: str
    config: Dict[str, Any]


def run_bench_task(task: BenchTask):
    """Render, perturb, reconstruct and evaluate one (scene, pose, sigma)."""
    from panolayout.geometry.camera import CameraRig
    from panolayout.metrics.report import SceneResult, evaluate as evaluate_layouts
    from panolayout.scene.layout import Layout
    from panolayout.scene.render import add_noise, render_boundaries
    from panolayout.solvers.pipeline import reconstruct_layout
    from panolayout.solvers.solution import SolverOptions

    config = PanoLayoutConfig.from_dict(task.config)
    gt = Layout.from_dict(task.layout).at_pose(task.pose)
    common = dict(pose=task.pose, mode=task.mode, sigma=task.sigma)
    try:
        rig = CameraRig(config.camera.radius, config.camera.width, config.camera.height)
        obs = render_boundaries(gt, rig)
        if task.sigma > 0 or config.noise.blur_corners:
            seed = [config.noise.seed, task.index, task.pose, task.sigma_index]
            obs = add_noise(obs, task.sigma, seed, config.noise.blur_corners)
        options = SolverOptions.from_config(config, noisy=task.sigma > 0)
        solution = reconstruct_layout(obs, task.mode, options)
        report = evaluate_layouts(solution.layout, gt, config.metrics)
        return SceneResult(task.scene, gt.n_walls, report, **common)
    except PanoLayoutError as e:
        return SceneResult(task.scene, gt.n_walls, error=str(e), **common)


@cli.command(epilog=CSV_HELP)
@click.argument("manifest_path", type=click.Path(exists=True))
@click.option("--sigma", "sigmas", type=float, multiple=True,
              help="Noise levels in px (repeatable); defaults to bench.sigma_grid.")
@click.option("--mode", type=click.Choice([m.value for m in LayoutMode]), default=None)
@click.option("--workers", type=int, default=None, help="Worker processes.")
@click.option("--limit", type=int, default=None, help="Only the first N layouts.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="CSV output.")
@click.pass_context
@handle_errors
def bench(ctx, manifest_path, sigmas, mode, workers, limit, out_path):
    """Monte-Carlo benchmark: render -> noise -> solve -> evaluate per sigma."""
    from panolayout.metrics.report import config_sidecar, mean_metric, summary_rows, write_csv
    from panolayout.scene.io import load_layout, read_manifest

    config = ctx.obj["config"]
    config = _override(config, "bench", sigma_grid=list(sigmas) if sigmas else None, workers=workers)
    mode = mode or config.dataset.mode
    config_data = config.to_dict()

    entries = read_manifest(manifest_path)[:limit]
    tasks = []
    for k, sigma in enumerate(config.bench.sigma_grid):
        for entry in entries:
            layout = load_layout(entry.path)
            for pose in range(layout.n_poses):
                tasks.append(BenchTask(entry.path.stem, entry.index, layout.to_dict(),
                                       pose, float(sigma), k, mode, config_data))

    logger.info(f"Bench: {len(tasks)} runs over {len(entries)} layouts, {config.bench.workers} worker(s)")
    if config.bench.workers > 1:
        with ProcessPoolExecutor(max_workers=config.bench.workers) as pool:
            results = list(_progress(pool.map(run_bench_task, tasks, chunksize=4), len(tasks), "bench"))
    else:
        results = [run_bench_task(t) for t in _progress(tasks, len(tasks), "bench")]

    rows = [r.to_row() for r in results] + summary_rows(results)
    out = Path(out_path) if out_path else config.get_output_path() / "bench.csv"
    write_csv(out, rows, config=config_data)

    table = Table(title=f"Benchmark ({mode})", show_header=True, header_style="bold cyan")
    for name in ("sigma", "iou3d", "iou3d_u2s", "ce", "cen", "failed"):
        table.add_column(name, justify="right")
    for sigma in config.bench.sigma_grid:
        group = [r for r in results if r.sigma == float(sigma)]
        table.add_row(
            f"{sigma:g}",
            *(f"{mean_metric(group, name):.4f}" for name in ("iou3d", "iou3d_u2s", "ce", "cen")),
            str(sum(not r.ok for r in group)),
        )
    console.print(table)
    console.print(f"[{COLORS['success']}]✓ Bench table written to {out} (config {config_sidecar(out).name})[/]")


# ─── CONFIG ───────────────────────────────────────────────────────────────────

@cli.group("config")
def config_group():
    """Inspect or create configuration files."""


@config_group.command("show")
@click.pass_context
def config_show(ctx):
    """Print the effective configuration."""
    import yaml

    config = ctx.obj["config"]
    console.print(Panel(yaml.safe_dump(config.to_dict(), sort_keys=False).rstrip(),
                        title="[bold cyan]Effective configuration[/]",
                        border_style=COLORS["accent"], expand=False))


@config_group.command("init")
@click.argument("path", type=click.Path(dir_okay=False), default="panolayout.yaml")
@click.option("--force", is_flag=True, help="Overwrite an existing file.")
@click.pass_context
@handle_errors
def config_init(ctx, path, force):
    """Write the effective configuration to PATH (YAML or JSON)."""
    if Path(path).exists() and not force:
        raise click.UsageError(f"{path} exists; use --force to overwrite")
    ctx.obj["config"].to_file(path)
    console.print(f"[{COLORS['success']}]✓ Configuration written to {path}[/]")


# ─── INFO ─────────────────────────────────────────────────────────────────────

@cli.command()
@click.pass_context
def info(ctx):
    """Show version, dependencies and solver settings."""
    import importlib.metadata as metadata
    import platform

    config = ctx.obj["config"]
    table = Table(show_header=True, header_style="bold white")
    table.add_column("Component", style="cyan")
    table.add_column("Details", style="white")
    table.add_row("panolayout", __version__)
    table.add_row("Python", platform.python_version())
    for dep in ("numpy", "scipy", "shapely", "matplotlib", "pydantic", "click", "rich"):
        try:
            table.add_row(f"  {dep}", metadata.version(dep))
        except metadata.PackageNotFoundError:
            table.add_row(f"  {dep}", "[red]○ missing[/]")
    table.add_row("Camera", f"R={config.camera.radius} m, {config.camera.width}x{config.camera.height}")
    table.add_row("Solver", f"rank_tol={config.solver.rank_tol:g} lambda_tol={config.solver.lambda_tol:g} "
                            f"rays/line={config.solver.max_rays_per_line}")
    console.print(table)


def main():
    cli()


if __name__ == "__main__":
    main()
