"""Render ergotropy-vs-time figures from sweep output directories."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .reader import SchemaError, read_trajectory

DEFAULT_COLUMN = "ergotropy_B10"


@dataclass(frozen=True)
class PlotSpec:
    csv_paths: tuple[Path, ...]
    labels: tuple[str, ...]
    out_path: Path
    column: str = DEFAULT_COLUMN
    xlabel: str = "time"
    ylabel: str | None = None
    allow_failed: bool = False
    title: str | None = None

    def __post_init__(self):
        if len(self.csv_paths) == 0:
            raise ValueError("need at least one input CSV")
        if len(self.labels) != len(self.csv_paths):
            raise ValueError("one label per input CSV")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"labels must be unique: {self.labels}")


@dataclass(frozen=True)
class RenderResult:
    out_path: Path
    curve_count: int
    curves: tuple      # (label, times, values) per input, in input order


def sweep_plot_spec(sweep_dir: str | Path, out_path: str | Path | None = None,
                    column: str = DEFAULT_COLUMN,
                    allow_failed: bool = False) -> PlotSpec:
    """Build a PlotSpec from a sweep directory written by the simulator CLI.

    Uses sweep_manifest.json when present (labels become parameter=value),
    otherwise falls back to globbing traj_*.csv.
    """
    sweep_dir = Path(sweep_dir)
    manifest_path = sweep_dir / "sweep_manifest.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text())
        param = manifest.get("parameter", "value")
        paths, labels = [], []
        for point in manifest["points"]:
            paths.append(sweep_dir / point["files"])
            labels.append(f"{param}={point['value']:g}")
    else:
        paths = sorted(sweep_dir.glob("traj_*.csv"))
        labels = [p.stem for p in paths]
    if not paths:
        raise ValueError(f"no trajectory CSVs found in {sweep_dir}")
    if out_path is None:
        out_path = sweep_dir / f"{column}.png"
    return PlotSpec(csv_paths=tuple(paths), labels=tuple(labels),
                    out_path=Path(out_path), column=column,
                    allow_failed=allow_failed,
                    title=sweep_dir.name)


def render_sweep(spec: PlotSpec) -> RenderResult:
    """One figure: x = time, y = the selected column, one curve per CSV.

    Never touches the inputs. Refuses a failed-run CSV unless allow_failed
    is set; raises SchemaError (with the column name) on contract breaks.
    """
    curves = []
    for path, label in zip(spec.csv_paths, spec.labels):
        traj = read_trajectory(path)
        if traj.failed and not spec.allow_failed:
            raise ValueError(
                f"{path} is marked failed; pass allow_failed to plot anyway")
        curves.append((label, traj.column("time"), traj.column(spec.column)))

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, times, values in curves:
        ax.plot(times, values, lw=1.6, label=label)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel or spec.column)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="best", frameon=False)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path)
    plt.close(fig)
    return RenderResult(out_path=spec.out_path, curve_count=len(curves),
                        curves=tuple(curves))
