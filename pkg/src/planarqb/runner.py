"""Single-run execution: assemble the generator, integrate, serialize.

The dissipation channels are built from the eigenbasis of the static
Hamiltonian (no drive term): those are the eigenstates the transition
operators connect, and because every coupling conserves total excitation
number the resulting dissipator is identical in the lab and rotating
frames. The coherent part is integrated in the rotating frame, where the
drive is time-independent.
"""

from __future__ import annotations

import os
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bath import jump_channels
from .config import RunSetup, manifest_dict, resolve_defaults
from .dynamics import (EvolutionSpec, IntegrationError, Observables, Trajectory,
                       default_dt, evolve)
from .hamiltonian import build_hamiltonian, rotating_frame
from .operators import ModeLayout

import json

CSV_HEADER = "time,ergotropy_B10,ergotropy_B11,ergotropy_global,energy_total,trace,purity"
TRACKED_CELLS = ("B10", "B11")
FAILURE_MARKER = "# FAILED"


def _tracked_cells(layout: ModeLayout) -> tuple[tuple[str, int], ...]:
    return tuple((label, layout.index_of(label))
                 for label in TRACKED_CELLS if label in layout.labels)


def run_trajectory(setup: RunSetup) -> tuple[Trajectory, float]:
    """Integrate one configuration; returns (trajectory, resolved dt).

    An aborted integration raises IntegrationError whose .trajectory holds
    the samples up to the last good time.
    """
    setup = resolve_defaults(setup)
    parts = build_hamiltonian(setup.system)
    h_rf = rotating_frame(parts, setup.system.drive_omega_f)
    channels = jump_channels(parts.h_static, setup.bath)
    observers = Observables(
        layout=parts.layout,
        h_static=parts.h_static,
        omega_cell=setup.system.omega_cell,
        tracked_cells=_tracked_cells(parts.layout),
    )
    dt = setup.evolution.dt
    if dt is None:
        dt = default_dt(h_rf, channels)
    spec = EvolutionSpec(t_end=setup.evolution.t_end, dt=dt,
                         record_every=setup.evolution.record_every,
                         initial_state=setup.evolution.initial_state)
    trajectory = evolve(spec, h_rf, channels, observers)
    return trajectory, dt


def _fmt(x: float) -> str:
    return f"{x:.11e}"          # 12 significant digits


def trajectory_csv_text(traj: Trajectory) -> str:
    lines = [CSV_HEADER]
    zeros = np.zeros(len(traj.times))
    b10 = traj.cell_ergotropy.get("B10", zeros)
    b11 = traj.cell_ergotropy.get("B11", zeros)
    for k in range(len(traj.times)):
        lines.append(",".join(_fmt(v) for v in (
            traj.times[k], b10[k], b11[k], traj.global_ergotropy[k],
            traj.total_energy[k], traj.trace[k], traj.purity[k])))
    if traj.failed:
        lines.append(f"{FAILURE_MARKER} reason={traj.failure_reason} "
                     f"t={traj.failure_time:g}")
    return "\n".join(lines) + "\n"


def write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def write_trajectory_csv(traj: Trajectory, path: Path) -> None:
    write_atomic(path, trajectory_csv_text(traj))


def write_manifest(path: Path, setup: RunSetup, dt: float, duration: float,
                   traj: Trajectory | None) -> None:
    payload = manifest_dict(setup, dt_resolved=dt, version=__version__,
                            duration=duration, trajectory=traj)
    write_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def run_single(setup: RunSetup, out_dir: Path,
               csv_name: str = "trajectory.csv",
               manifest_name: str = "manifest.json") -> Trajectory:
    """Run one config and write its CSV and manifest into out_dir.

    On integration failure the partial CSV (with a failure marker line) and
    a failed-status manifest are still written, then the error propagates.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.monotonic()
    try:
        traj, dt = run_trajectory(setup)
    except IntegrationError as exc:
        dt = setup.evolution.dt
        if dt is None:
            # recompute for the manifest; cheap relative to the failed run
            setup_r = resolve_defaults(setup)
            parts = build_hamiltonian(setup_r.system)
            h_rf = rotating_frame(parts, setup_r.system.drive_omega_f)
            dt = default_dt(h_rf, jump_channels(parts.h_static, setup_r.bath))
        write_trajectory_csv(exc.trajectory, out_dir / csv_name)
        write_manifest(out_dir / manifest_name, setup, dt,
                       time.monotonic() - t0, exc.trajectory)
        raise
    write_trajectory_csv(traj, out_dir / csv_name)
    write_manifest(out_dir / manifest_name, setup, dt,
                   time.monotonic() - t0, traj)
    return traj


def read_trajectory_csv(path: Path) -> tuple[dict[str, np.ndarray], bool]:
    """Parse a trajectory CSV; returns (columns, failed flag)."""
    lines = Path(path).read_text().strip().split("\n")
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: unexpected header {lines[0]!r}")
    failed = bool(lines) and lines[-1].startswith(FAILURE_MARKER)
    rows = lines[1:-1] if failed else lines[1:]
    names = CSV_HEADER.split(",")
    if not rows:
        return {n: np.zeros(0) for n in names}, failed
    data = np.array([[float(v) for v in row.split(",")] for row in rows])
    return {n: data[:, i] for i, n in enumerate(names)}, failed
