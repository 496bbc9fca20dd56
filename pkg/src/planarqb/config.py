"""Run configuration: JSON ingestion, default resolution, manifests.

A config file is a JSON object with "system", "bath" and "evolution"
sections; a run manifest embeds the fully resolved config under "config"
and is itself accepted anywhere a config is, so any manifest reproduces
its run exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .bath import BathConfig
from .dynamics import EvolutionSpec, Trajectory
from .hamiltonian import SystemConfig


class ConfigError(ValueError):
    """Invalid configuration; message carries the offending field."""


_SYSTEM_KEYS = set(SystemConfig.__dataclass_fields__)
_BATH_KEYS = set(BathConfig.__dataclass_fields__)
_EVOLUTION_KEYS = {"t_end", "dt", "record_every", "initial_state"}


@dataclass(frozen=True)
class RunSetup:
    system: SystemConfig
    bath: BathConfig
    evolution: EvolutionSpec


def _check_keys(section: str, data: dict, allowed: set) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"{section}: unknown field(s) {sorted(unknown)}")


def _build_section(section: str, cls, data: dict) -> Any:
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}: {exc}") from exc


def setup_from_dict(raw: dict) -> RunSetup:
    if "config" in raw:        # a manifest doubles as a config
        raw = raw["config"]
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(raw) - {"system", "bath", "evolution"}
    if unknown:
        raise ConfigError(f"unknown top-level section(s) {sorted(unknown)}")

    system_raw = dict(raw.get("system", {}))
    bath_raw = dict(raw.get("bath", {}))
    evo_raw = dict(raw.get("evolution", {}))
    _check_keys("system", system_raw, _SYSTEM_KEYS)
    _check_keys("bath", bath_raw, _BATH_KEYS)
    _check_keys("evolution", evo_raw, _EVOLUTION_KEYS)
    if "t_end" not in evo_raw:
        raise ConfigError("evolution: t_end is required")

    system = _build_section("system", SystemConfig, system_raw)
    bath = _build_section("bath", BathConfig, bath_raw)
    evolution = _build_section("evolution", EvolutionSpec, evo_raw)
    return RunSetup(system=system, bath=bath, evolution=evolution)


def load_setup(path: str | Path) -> RunSetup:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: JSON parse error at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    return setup_from_dict(raw)


def resolve_defaults(setup: RunSetup) -> RunSetup:
    """Materialize every optional field except dt (resolved at run time,
    when the generator's scales are known)."""
    sys_cfg = setup.system
    resolved = SystemConfig(
        n_layers=sys_cfg.n_layers,
        omega_cell=sys_cfg.omega_cell,
        g=sys_cfg.g,
        t_e=sys_cfg.t_e,
        s=sys_cfg.s,
        omega_c=sys_cfg.charger_frequency,
        drive_amplitude=sys_cfg.drive_f,
        drive_frequency=sys_cfg.drive_omega_f,
        cutoff=sys_cfg.cutoff,
        kappa_law=sys_cfg.kappa_law,
    )
    return RunSetup(system=resolved, bath=setup.bath, evolution=setup.evolution)


def setup_to_dict(setup: RunSetup, dt_resolved: float | None = None) -> dict:
    """JSON-ready config dict with all defaults applied."""
    setup = resolve_defaults(setup)
    evo = setup.evolution
    if not isinstance(evo.initial_state, str):
        raise ConfigError("only named initial states can be serialized")
    return {
        "system": {
            "n_layers": setup.system.n_layers,
            "omega_cell": setup.system.omega_cell,
            "g": setup.system.g,
            "t_e": setup.system.t_e,
            "s": setup.system.s,
            "omega_c": setup.system.omega_c,
            "drive_amplitude": setup.system.drive_amplitude,
            "drive_frequency": setup.system.drive_frequency,
            "cutoff": setup.system.cutoff,
            "kappa_law": setup.system.kappa_law,
        },
        "bath": {
            "gamma": setup.bath.gamma,
            "omega0": setup.bath.omega0,
            "temperature": setup.bath.temperature,
            "omega_k": setup.bath.omega_k,
            "mode": setup.bath.mode,
        },
        "evolution": {
            "t_end": evo.t_end,
            "dt": dt_resolved if evo.dt is None else evo.dt,
            "record_every": evo.record_every,
            "initial_state": evo.initial_state,
        },
    }


def manifest_dict(setup: RunSetup, dt_resolved: float, version: str,
                  duration: float, trajectory: Trajectory | None) -> dict:
    diag: dict[str, Any] = {"status": "ok", "failure_reason": None,
                            "failure_time": None, "max_trace_drift": None,
                            "max_hermiticity_defect": None}
    if trajectory is not None:
        diag["status"] = "failed" if trajectory.failed else "ok"
        diag["failure_reason"] = trajectory.failure_reason
        diag["failure_time"] = trajectory.failure_time
        diag["max_trace_drift"] = trajectory.max_trace_drift
        if len(trajectory.hermiticity_defect):
            diag["max_hermiticity_defect"] = float(trajectory.hermiticity_defect.max())
    return {
        "config": setup_to_dict(setup, dt_resolved=dt_resolved),
        "code_version": version,
        "duration_seconds": duration,
        "diagnostics": diag,
    }
