"""Fixed-step RK4 integration of the jump-form master equation.

The generator is

    drho/dt = -i [H_RF, rho]
            + sum_ch r_ch (2 L rho L^dag - L^dag L rho - rho L^dag L)

in the rotating frame. The printed master equation omits the symmetric
-rho L^dag L term, which would break Hermiticity and trace conservation;
the standard completion is applied here.

When every channel shares one eigenbasis (the usual case), the dissipator
is applied in that basis in O(dim^2) per evaluation instead of looping over
the O(dim^2) channels; the state is rotated back only at recorded samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .bath import JumpChannel
from .ergotropy import compute_ergotropy
from .operators import (ModeLayout, check_density_matrix, expect,
                        hermiticity_defect, partial_trace, vacuum_state)

TRACE_DRIFT_LIMIT = 1e-6
NEGATIVITY_LIMIT = -1e-6
DT_SAFETY_FACTOR = 20.0


class IntegrationError(RuntimeError):
    """Integration aborted; carries the partial trajectory and last good time."""

    def __init__(self, reason: str, time: float, trajectory: "Trajectory"):
        super().__init__(f"integration failed at t={time:g}: {reason}")
        self.reason = reason
        self.time = time
        self.trajectory = trajectory


@dataclass(frozen=True)
class EvolutionSpec:
    t_end: float
    dt: float | None = None          # None -> stability-based default
    record_every: int = 1
    initial_state: Union[str, np.ndarray] = "vacuum"

    def __post_init__(self):
        if self.dt is not None:
            if self.dt <= 0:
                raise ValueError("dt must be > 0")
            if self.t_end < self.dt:
                raise ValueError("t_end must be >= dt")
        elif self.t_end <= 0:
            raise ValueError("t_end must be > 0")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass(frozen=True)
class Observables:
    """What to record along a trajectory."""

    layout: ModeLayout
    h_static: np.ndarray
    omega_cell: float
    tracked_cells: tuple[tuple[str, int], ...]   # (label, mode index)


@dataclass
class Trajectory:
    times: np.ndarray
    cell_ergotropy: dict[str, np.ndarray]
    global_ergotropy: np.ndarray
    total_energy: np.ndarray
    trace: np.ndarray
    purity: np.ndarray
    hermiticity_defect: np.ndarray
    final_state: np.ndarray | None = None
    failed: bool = False
    failure_reason: str | None = None
    failure_time: float | None = None

    @property
    def max_trace_drift(self) -> float:
        return float(np.abs(self.trace - 1.0).max()) if len(self.trace) else 0.0


def rhs(rho: np.ndarray, h_rf: np.ndarray,
        channels: Sequence[JumpChannel]) -> np.ndarray:
    """Generator applied to rho in the Fock basis."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != h_rf.shape:
        raise ValueError(f"shape mismatch: rho {rho.shape} vs H {h_rf.shape}")
    out = -1j * (h_rf @ rho - rho @ h_rf)
    for ch in channels:
        vt = ch.basis[:, ch.target]
        vs = ch.basis[:, ch.source]
        if vt.shape[0] != rho.shape[0]:
            raise ValueError("channel dimension does not match the state")
        # L = |t><s|: 2 L rho L^dag = 2 <s|rho|s> |t><t|, L^dag L = |s><s|
        p_s = vs.conj() @ rho @ vs
        rho_vs = rho @ vs
        vs_rho = vs.conj() @ rho
        out += ch.rate * (2.0 * p_s * np.outer(vt, vt.conj())
                          - np.outer(vs, vs_rho)
                          - np.outer(rho_vs, vs.conj()))
    return out


def step_rk4(rho: np.ndarray, dt: float,
             rhs_fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Classic RK4 update, re-Hermitized; the trace is left untouched so
    drift stays visible as a diagnostic."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    k1 = rhs_fn(rho)
    k2 = rhs_fn(rho + (0.5 * dt) * k1)
    k3 = rhs_fn(rho + (0.5 * dt) * k2)
    k4 = rhs_fn(rho + dt * k3)
    out = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return 0.5 * (out + out.conj().T)


def _shared_basis(channels: Sequence[JumpChannel]) -> np.ndarray | None:
    if not channels:
        return None
    basis = channels[0].basis
    for ch in channels[1:]:
        if ch.basis is not basis:
            return None
    return basis


def _outflow_rates(dim: int, channels: Sequence[JumpChannel]) -> np.ndarray:
    """Per-eigenstate total outflow 2 sum_i R_{i,a} in the shared basis."""
    gamma = np.zeros(dim)
    for ch in channels:
        gamma[ch.source] += 2.0 * ch.rate
    return gamma


def default_dt(h_rf: np.ndarray, channels: Sequence[JumpChannel]) -> float:
    """Stability-based step: (20 max(|H|_max, max total jump rate))^-1.

    The rate entering the bound is the largest total dissipative outflow of
    any eigenstate, which is the stiffness scale of the generator.
    """
    h_scale = float(np.abs(h_rf).max())
    dim = h_rf.shape[0]
    basis = _shared_basis(channels)
    if basis is not None:
        r_scale = float(_outflow_rates(dim, channels).max()) if channels else 0.0
    elif channels:
        diag = np.zeros(dim)
        for ch in channels:
            diag += 2.0 * ch.rate * np.abs(ch.basis[:, ch.source]) ** 2
        r_scale = float(diag.max())
    else:
        r_scale = 0.0
    scale = max(h_scale, r_scale)
    if scale <= 0.0:
        raise ValueError("cannot infer a step size for a null generator; set dt")
    return 1.0 / (DT_SAFETY_FACTOR * scale)


def evolve(spec: EvolutionSpec, h_rf: np.ndarray,
           channels: Sequence[JumpChannel], observers: Observables) -> Trajectory:
    """Integrate from the initial state, recording observables every
    record_every steps. Aborts (IntegrationError) on trace drift beyond
    1e-6, reduced-state negativity beyond -1e-6, or non-finite entries.
    """
    layout = observers.layout
    dim = layout.dim
    if h_rf.shape != (dim, dim):
        raise ValueError(f"h_rf is {h_rf.shape}, layout dimension {dim}")

    if isinstance(spec.initial_state, str):
        if spec.initial_state != "vacuum":
            raise ValueError(f"unknown initial state {spec.initial_state!r}")
        rho0 = vacuum_state(layout)
    else:
        rho0 = np.asarray(spec.initial_state, dtype=complex)
        check_density_matrix(rho0, "initial state")
        if rho0.shape != (dim, dim):
            raise ValueError("initial state dimension does not match the layout")

    dt = spec.dt if spec.dt is not None else default_dt(h_rf, channels)
    n_rec = int(np.floor(spec.t_end / (dt * spec.record_every) + 1e-9)) + 1
    sample_dt = dt * spec.record_every

    basis = _shared_basis(channels)
    if basis is not None:
        rate_matrix = np.zeros((dim, dim))
        for ch in channels:
            rate_matrix[ch.target, ch.source] += ch.rate
        gamma = rate_matrix.sum(axis=0)
        damping = gamma[:, None] + gamma[None, :]
        h_rot = basis.conj().T @ h_rf @ basis

        def rhs_fast(rt: np.ndarray) -> np.ndarray:
            out = -1j * (h_rot @ rt - rt @ h_rot)
            out += np.diag(2.0 * (rate_matrix @ np.diag(rt)))
            out -= damping * rt
            return out

        rhs_fn = rhs_fast
        state = basis.conj().T @ rho0 @ basis
        to_fock = lambda rt: basis @ rt @ basis.conj().T
    else:
        rhs_fn = lambda r: rhs(r, h_rf, channels)
        state = rho0.copy()
        to_fock = lambda rt: rt

    h_levels = np.linalg.eigvalsh(observers.h_static)
    cell_levels = observers.omega_cell * np.arange(layout.cutoff)

    times = np.zeros(n_rec)
    cell_erg = {label: np.zeros(n_rec) for label, _ in observers.tracked_cells}
    glob = np.zeros(n_rec)
    energy = np.zeros(n_rec)
    trace = np.zeros(n_rec)
    purity = np.zeros(n_rec)
    herm = np.zeros(n_rec)

    def finish(k: int, failed: bool, reason: str | None, t_fail: float | None,
               final: np.ndarray | None) -> Trajectory:
        return Trajectory(
            times=times[:k], global_ergotropy=glob[:k], total_energy=energy[:k],
            cell_ergotropy={lab: v[:k] for lab, v in cell_erg.items()},
            trace=trace[:k], purity=purity[:k], hermiticity_defect=herm[:k],
            final_state=final, failed=failed, failure_reason=reason,
            failure_time=t_fail,
        )

    defect_running = 0.0
    rho_fock = None
    for k in range(n_rec):
        t_now = k * sample_dt
        rho_fock = to_fock(state)

        if not np.all(np.isfinite(state.view(float))):
            raise IntegrationError("non-finite state entries",
                                   t_now, finish(k, True, "non-finite", t_now, None))
        tr = float(np.trace(rho_fock).real)
        if abs(tr - 1.0) > TRACE_DRIFT_LIMIT:
            raise IntegrationError(f"trace drift {tr - 1.0:.3e}",
                                   t_now, finish(k, True, "trace-drift", t_now, None))

        times[k] = t_now
        trace[k] = tr
        purity[k] = float(np.vdot(state, state).real)
        energy[k] = float(expect(rho_fock, observers.h_static).real)
        populations = np.sort(np.linalg.eigvalsh(state))[::-1]
        glob[k] = energy[k] - float(populations @ h_levels)
        herm[k] = defect_running
        defect_running = 0.0

        for label, mode in observers.tracked_cells:
            reduced = partial_trace(rho_fock, mode, layout)
            pops = np.sort(np.linalg.eigvalsh(0.5 * (reduced + reduced.conj().T)))[::-1]
            if pops[-1] < NEGATIVITY_LIMIT:
                raise IntegrationError(
                    f"reduced state of {label} has eigenvalue {pops[-1]:.3e}",
                    t_now, finish(k, True, "negativity", t_now, None))
            e_loc = float(np.real(np.diag(reduced)) @ cell_levels)
            cell_erg[label][k] = e_loc - float(pops @ cell_levels)

        if k == n_rec - 1:
            break
        # instability is detected at the next sample; don't warn on the way
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(spec.record_every):
                k1 = rhs_fn(state)
                k2 = rhs_fn(state + (0.5 * dt) * k1)
                k3 = rhs_fn(state + (0.5 * dt) * k2)
                k4 = rhs_fn(state + dt * k3)
                raw = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                defect_running = max(defect_running, hermiticity_defect(raw))
                state = 0.5 * (raw + raw.conj().T)

    return finish(n_rec, False, None, None, rho_fock)
