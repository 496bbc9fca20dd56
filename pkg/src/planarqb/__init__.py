"""planarqb: driven-dissipative charging of a planar quantum-battery array."""

__version__ = "0.1.0"

from .operators import (ModeLayout, destroy_op, eig_hermitian, embed, expect,
                        number_op, partial_trace, total_number_op, vacuum_state)
from .geometry import Geometry, build_geometry
from .hamiltonian import (HamiltonianParts, SystemConfig, build_hamiltonian,
                          build_minimal_cell, kappa, register_kappa,
                          rotating_frame)
from .bath import (BathConfig, JumpChannel, absorption_rate, jump_channels,
                   redfield_rate, spectral_density)
from .dynamics import (EvolutionSpec, IntegrationError, Observables, Trajectory,
                       default_dt, evolve, rhs, step_rk4)
from .ergotropy import ErgotropyReport, compute_ergotropy, local_ergotropy
from .config import ConfigError, RunSetup, load_setup, setup_from_dict
from .runner import run_single, run_trajectory
from .sweeps import PRESETS, SweepSpec, run_sweep, summary_metrics

__all__ = [
    "ModeLayout", "destroy_op", "eig_hermitian", "embed", "expect",
    "number_op", "partial_trace", "total_number_op", "vacuum_state",
    "Geometry", "build_geometry",
    "HamiltonianParts", "SystemConfig", "build_hamiltonian",
    "build_minimal_cell", "kappa", "register_kappa", "rotating_frame",
    "BathConfig", "JumpChannel", "absorption_rate", "jump_channels",
    "redfield_rate", "spectral_density",
    "EvolutionSpec", "IntegrationError", "Observables", "Trajectory",
    "default_dt", "evolve", "rhs", "step_rk4",
    "ErgotropyReport", "compute_ergotropy", "local_ergotropy",
    "ConfigError", "RunSetup", "load_setup", "setup_from_dict",
    "run_single", "run_trajectory",
    "PRESETS", "SweepSpec", "run_sweep", "summary_metrics",
]
