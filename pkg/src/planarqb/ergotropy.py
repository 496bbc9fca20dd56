"""Ergotropy: maximum unitarily extractable work of a state under a Hamiltonian.

The minimizing unitary maps the state onto its passive counterpart, which
pairs the state's populations (sorted descending) with the Hamiltonian's
levels (sorted ascending); that closed form replaces any numerical search
over the unitary group.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import (ModeLayout, check_density_matrix, eig_hermitian, expect,
                        hermiticity_defect, number_op, partial_trace)


@dataclass(frozen=True)
class ErgotropyReport:
    energy: float
    passive_energy: float
    ergotropy: float
    spectrum_rho: np.ndarray      # descending populations
    spectrum_h: np.ndarray        # ascending levels


def compute_ergotropy(rho: np.ndarray, h: np.ndarray) -> ErgotropyReport:
    rho = np.asarray(rho, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if rho.shape != h.shape:
        raise ValueError(f"shape mismatch: {rho.shape} vs {h.shape}")
    check_density_matrix(rho, "rho")
    if hermiticity_defect(h) > 1e-10:
        raise ValueError("h is not Hermitian")

    levels, _ = eig_hermitian(h)
    populations = np.sort(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))[::-1]
    passive = float(np.dot(populations, levels))
    energy = float(expect(rho, h).real)
    return ErgotropyReport(
        energy=energy,
        passive_energy=passive,
        ergotropy=energy - passive,
        spectrum_rho=populations,
        spectrum_h=levels,
    )


def local_ergotropy(rho_full: np.ndarray, cell_index: int, layout: ModeLayout,
                    omega_cell: float) -> ErgotropyReport:
    """Ergotropy of one mode's reduced state against its bare Hamiltonian
    omega_cell * n. Interaction energy is deliberately excluded from the
    per-cell figure of merit."""
    reduced = partial_trace(rho_full, cell_index, layout)
    h_local = omega_cell * number_op(layout.cutoff)
    return compute_ergotropy(reduced, h_local)
