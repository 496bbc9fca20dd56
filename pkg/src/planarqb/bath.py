"""Debye bath: spectral density, Redfield rates, and eigenbasis jump channels.

Natural units hbar = k_B = 1 throughout; the reference tables' "Hz" and "K"
magnitudes are used as dimensionless numbers. With SI constants the thermal
factor coth(hbar w / 2 k_B T) would be ~1e13 and no dynamics would fit the
plotted timescales.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import eig_hermitian

PAPER_LITERAL = "paper-literal"
TRANSITION_FREQUENCY = "transition-frequency"
DISSIPATOR_MODES = (PAPER_LITERAL, TRANSITION_FREQUENCY)

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class BathConfig:
    gamma: float = 1e-6
    omega0: float = 0.05
    temperature: float = 300.0
    omega_k: float = 0.085
    mode: str = PAPER_LITERAL

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be > 0")
        if self.temperature <= 0:
            raise ValueError("temperature must be > 0")
        if self.omega_k <= 0:
            raise ValueError("omega_k must be > 0")
        if self.mode not in DISSIPATOR_MODES:
            raise ValueError(f"mode must be one of {DISSIPATOR_MODES}, got {self.mode!r}")


def spectral_density(omega_k: float, cfg: BathConfig) -> float:
    """Debye form J = gamma * w / (w0^2 + w^2)."""
    if omega_k <= 0:
        raise ValueError(f"omega_k must be > 0, got {omega_k}")
    return cfg.gamma * omega_k / (cfg.omega0 ** 2 + omega_k ** 2)


def _coth(x: float) -> float:
    return 1.0 / math.tanh(x)


def redfield_rate(j_value: float, omega_k: float, temperature: float) -> float:
    """Emission-weighted rate J [coth(w/2T) + 1]."""
    if j_value < 0:
        raise ValueError("spectral density must be >= 0")
    if omega_k <= 0:
        raise ValueError(f"omega_k must be > 0, got {omega_k}")
    if temperature <= 0:
        raise ValueError(f"temperature must be > 0, got {temperature}")
    return j_value * (_coth(omega_k / (2.0 * temperature)) + 1.0)


def absorption_rate(j_value: float, omega_k: float, temperature: float) -> float:
    """Upward companion J [coth(w/2T) - 1]; with the emission rate this
    satisfies detailed balance (ratio e^{-w/T})."""
    if j_value < 0:
        raise ValueError("spectral density must be >= 0")
    if omega_k <= 0 or temperature <= 0:
        raise ValueError("omega_k and temperature must be > 0")
    return j_value * (_coth(omega_k / (2.0 * temperature)) - 1.0)


class JumpChannel:
    """One eigenbasis transition |e_target><e_source| with its rate.

    The dense operator is materialized on demand; engines should prefer the
    (basis, target, source) indices, which stay O(dim) per channel.
    """

    __slots__ = ("basis", "target", "source", "rate", "transition_frequency")

    def __init__(self, basis: np.ndarray, target: int, source: int,
                 rate: float, transition_frequency: float):
        if rate < 0:
            raise ValueError(f"rate must be >= 0, got {rate}")
        self.basis = basis
        self.target = int(target)
        self.source = int(source)
        self.rate = float(rate)
        self.transition_frequency = float(transition_frequency)

    @property
    def operator(self) -> np.ndarray:
        return np.outer(self.basis[:, self.target], self.basis[:, self.source].conj())

    def __repr__(self):
        return (f"JumpChannel({self.target}<-{self.source}, rate={self.rate:.4g}, "
                f"freq={self.transition_frequency:.4g})")


def jump_channels(h_rf: np.ndarray, cfg: BathConfig) -> list[JumpChannel]:
    """Dissipation channels from the eigenbasis of a Hermitian operator.

    paper-literal: one channel per ordered eigenpair with e_source above
    e_target (all downward pairs, degenerate ones included), every channel
    carrying the single rate evaluated at the fixed bath frequency omega_k.

    transition-frequency: rates are evaluated at the actual gap in both the
    spectral density and the thermal factor; upward channels with the
    absorption weight are added, and near-degenerate pairs (gap below
    1e-9) are skipped to avoid the coth divergence.
    """
    evals, vecs = eig_hermitian(h_rf)
    dim = len(evals)
    channels: list[JumpChannel] = []
    if cfg.mode == PAPER_LITERAL:
        common = redfield_rate(spectral_density(cfg.omega_k, cfg), cfg.omega_k,
                               cfg.temperature)
        for i in range(dim):
            for j in range(i + 1, dim):
                channels.append(JumpChannel(vecs, target=i, source=j, rate=common,
                                            transition_frequency=evals[j] - evals[i]))
    else:
        for i in range(dim):
            for j in range(i + 1, dim):
                gap = evals[j] - evals[i]
                if gap < DEGENERACY_TOL:
                    continue
                j_gap = spectral_density(gap, cfg)
                down = redfield_rate(j_gap, gap, cfg.temperature)
                up = absorption_rate(j_gap, gap, cfg.temperature)
                channels.append(JumpChannel(vecs, target=i, source=j, rate=down,
                                            transition_frequency=gap))
                channels.append(JumpChannel(vecs, target=j, source=i, rate=up,
                                            transition_frequency=-gap))
    return channels
