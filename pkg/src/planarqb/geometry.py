"""Planar array geometry: a central charger and n triangular layers of cells.

Layer i (1-based) holds cells B_ij with j = 0..i. The charger couples to the
first layer; consecutive layers connect along (i,j)-(i+1,j) and
(i,j)-(i+1,j+1); cells adjacent within a layer are tunneling-coupled.
"""

from __future__ import annotations

from dataclasses import dataclass

CHARGER = "C"


def cell_label(layer: int, pos: int) -> str:
    return f"B{layer}{pos}"


@dataclass(frozen=True)
class Geometry:
    sites: tuple[str, ...]
    charger_bonds: tuple[tuple[str, str], ...]
    interlayer_bonds: tuple[tuple[str, str], ...]
    intralayer_bonds: tuple[tuple[str, str], ...]

    @property
    def cell_count(self) -> int:
        return len(self.sites) - 1

    @property
    def coupling_bonds(self) -> tuple[tuple[str, str], ...]:
        """Bonds carrying the coupling strength g (charger + interlayer)."""
        return self.charger_bonds + self.interlayer_bonds


def build_geometry(n_layers: int) -> Geometry:
    """Site and bond lists for an n-layer array (n=0 is charger-only)."""
    if n_layers < 0:
        raise ValueError(f"n_layers must be >= 0, got {n_layers}")
    sites = [CHARGER]
    for i in range(1, n_layers + 1):
        sites.extend(cell_label(i, j) for j in range(i + 1))

    charger_bonds = []
    if n_layers >= 1:
        charger_bonds = [(CHARGER, cell_label(1, 0)), (CHARGER, cell_label(1, 1))]

    interlayer = []
    for i in range(1, n_layers):
        for j in range(i + 1):
            interlayer.append((cell_label(i, j), cell_label(i + 1, j)))
            interlayer.append((cell_label(i, j), cell_label(i + 1, j + 1)))

    intralayer = []
    for i in range(1, n_layers + 1):
        for j in range(i):
            intralayer.append((cell_label(i, j), cell_label(i, j + 1)))

    return Geometry(
        sites=tuple(sites),
        charger_bonds=tuple(charger_bonds),
        interlayer_bonds=tuple(interlayer),
        intralayer_bonds=tuple(intralayer),
    )
