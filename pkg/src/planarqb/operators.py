"""Dense operator algebra on a truncated multimode Fock space.

Operators and density matrices are plain complex ``numpy`` arrays of shape
(dim, dim); a ``ModeLayout`` fixes how the global index factorizes into
per-mode Fock indices (charger first, then cells in layer-major order).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-10


@dataclass(frozen=True)
class ModeLayout:
    """Ordered register of bosonic modes sharing one Fock cutoff."""

    labels: tuple[str, ...]
    cutoff: int

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.cutoff < 2:
            raise ValueError(f"cutoff must be >= 2, got {self.cutoff}")
        if len(self.labels) == 0:
            raise ValueError("layout needs at least one mode")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"mode labels must be unique: {self.labels}")

    @property
    def mode_count(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.cutoff ** self.mode_count

    def index_of(self, label: str) -> int:
        return self.labels.index(label)


def destroy_op(cutoff: int) -> np.ndarray:
    """Truncated annihilation operator: sqrt(n) on the superdiagonal."""
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1).astype(complex)


def number_op(cutoff: int) -> np.ndarray:
    return np.diag(np.arange(cutoff, dtype=float)).astype(complex)


def embed(local: np.ndarray, mode_index: int, layout: ModeLayout) -> np.ndarray:
    """Kronecker-embed a single-mode operator at ``mode_index``.

    Returns I x ... x local x ... x I with total dimension layout.dim.
    """
    local = np.asarray(local, dtype=complex)
    if local.shape != (layout.cutoff, layout.cutoff):
        raise ValueError(
            f"local operator is {local.shape}, layout cutoff is {layout.cutoff}"
        )
    if not 0 <= mode_index < layout.mode_count:
        raise ValueError(f"mode_index {mode_index} out of range")
    eye = np.eye(layout.cutoff, dtype=complex)
    factors = [local if k == mode_index else eye for k in range(layout.mode_count)]
    return reduce(np.kron, factors)


def total_number_op(layout: ModeLayout) -> np.ndarray:
    """Sum of per-mode number operators."""
    n_local = number_op(layout.cutoff)
    out = np.zeros((layout.dim, layout.dim), dtype=complex)
    for k in range(layout.mode_count):
        out += embed(n_local, k, layout)
    return out


def vacuum_state(layout: ModeLayout) -> np.ndarray:
    """Density matrix |0...0><0...0|."""
    rho = np.zeros((layout.dim, layout.dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def hermiticity_defect(op: np.ndarray) -> float:
    return float(np.abs(op - op.conj().T).max())


def eig_hermitian(op: np.ndarray, atol: float = 1e-10):
    """Eigendecompose a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector columns). Degenerate
    subspaces may come back in any orthonormal basis.
    """
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {op.shape}")
    if hermiticity_defect(op) > atol:
        raise ValueError(
            f"matrix is not Hermitian within {atol:g} "
            f"(defect {hermiticity_defect(op):.3e})"
        )
    evals, vecs = np.linalg.eigh(op)
    return evals, vecs


def partial_trace(rho: np.ndarray, keep_index: int, layout: ModeLayout) -> np.ndarray:
    """Reduced density matrix of the kept mode (cutoff x cutoff)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (layout.dim, layout.dim):
        raise ValueError(f"state is {rho.shape}, layout dimension is {layout.dim}")
    if not 0 <= keep_index < layout.mode_count:
        raise ValueError(f"keep_index {keep_index} out of range")
    n = layout.mode_count
    c = layout.cutoff
    t = rho.reshape([c] * (2 * n))
    # trace out every mode except keep_index, from the back so axis
    # positions of earlier modes stay put
    removed = 0
    for m in reversed(range(n)):
        if m == keep_index:
            continue
        kept_so_far = n - removed
        t = np.trace(t, axis1=m, axis2=m + kept_so_far)
        removed += 1
    return t


def expect(rho: np.ndarray, op: np.ndarray) -> complex:
    """Tr(rho . op)."""
    rho = np.asarray(rho)
    op = np.asarray(op)
    if rho.shape != op.shape:
        raise ValueError(f"shape mismatch: {rho.shape} vs {op.shape}")
    # Tr(A B) as an elementwise sum, avoids forming the product
    return complex(np.sum(rho * op.T))


def check_density_matrix(rho: np.ndarray, label: str = "state") -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace, and positive
    within the module tolerances."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{label} is not a square matrix: shape {rho.shape}")
    defect = hermiticity_defect(rho)
    if defect > HERMITICITY_ATOL:
        raise ValueError(f"{label} is not Hermitian (defect {defect:.3e})")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValueError(f"{label} has trace {tr}, expected 1")
    lo = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if lo < EIGENVALUE_FLOOR:
        raise ValueError(f"{label} has negative eigenvalue {lo:.3e}")
