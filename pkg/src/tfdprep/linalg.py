"""Dense complex linear-algebra primitives used across the toolkit.

Thin, contract-checked wrappers around LAPACK (via numpy): Hermitian
eigendecomposition with deterministic eigenvector phases, truncated SVD
with discarded-weight bookkeeping, and matrix exponentials of small
Hermitian blocks for gate construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GateTooLarge, InvalidMatrix

HERMITICITY_TOL = 1e-12


@dataclass
class EigenSystem:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""

    energies: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.energies)


@dataclass
class SvdTruncation:
    """Truncation policy: keep at most ``max_rank`` values, drop s_i/s_max < cutoff."""

    max_rank: int = 2**30
    cutoff: float = 0.0
    discarded_weight: float = field(default=0.0, compare=False)


def check_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate that ``a`` is square and Hermitian within ``tol``·max|a|."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {a.shape}")
    scale = np.abs(a).max() if a.size else 0.0
    dev = np.abs(a - a.conj().T).max() if a.size else 0.0
    if dev > tol * max(scale, 1e-300):
        raise InvalidMatrix(
            f"matrix is not Hermitian: max|A - A^dag| = {dev:.3e} > {tol:.1e}*max|A|"
        )
    return a


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive.

    Makes eigenvectors deterministic across platforms (up to degeneracies).
    """
    out = vectors.copy()
    for k in range(out.shape[1]):
        idx = np.argmax(np.abs(out[:, k]))
        pivot = out[idx, k]
        if np.abs(pivot) > 0:
            out[:, k] *= np.conj(pivot) / np.abs(pivot)
    return out


def hermitian_eig(a: np.ndarray, tol: float = HERMITICITY_TOL) -> EigenSystem:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    a = check_hermitian(a, tol)
    energies, vectors = np.linalg.eigh(a)
    return EigenSystem(energies=energies, vectors=_fix_phases(vectors))


def svd_truncate(
    a: np.ndarray, policy: SvdTruncation
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Truncated SVD ``a ~= u @ diag(s) @ vh`` under the given policy.

    Returns ``(u, s, vh, discarded_weight)`` where the discarded weight is the
    squared singular weight dropped, relative to the total squared weight.
    """
    u, s, vh = np.linalg.svd(np.asarray(a), full_matrices=False)
    total = float(np.sum(s**2))
    if total == 0.0 or len(s) == 0:
        k = min(1, len(s)) or 1
        return u[:, :k], s[:k], vh[:k], 0.0
    keep = int(np.sum(s / s[0] >= policy.cutoff))
    keep = max(1, min(keep, policy.max_rank, len(s)))
    discarded = float(np.sum(s[keep:] ** 2)) / total
    policy.discarded_weight = discarded
    return u[:, :keep], s[:keep], vh[:keep], discarded


def expm_hermitian(
    a: np.ndarray, scale: complex = 1.0, max_dim: int = 16, tol: float = HERMITICITY_TOL
) -> np.ndarray:
    """exp(scale * a) for a small Hermitian block, via eigendecomposition."""
    a = check_hermitian(a, tol)
    if a.shape[0] > max_dim:
        raise GateTooLarge(f"dimension {a.shape[0]} exceeds gate limit {max_dim}")
    w, v = np.linalg.eigh(a)
    return (v * np.exp(scale * w)) @ v.conj().T


def kron_all(mats: list[np.ndarray]) -> np.ndarray:
    """Kronecker product of a list of matrices, left factor most significant."""
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out
