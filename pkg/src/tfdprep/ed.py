"""Exact state-level computations on the doubled Hilbert space.

Matrices are built from Pauli strings with bit arithmetic (each string is a
signed permutation of the computational basis), so the same compiled form
feeds dense matrices, CSR matrices, and matrix-free Lanczos.  The TFD is
constructed by vectorizing exp(-beta*H0/2), which is exactly the canonical
purification for a real-symmetric H0 and immune to eigenvector phase or
degeneracy ambiguities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    AntiunitaryMismatch,
    InvalidGrid,
    NoConvergence,
    TooLarge,
)
from .linalg import EigenSystem, hermitian_eig
from .models import DoubledSystem, copy_site
from .optimize import scan_refine_max
from .pauli import PauliSum

MAX_DENSE_SITES = 13
DENSE_EIG_DIM = 512  # below this, ground states come from full dense eigh
CSR_MAX_DIM = 1 << 16

BLOCK = "block"
ZIGZAG = "zigzag"


@dataclass
class StateVector:
    """Normalized pure state on the doubled lattice with an ordering tag."""

    amplitudes: np.ndarray
    n_sites: int
    ordering: str = BLOCK

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass
class FidelityCurve:
    """Overlap-vs-beta scan with the refined optimum."""

    betas: np.ndarray
    overlaps: np.ndarray
    beta_star: float
    f_max: float
    boundary: bool = False


def _block_perm(n_pairs: int, to_zigzag: bool) -> list[int]:
    if to_zigzag:
        perm = []
        for i in range(n_pairs):
            perm += [i, n_pairs + i]
        return perm
    perm = [2 * i for i in range(n_pairs)] + [2 * i + 1 for i in range(n_pairs)]
    return perm


def convert_ordering(state: StateVector, target: str) -> StateVector:
    """Exact permutation between block (L..L R..R) and zigzag (LR LR ..) order."""
    if state.ordering == target:
        return state
    n_pairs = state.n_sites // 2
    t = state.amplitudes.reshape((2,) * state.n_sites)
    t = np.transpose(t, _block_perm(n_pairs, to_zigzag=(target == ZIGZAG)))
    return StateVector(np.ascontiguousarray(t).ravel(), state.n_sites, target)


def _as_pauli_sum(h, ordering: str) -> tuple[PauliSum, int]:
    """Resolve PauliSum/DoubledSystem input to a site-indexed sum."""
    if isinstance(h, DoubledSystem):
        merged = h.merged_sum()
        if ordering == ZIGZAG:
            return merged, merged.n_sites
        n = h.n_per_copy

        def to_block(m: int) -> int:
            copy, i = copy_site(m)
            return i if copy == "L" else n + i

        return merged.embedded(to_block, merged.n_sites), merged.n_sites
    return h, h.n_sites


def _compile_terms(hsum: PauliSum, n: int):
    """Per-string (xor-mask, sign vector, constant phase * coeff) tables."""
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    compiled = []
    for t in hsum.terms:
        xmask = 0
        sign = np.ones(dim, dtype=np.int8)
        n_y = 0
        for site, op in t.ops.items():
            bitpos = n - 1 - site
            bit = ((idx >> bitpos) & 1).astype(np.int8)
            if op in ("X", "Y"):
                xmask |= 1 << bitpos
            if op in ("Y", "Z"):
                sign *= 1 - 2 * bit
            if op == "Y":
                n_y += 1
        const = t.coefficient * (1j**n_y)
        compiled.append((xmask, sign, const))
    return compiled


def sparse_matrix(h, ordering: str = ZIGZAG) -> sp.csr_matrix:
    hsum, n = _as_pauli_sum(h, ordering)
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    rows, cols, data = [], [], []
    for xmask, sign, const in _compile_terms(hsum, n):
        rows.append(idx ^ xmask)
        cols.append(idx)
        data.append(const * sign)
    if not rows:
        return sp.csr_matrix((dim, dim), dtype=complex)
    m = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )
    return m.tocsr()


def dense_matrix(h, ordering: str = ZIGZAG, max_sites: int = MAX_DENSE_SITES) -> np.ndarray:
    """Dense matrix of a Pauli sum or doubled system in the requested ordering."""
    hsum, n = _as_pauli_sum(h, ordering)
    if n > max_sites:
        raise TooLarge(f"{n} sites exceed the dense limit of {max_sites}")
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    out = np.zeros((dim, dim), dtype=complex)
    for xmask, sign, const in _compile_terms(hsum, n):
        out[idx ^ xmask, idx] += const * sign
    return out


def linear_operator(h, ordering: str = ZIGZAG) -> spla.LinearOperator:
    """Matrix-free matvec form; memory is one sign vector per Pauli string."""
    hsum, n = _as_pauli_sum(h, ordering)
    dim = 1 << n
    compiled = _compile_terms(hsum, n)
    shape = (2,) * n

    def matvec(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v).ravel()
        out = np.zeros(dim, dtype=complex)
        for xmask, sign, const in compiled:
            tmp = (const * v) * sign
            if xmask:
                axes = tuple(i for i in range(n) if (xmask >> (n - 1 - i)) & 1)
                tmp = np.flip(tmp.reshape(shape), axis=axes).ravel()
            out += tmp
        return out

    return spla.LinearOperator((dim, dim), matvec=matvec, dtype=complex)


def _operator_for(h, ordering: str):
    hsum, n = _as_pauli_sum(h, ordering)
    dim = 1 << n
    nnz_estimate = len(hsum.terms) * dim
    if dim <= CSR_MAX_DIM and nnz_estimate <= 1.5e8:
        return sparse_matrix(hsum, ordering="as-is"), hsum, n
    return linear_operator(hsum, ordering="as-is"), hsum, n


def expectation(h, state: StateVector) -> float:
    """<psi|H|psi> for a Hermitian Pauli sum in the state's ordering."""
    op, _, _ = _operator_for(h, state.ordering)
    v = state.amplitudes
    return float(np.real(np.vdot(v, op @ v)))


def _check_real_symmetric(h0: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    h0 = np.asarray(h0)
    scale = max(np.abs(h0).max(), 1e-300)
    if np.abs(h0.imag).max() > tol * scale:
        raise AntiunitaryMismatch(
            "H0 must be real in the computational basis for conjugation Theta=K"
        )
    h0r = h0.real
    if np.abs(h0r - h0r.T).max() > tol * scale:
        raise AntiunitaryMismatch("H0 must be symmetric")
    return h0r


def tfd_state(h0_matrix: np.ndarray, beta: float, ordering: str = BLOCK) -> StateVector:
    """Thermofield double of a real-symmetric H0 at inverse temperature beta.

    Built as the normalized vectorization of exp(-beta*H0/2): the amplitude
    on |i>_L |j>_R is exp(-beta*H0/2)_{ij} / sqrt(Z).
    """
    if not np.isfinite(beta):
        raise InvalidGrid("beta must be finite; represent the limit by a large value")
    h0r = _check_real_symmetric(h0_matrix)
    w, v = np.linalg.eigh(h0r)
    m = (v * np.exp(-0.5 * beta * (w - w[0]))) @ v.T
    vec = m.ravel().astype(complex)
    vec /= np.linalg.norm(vec)
    n_pairs = int(round(np.log2(h0r.shape[0])))
    state = StateVector(vec, 2 * n_pairs, BLOCK)
    return convert_ordering(state, ordering)


def _lowest_eigs(h, ordering: str, k: int, v0_seed: np.ndarray | None = None):
    op, hsum, n = _operator_for(h, ordering)
    dim = 1 << n
    if dim <= DENSE_EIG_DIM:
        mat = dense_matrix(hsum, ordering="as-is", max_sites=n)
        w, v = np.linalg.eigh(mat)
        return w[:k], v[:, :k]
    v0 = v0_seed if v0_seed is not None else np.ones(dim)
    v0 = v0 / np.linalg.norm(v0)
    try:
        w, v = spla.eigsh(op, k=k, which="SA", v0=v0, maxiter=10000, tol=0)
    except spla.ArpackNoConvergence as exc:
        raise NoConvergence(f"Lanczos did not converge: {exc}") from exc
    order = np.argsort(w)
    return w[order], v[:, order]


def _residual_check(h, ordering: str, energy: float, vec: np.ndarray, tol: float = 1e-8):
    op, hsum, _ = _operator_for(h, ordering)
    resid = float(np.linalg.norm(op @ vec - energy * vec))
    scale = max(hsum.coefficient_norm(), 1e-300)
    if resid > tol * scale:
        raise NoConvergence(
            f"eigenpair residual {resid:.3e} exceeds {tol:.1e} * |H| = {tol * scale:.3e}"
        )


def ground_state(h, ordering: str = BLOCK) -> tuple[float, StateVector]:
    """Lowest eigenpair of the doubled operator; dense below 2^9, Lanczos above."""
    hsum, n = _as_pauli_sum(h, ordering)
    if n > 20:
        raise TooLarge(f"doubled dimension 2^{n} exceeds the supported 2^20")
    w, v = _lowest_eigs(h, ordering, k=1)
    vec = v[:, 0].astype(complex)
    _residual_check(h, ordering, float(w[0]), vec)
    vec /= np.linalg.norm(vec)
    return float(w[0]), StateVector(vec, n, ordering)


def gap(h, ordering: str = BLOCK) -> tuple[float, float, float]:
    """Two lowest eigenvalues of the doubled operator: (E1-E0, E0, E1)."""
    w, _ = _lowest_eigs(h, ordering, k=2)
    e0, e1 = float(w[0]), float(w[1])
    delta = e1 - e0
    if delta < -1e-10:
        raise NoConvergence(f"negative gap {delta:.3e}: eigensolver inconsistency")
    return delta, e0, e1


def _diag_overlap_weights(psi: StateVector, h0_energies: np.ndarray, h0_vectors: np.ndarray):
    """Eigenbasis amplitudes: A[n,m] = <eps_n, eps_m*|psi> for real eigenvectors."""
    state = convert_ordering(psi, BLOCK)
    dim0 = len(h0_energies)
    mat = state.amplitudes.reshape(dim0, dim0)
    vr = np.real(h0_vectors)
    return vr.T @ mat @ vr


def overlap_curve_factory(h0_energies: np.ndarray, diag_amps: np.ndarray):
    """Closure computing |<TFD_beta|psi>|^2 from the diagonal eigen-amplitudes."""
    e = np.asarray(h0_energies, dtype=float)
    shift = e - e.min()
    d = np.asarray(diag_amps)

    def overlap(beta: float) -> float:
        boltz = np.exp(-0.5 * beta * shift)
        z = float(np.sum(boltz**2))
        num = np.abs(np.sum(boltz * d)) ** 2
        return float(num / z)

    return overlap


def _scan_and_refine(overlap, beta_grid: np.ndarray, refine_tol: float) -> FidelityCurve:
    betas = np.asarray(beta_grid, dtype=float)
    if betas.size == 0:
        raise InvalidGrid("beta grid is empty")
    beta_star, f_max, overlaps, boundary = scan_refine_max(overlap, betas, refine_tol)
    return FidelityCurve(betas, overlaps, beta_star, f_max, boundary)


def fidelity_scan(
    psi: StateVector,
    h0_matrix: np.ndarray,
    beta_grid: np.ndarray,
    refine_tol: float = 1e-6,
) -> FidelityCurve:
    """Overlap of ``psi`` with TFD_beta over a grid, golden-refined at the peak."""
    h0r = _check_real_symmetric(h0_matrix)
    dim0 = h0r.shape[0]
    if psi.dim != dim0 * dim0:
        raise InvalidGrid(
            f"state dimension {psi.dim} incompatible with H0 dimension {dim0}"
        )
    w, v = np.linalg.eigh(h0r)
    diag = np.diag(_diag_overlap_weights(psi, w, v))
    return _scan_and_refine(overlap_curve_factory(w, diag), beta_grid, refine_tol)


def fidelity_scan_spectrum(
    energies: np.ndarray,
    diag_amps: np.ndarray,
    beta_grid: np.ndarray,
    refine_tol: float = 1e-6,
) -> FidelityCurve:
    """Scan when the state is already expressed in the H0 eigenbasis."""
    return _scan_and_refine(
        overlap_curve_factory(energies, diag_amps), np.asarray(beta_grid), refine_tol
    )


def offdiag_weight(psi: StateVector, h0_eigs: EigenSystem, tol: float = 1e-10) -> float:
    """Weight of ``psi`` outside the (degeneracy-grouped) diagonal energy subspace."""
    w = h0_eigs.energies
    amps = _diag_overlap_weights(psi, w, h0_eigs.vectors)
    width = max(float(w[-1] - w[0]), 1e-300)
    near = np.abs(w[:, None] - w[None, :]) <= tol * width
    w_diag = float(np.sum(np.abs(amps[near]) ** 2))
    return max(0.0, 1.0 - w_diag)


def h0_eigensystem(h0_matrix: np.ndarray) -> EigenSystem:
    """Eigensystem of a real-symmetric target Hamiltonian."""
    return hermitian_eig(_check_real_symmetric(h0_matrix).astype(complex))


def default_beta_grid(n_points: int = 61, lo: float = 1e-3, hi: float = 1e3) -> np.ndarray:
    """Log-spaced coarse grid used by the ED fidelity scans."""
    return np.geomspace(lo, hi, n_points)
