"""Two-site DMRG with optional orthogonality penalties for excited states.

The local problem at each bond is solved with Lanczos (ARPACK) on a
matrix-free effective Hamiltonian; adding penalty_weight * |phi><phi| for
states in ``orthogonal_to`` turns the same sweep into an excited-state
search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from ..errors import Incompatible
from ..linalg import SvdTruncation, svd_truncate
from .mpo import TensorTrainOperator
from .state import TensorTrainState

_DENSE_LOCAL_DIM = 128


@dataclass
class DmrgResult:
    energy: float
    state: TensorTrainState
    converged: bool
    sweep_energies: list[float] = field(default_factory=list)
    max_bond_used: int = 1
    n_sweeps: int = 0


def _left_env_step(env, w, m):
    env = np.einsum("awc,csd->awsd", env, m, optimize=True)
    env = np.einsum("awsd,wtsv->atvd", env, w, optimize=True)
    return np.einsum("atvd,atb->bvd", env, m.conj(), optimize=True)


def _right_env_step(env, w, m):
    env = np.einsum("bvd,csd->bvcs", env, m, optimize=True)
    env = np.einsum("bvcs,wtsv->btcw", env, w, optimize=True)
    return np.einsum("btcw,atb->awc", env, m.conj(), optimize=True)


def _overlap_left_step(env, phi_t, psi_t):
    # env: (a_phi, a_psi);  returns the environment one site to the right
    return np.einsum("fa,fpg,apb->gb", env, phi_t.conj(), psi_t, optimize=True)


def _effective_matvec(lenv, w1, w2, renv, theta):
    x = np.tensordot(lenv, theta, axes=(2, 0))  # (al, w, s, t, b)
    x = np.einsum("awstb,wpsv->apvtb", x, w1, optimize=True)
    x = np.einsum("apvtb,vqtu->apqub", x, w2, optimize=True)
    return np.tensordot(x, renv, axes=([3, 4], [1, 2]))  # (al, p, q, bl)


def _solve_local(lenv, w1, w2, renv, theta0, penalties, penalty_weight):
    shp = theta0.shape
    dim = theta0.size

    def matvec(v):
        th = v.reshape(shp)
        out = _effective_matvec(lenv, w1, w2, renv, th)
        for m in penalties:
            out = out + penalty_weight * np.conj(m) * np.sum(m * th)
        return out.ravel()

    if dim <= _DENSE_LOCAL_DIM:
        basis = np.eye(dim, dtype=complex)
        h_eff = np.column_stack([matvec(basis[:, k]) for k in range(dim)])
        h_eff = 0.5 * (h_eff + h_eff.conj().T)
        w, v = np.linalg.eigh(h_eff)
        return float(w[0]), v[:, 0].reshape(shp)
    op = spla.LinearOperator((dim, dim), matvec=matvec, dtype=complex)
    v0 = theta0.ravel()
    nrm = np.linalg.norm(v0)
    v0 = v0 / nrm if nrm > 0 else None
    w, v = spla.eigsh(op, k=1, which="SA", v0=v0, maxiter=max(10 * dim, 1000), tol=0)
    return float(w[0]), v[:, 0].reshape(shp)


def dmrg(
    h_mpo: TensorTrainOperator,
    init: TensorTrainState,
    max_bond: int = 625,
    cutoff: float = 1e-10,
    max_sweeps: int = 40,
    conv_tol: float = 1e-10,
    orthogonal_to: tuple = (),
    penalty_weight: float = 0.0,
) -> DmrgResult:
    """Variational ground-state (or penalized excited-state) optimization."""
    n = len(h_mpo)
    if len(init) != n:
        raise Incompatible("initial state length does not match the MPO")
    if orthogonal_to and penalty_weight <= 0.0:
        raise Incompatible("orthogonal_to requires a positive penalty_weight")
    psi = init.copy()
    psi.max_bond, psi.cutoff = max_bond, cutoff
    psi.canonicalize(0)
    psi.normalize()

    right = [None] * n
    right[n - 1] = np.ones((1, 1, 1), dtype=complex)
    for i in range(n - 1, 0, -1):
        right[i - 1] = _right_env_step(right[i], h_mpo.tensors[i], psi.tensors[i])
    left = [None] * n
    left[0] = np.ones((1, 1, 1), dtype=complex)

    orth = [phi.copy().canonicalize(0).normalize() for phi in orthogonal_to]
    oleft = [[None] * n for _ in orth]
    oright = [[None] * n for _ in orth]
    for j, phi in enumerate(orth):
        oright[j][n - 1] = np.ones((1, 1), dtype=complex)
        for i in range(n - 1, 0, -1):
            oright[j][i - 1] = np.einsum(
                "ge,fpg,apb->fa",
                oright[j][i], phi.tensors[i].conj(), psi.tensors[i], optimize=True,
            )
        oleft[j][0] = np.ones((1, 1), dtype=complex)

    def local_penalties(i):
        mats = []
        for j, phi in enumerate(orth):
            m = np.einsum(
                "fa,fpg,gqe,eb->apqb",
                oleft[j][i],
                phi.tensors[i].conj(),
                phi.tensors[i + 1].conj(),
                oright[j][i + 1],
                optimize=True,
            )
            mats.append(m)
        return mats

    def split(theta, i, to_right):
        a, _, _, b = theta.shape
        u, s, vh, dw = svd_truncate(
            theta.reshape(a * 2, 2 * b), SvdTruncation(max_rank=max_bond, cutoff=cutoff)
        )
        s = s / np.linalg.norm(s)
        chi = len(s)
        psi.discarded_total += dw
        if to_right:
            psi.tensors[i] = u.reshape(a, 2, chi)
            psi.tensors[i + 1] = (s[:, None] * vh).reshape(chi, 2, b)
            psi.center = i + 1
        else:
            psi.tensors[i] = (u * s).reshape(a, 2, chi)
            psi.tensors[i + 1] = vh.reshape(chi, 2, b)
            psi.center = i

    energy = np.inf
    sweep_energies: list[float] = []
    converged = False
    max_used = psi.max_bond_used()
    for sweep in range(max_sweeps):
        last = None
        for i in range(n - 1):  # left-to-right
            theta0 = np.tensordot(psi.tensors[i], psi.tensors[i + 1], axes=(2, 0))
            e, theta = _solve_local(
                left[i], h_mpo.tensors[i], h_mpo.tensors[i + 1], right[i + 1],
                theta0, local_penalties(i), penalty_weight,
            )
            split(theta, i, to_right=True)
            left[i + 1] = _left_env_step(left[i], h_mpo.tensors[i], psi.tensors[i])
            for j, phi in enumerate(orth):
                oleft[j][i + 1] = _overlap_left_step(
                    oleft[j][i], phi.tensors[i], psi.tensors[i]
                )
            last = e
        for i in range(n - 2, -1, -1):  # right-to-left
            theta0 = np.tensordot(psi.tensors[i], psi.tensors[i + 1], axes=(2, 0))
            e, theta = _solve_local(
                left[i], h_mpo.tensors[i], h_mpo.tensors[i + 1], right[i + 1],
                theta0, local_penalties(i), penalty_weight,
            )
            split(theta, i, to_right=False)
            right[i] = _right_env_step(
                right[i + 1], h_mpo.tensors[i + 1], psi.tensors[i + 1]
            )
            for j, phi in enumerate(orth):
                oright[j][i] = np.einsum(
                    "ge,fpg,apb->fa",
                    oright[j][i + 1],
                    phi.tensors[i + 1].conj(),
                    psi.tensors[i + 1],
                    optimize=True,
                )
            last = e
        max_used = max(max_used, psi.max_bond_used())
        sweep_energies.append(float(last))
        if abs(energy - last) < conv_tol * max(1.0, abs(last)):
            energy = float(last)
            converged = True
            break
        energy = float(last)
    return DmrgResult(
        energy=float(energy),
        state=psi,
        converged=converged,
        sweep_energies=sweep_energies,
        max_bond_used=max_used,
        n_sweeps=len(sweep_energies),
    )


def default_penalty_weight(h_mpo_norm_bound: float, e0_estimate: float) -> float:
    """Weight '10 * (|E0| + spectral-width bound)' for excited-state sweeps."""
    return 10.0 * (abs(e0_estimate) + abs(h_mpo_norm_bound))
