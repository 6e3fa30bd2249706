"""Finite MPS with center-gauge bookkeeping and truncated gate application.

Site tensors have shape (left_bond, 2, right_bond); boundary bonds are 1.
Local operators are applied through small MPO windows (adjacent gates as two
factor tensors, distance-2 gates as three with an identity inserted on the
intervening site), with SVD truncation around the canonical center.
"""

from __future__ import annotations

import numpy as np

from ..errors import Incompatible
from ..linalg import SvdTruncation, svd_truncate


class TensorTrainState:
    """Tensor-train (MPS) state with an optional canonical center."""

    def __init__(self, tensors, max_bond: int = 2**30, cutoff: float = 0.0,
                 center: int | None = None):
        self.tensors = [np.asarray(t, dtype=complex) for t in tensors]
        self.max_bond = max_bond
        self.cutoff = cutoff
        self.center = center
        self.discarded_total = 0.0

    def __len__(self) -> int:
        return len(self.tensors)

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    def bond_dims(self) -> list[int]:
        return [t.shape[2] for t in self.tensors[:-1]]

    def max_bond_used(self) -> int:
        return max(self.bond_dims(), default=1)

    def copy(self) -> "TensorTrainState":
        out = TensorTrainState(
            [t.copy() for t in self.tensors], self.max_bond, self.cutoff, self.center
        )
        out.discarded_total = self.discarded_total
        return out

    # --- gauge management ---

    def _push_right(self, i: int) -> None:
        """QR-orthonormalize site i, absorbing the factor into site i+1."""
        t = self.tensors[i]
        dl, d, dr = t.shape
        q, r = np.linalg.qr(t.reshape(dl * d, dr))
        k = q.shape[1]
        self.tensors[i] = q.reshape(dl, d, k)
        self.tensors[i + 1] = np.tensordot(r, self.tensors[i + 1], axes=(1, 0))

    def _push_left(self, i: int) -> None:
        """LQ-orthonormalize site i, absorbing the factor into site i-1."""
        t = self.tensors[i]
        dl, d, dr = t.shape
        q, r = np.linalg.qr(t.reshape(dl, d * dr).conj().T)
        k = q.shape[1]
        self.tensors[i] = q.conj().T.reshape(k, d, dr)
        self.tensors[i - 1] = np.tensordot(self.tensors[i - 1], r.conj().T, axes=(2, 0))

    def canonicalize(self, k: int) -> "TensorTrainState":
        """Bring the state to mixed-canonical form with center at site k."""
        for i in range(0, k):
            self._push_right(i)
        for i in range(self.n_sites - 1, k, -1):
            self._push_left(i)
        self.center = k
        return self

    def move_center_to(self, k: int) -> "TensorTrainState":
        if self.center is None:
            return self.canonicalize(k)
        while self.center < k:
            self._push_right(self.center)
            self.center += 1
        while self.center > k:
            self._push_left(self.center)
            self.center -= 1
        return self

    def norm(self) -> float:
        if self.center is not None:
            return float(np.linalg.norm(self.tensors[self.center]))
        return float(np.sqrt(abs(overlap(self, self))))

    def normalize(self) -> "TensorTrainState":
        if self.center is None:
            self.canonicalize(0)
        nrm = self.norm()
        if nrm > 0:
            self.tensors[self.center] = self.tensors[self.center] / nrm
        return self

    # --- local operator application ---

    def apply_one_site(self, gate: np.ndarray, site: int) -> None:
        """Apply a 2x2 gate; callers must re-canonicalize if it is not unitary."""
        self.tensors[site] = np.einsum(
            "ts,asb->atb", gate, self.tensors[site], optimize=True
        )

    def apply_window(self, window_ops, start: int) -> float:
        """Apply a small MPO window (boundary MPO bonds 1) with truncation.

        Contracts the window into one block around the canonical center, then
        splits it back with truncated SVDs.  Returns the discarded weight and
        leaves the center at the last window site.
        """
        k = len(window_ops)
        self.move_center_to(start)
        theta = None
        for j, w in enumerate(window_ops):
            m = self.tensors[start + j]
            # (c,s,d) x (w,t,s,v) -> (c,w),t,(d,v)
            block = np.einsum("csd,wtsv->cwtdv", m, np.asarray(w, dtype=complex),
                              optimize=True)
            c, wdim, t, d, v = block.shape
            block = block.reshape(c * wdim, t, d * v)
            if theta is None:
                theta = block
            else:
                theta = np.tensordot(theta, block, axes=(theta.ndim - 1, 0))
        # theta: (a, t_0, ..., t_{k-1}, b) with MPO boundary bonds absorbed
        discarded = 0.0
        a = theta.shape[0]
        rest = theta.shape[1:]
        for j in range(k - 1):
            tail = int(np.prod(rest[1:]))
            mat = theta.reshape(a * 2, tail)
            u, s, vh, dw = svd_truncate(
                mat, SvdTruncation(max_rank=self.max_bond, cutoff=self.cutoff)
            )
            discarded += dw
            chi = len(s)
            self.tensors[start + j] = u.reshape(a, 2, chi)
            theta = (s[:, None] * vh).reshape((chi,) + rest[1:])
            a = chi
            rest = theta.shape[1:]
        self.tensors[start + k - 1] = theta.reshape(a, 2, -1)
        self.center = start + k - 1
        self.discarded_total += discarded
        return discarded

    def to_dense(self, max_sites: int = 16) -> np.ndarray:
        if self.n_sites > max_sites:
            raise Incompatible(f"{self.n_sites} sites too many for dense contraction")
        vec = self.tensors[0]
        for t in self.tensors[1:]:
            vec = np.tensordot(vec, t, axes=(vec.ndim - 1, 0))
        return vec.reshape(-1)


def overlap(a: TensorTrainState, b: TensorTrainState) -> complex:
    """<a|b> by exact transfer-matrix contraction."""
    if len(a) != len(b):
        raise Incompatible(f"length mismatch: {len(a)} vs {len(b)}")
    env = np.ones((1, 1), dtype=complex)
    for ta, tb in zip(a.tensors, b.tensors):
        env = np.einsum("ab,asc,bsd->cd", env, ta.conj(), tb, optimize=True)
    return complex(env[0, 0])


def fidelity(a: TensorTrainState, b: TensorTrainState) -> float:
    """Normalized squared overlap |<a|b>|^2 / (<a|a><b|b>)."""
    num = abs(overlap(a, b)) ** 2
    return float(num / (abs(overlap(a, a)) * abs(overlap(b, b))))


def mps_bell(n_pairs: int, max_bond: int = 2**30, cutoff: float = 0.0) -> TensorTrainState:
    """Interleaved product of Bell pairs (|00> + |11>)/sqrt(2): the beta=0 TFD."""
    left = np.zeros((1, 2, 2), dtype=complex)
    left[0, 0, 0] = left[0, 1, 1] = 1.0 / np.sqrt(2.0)
    right = np.zeros((2, 2, 1), dtype=complex)
    right[0, 0, 0] = right[1, 1, 0] = 1.0
    tensors = []
    for _ in range(n_pairs):
        tensors.append(left.copy())
        tensors.append(right.copy())
    state = TensorTrainState(tensors, max_bond=max_bond, cutoff=cutoff)
    return state.canonicalize(0)


def product_state(bits: list[int], max_bond: int = 2**30, cutoff: float = 0.0) -> TensorTrainState:
    """Computational-basis product state |b_0 b_1 ...>."""
    tensors = []
    for b in bits:
        t = np.zeros((1, 2, 1), dtype=complex)
        t[0, b, 0] = 1.0
        tensors.append(t)
    return TensorTrainState(tensors, max_bond=max_bond, cutoff=cutoff, center=0)
