"""MPO construction and arithmetic: exact automaton compilation of Pauli sums,
addition, products, SVD compression, and expectation values.

Tensor convention: W[left, s_out, s_in, right]; boundary bonds have dim 1.
The automaton shares suffixes between terms, so the bond dimension at a cut
is 2 + (number of distinct in-progress tails crossing it).
"""

from __future__ import annotations

import numpy as np

from ..errors import Incompatible, SpanOverflow
from ..linalg import SvdTruncation, svd_truncate
from ..pauli import PauliSum, pauli_matrix
from .state import TensorTrainState

_ID2 = np.eye(2, dtype=complex)


class TensorTrainOperator:
    def __init__(self, tensors, label: str = ""):
        self.tensors = [np.asarray(t, dtype=complex) for t in tensors]
        self.label = label

    def __len__(self) -> int:
        return len(self.tensors)

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    def bond_dims(self) -> list[int]:
        return [t.shape[3] for t in self.tensors[:-1]]

    def copy(self) -> "TensorTrainOperator":
        return TensorTrainOperator([t.copy() for t in self.tensors], self.label)


def _state_order(key) -> tuple:
    if key == "B":
        return (0,)
    if key == "E":
        return (2,)
    return (1, key)


def compile_mpo(h: PauliSum, max_span: int | None = None) -> TensorTrainOperator:
    """Exact MPO of a Pauli sum via a suffix-sharing term automaton."""
    hsum = h.canonicalized()
    n = hsum.n_sites
    if max_span is not None and hsum.max_span() > max_span:
        raise SpanOverflow(
            f"term span {hsum.max_span()} exceeds limit {max_span}; "
            "compile with max_span=None to allow long strings"
        )
    # transitions[i]: (in_key, out_key) -> 2x2 block
    transitions: list[dict] = [dict() for _ in range(n)]

    def add(i, kin, kout, mat):
        cur = transitions[i].get((kin, kout))
        transitions[i][(kin, kout)] = mat if cur is None else cur + mat

    const = 0.0
    for t in hsum.terms:
        items = sorted(t.ops.items())
        if not items:
            const += t.coefficient
            continue
        s_first, p_first = items[0]
        remaining = tuple(items[1:])
        out = ("S",) + remaining if remaining else "E"
        add(s_first, "B", out, t.coefficient * pauli_matrix(p_first))
        prev = s_first
        while remaining:
            s_j, p_j = remaining[0]
            key_in = ("S",) + remaining
            for site in range(prev + 1, s_j):
                transitions[site].setdefault((key_in, key_in), _ID2)
            out = ("S",) + remaining[1:] if remaining[1:] else "E"
            add(s_j, key_in, out, pauli_matrix(p_j))
            prev = s_j
            remaining = remaining[1:]
    if const != 0.0:
        add(0, "B", "E", const * _ID2)
    for i in range(n):
        transitions[i].setdefault(("B", "B"), _ID2)
        transitions[i].setdefault(("E", "E"), _ID2)

    # reachability pruning from both boundaries
    reach = [set() for _ in range(n + 1)]
    reach[0] = {"B"}
    for i in range(n):
        for (kin, kout) in transitions[i]:
            if kin in reach[i]:
                reach[i + 1].add(kout)
    core = [set() for _ in range(n + 1)]
    core[n] = {"E"}
    for i in reversed(range(n)):
        for (kin, kout) in transitions[i]:
            if kout in core[i + 1]:
                core[i].add(kin)
    index = []
    for b in range(n + 1):
        keys = sorted(reach[b] & core[b], key=_state_order)
        index.append({k: i for i, k in enumerate(keys)})

    tensors = []
    for i in range(n):
        wl, wr = max(len(index[i]), 1), max(len(index[i + 1]), 1)
        w = np.zeros((wl, 2, 2, wr), dtype=complex)
        for (kin, kout), mat in transitions[i].items():
            if kin in index[i] and kout in index[i + 1]:
                w[index[i][kin], :, :, index[i + 1][kout]] += mat
        tensors.append(w)
    return TensorTrainOperator(tensors, label=hsum.label)


def mpo_to_dense(mpo: TensorTrainOperator, max_sites: int = 12) -> np.ndarray:
    if mpo.n_sites > max_sites:
        raise Incompatible(f"{mpo.n_sites} sites too many for dense MPO contraction")
    block = mpo.tensors[0]
    for w in mpo.tensors[1:]:
        # (l, S_out, S_in, r) x (r, t_out, t_in, r') -> (l, S t_out, S t_in, r')
        block = np.einsum("lpqr,rtsu->lptqsu", block, w, optimize=True)
        l, p, t, q, s, u = block.shape
        block = block.reshape(l, p * t, q * s, u)
    return block[0, :, :, 0]


def mpo_expectation(mpo: TensorTrainOperator, state: TensorTrainState) -> float:
    """<psi|O|psi> / <psi|psi> for a Hermitian MPO."""
    if len(mpo) != len(state):
        raise Incompatible("MPO/MPS length mismatch")
    env = np.ones((1, 1, 1), dtype=complex)
    nrm = np.ones((1, 1), dtype=complex)
    for w, m in zip(mpo.tensors, state.tensors):
        env = np.einsum("awc,csd->awsd", env, m, optimize=True)
        env = np.einsum("awsd,wtsv->atvd", env, w, optimize=True)
        env = np.einsum("atvd,atb->bvd", env, m.conj(), optimize=True)
        nrm = np.einsum("ab,asc,bsd->cd", nrm, m.conj(), m, optimize=True)
    return float(np.real(env[0, 0, 0] / nrm[0, 0]))


def mpo_add(a: TensorTrainOperator, b: TensorTrainOperator) -> TensorTrainOperator:
    if len(a) != len(b):
        raise Incompatible("MPO length mismatch")
    n = len(a)
    out = []
    for i, (wa, wb) in enumerate(zip(a.tensors, b.tensors)):
        la, _, _, ra = wa.shape
        lb, _, _, rb = wb.shape
        left = la + lb if i > 0 else 1
        right = ra + rb if i < n - 1 else 1
        w = np.zeros((left, 2, 2, right), dtype=complex)
        if i == 0:
            if n > 1:
                w[0, :, :, :ra] = wa[0]
                w[0, :, :, ra:] = wb[0]
            else:
                w[0, :, :, 0] = wa[0, :, :, 0] + wb[0, :, :, 0]
        elif i == n - 1:
            w[:la, :, :, 0] = wa[:, :, :, 0]
            w[la:, :, :, 0] = wb[:, :, :, 0]
        else:
            w[:la, :, :, :ra] = wa
            w[la:, :, :, ra:] = wb
        out.append(w)
    return TensorTrainOperator(out, label=a.label)


def mpo_multiply(a: TensorTrainOperator, b: TensorTrainOperator) -> TensorTrainOperator:
    """Operator product a @ b (apply b first)."""
    if len(a) != len(b):
        raise Incompatible("MPO length mismatch")
    out = []
    for wa, wb in zip(a.tensors, b.tensors):
        w = np.einsum("aptb,ctsd->acpsbd", wa, wb, optimize=True)
        la, lb, p, s, ra, rb = w.shape
        out.append(w.reshape(la * lb, p, s, ra * rb))
    return TensorTrainOperator(out, label=a.label)


def mpo_scale(a: TensorTrainOperator, factor: float) -> TensorTrainOperator:
    out = a.copy()
    out.tensors[0] = out.tensors[0] * factor
    return out


def mpo_compress(
    mpo: TensorTrainOperator, cutoff: float = 1e-12, max_bond: int | None = None
) -> TensorTrainOperator:
    """Two-pass QR/SVD compression treating the MPO as an MPS with d=4."""
    tensors = [t.copy() for t in mpo.tensors]
    n = len(tensors)
    # left-to-right QR
    for i in range(n - 1):
        l, p, s, r = tensors[i].shape
        q, rr = np.linalg.qr(tensors[i].reshape(l * p * s, r))
        k = q.shape[1]
        tensors[i] = q.reshape(l, p, s, k)
        tensors[i + 1] = np.tensordot(rr, tensors[i + 1], axes=(1, 0))
    # right-to-left SVD with truncation
    policy_rank = max_bond if max_bond is not None else 2**30
    for i in range(n - 1, 0, -1):
        l, p, s, r = tensors[i].shape
        mat = tensors[i].reshape(l, p * s * r)
        u, sv, vh, _ = svd_truncate(mat, SvdTruncation(max_rank=policy_rank, cutoff=cutoff))
        k = len(sv)
        tensors[i] = vh.reshape(k, p, s, r)
        tensors[i - 1] = np.tensordot(tensors[i - 1], u * sv, axes=(3, 0))
    return TensorTrainOperator(tensors, label=mpo.label)


def gate_window(gate: np.ndarray, distance: int = 1) -> list[np.ndarray]:
    """Factorize a 4x4 two-site gate into an MPO window.

    distance=1 gives two tensors on adjacent sites; distance=2 inserts an
    identity (delta) tensor on the skipped site, so the window spans 3 sites.
    """
    g = np.asarray(gate, dtype=complex).reshape(2, 2, 2, 2)  # (s0', s1', s0, s1)
    mat = np.transpose(g, (0, 2, 1, 3)).reshape(4, 4)  # (s0' s0) x (s1' s1)
    u, s, vh = np.linalg.svd(mat)
    k = int(np.sum(s > 1e-14 * s[0]))
    left = (u[:, :k] * np.sqrt(s[:k])).reshape(2, 2, k)  # (s0', s0, k)
    right = (np.sqrt(s[:k])[:, None] * vh[:k]).reshape(k, 2, 2)  # (k, s1', s1)
    w_left = left.reshape(1, 2, 2, k)
    w_right = right.reshape(k, 2, 2, 1)
    if distance == 1:
        return [w_left, w_right]
    if distance == 2:
        delta = np.zeros((k, 2, 2, k), dtype=complex)
        for m in range(k):
            delta[m, :, :, m] = _ID2
        return [w_left, delta, w_right]
    raise Incompatible(f"unsupported gate distance {distance}")


def one_site_window(gate: np.ndarray) -> list[np.ndarray]:
    return [np.asarray(gate, dtype=complex).reshape(1, 2, 2, 1)]


def compile_parent_mpo(ds, cutoff: float = 1e-12, max_bond: int | None = None) -> TensorTrainOperator:
    """MPO of a doubled system on the merged zigzag chain.

    The base part (two copies + coupling) compiles exactly; the penalty is
    built as a compressed MPO product of the difference operator with itself,
    which keeps the bond dimension at O(w^2) instead of O(N).
    """
    base = compile_mpo(ds.base_sum())
    if ds.penalty_xi == 0.0:
        return base
    diff = compile_mpo(ds.difference_sum())
    pen = mpo_multiply(diff, diff)
    pen = mpo_compress(pen, cutoff=cutoff)
    pen = mpo_scale(pen, ds.penalty_xi / (2.0 * ds.n_per_copy))
    total = mpo_add(base, pen)
    total = mpo_compress(total, cutoff=cutoff, max_bond=max_bond)
    total.label = "parent"
    return total
