"""Shared oracles: brute-force Kronecker constructions, independent of ed.py."""

import numpy as np
import pytest

from tfdprep.pauli import PauliSum, pauli_matrix


def kron_string(ops: dict, n: int) -> np.ndarray:
    """Dense matrix of one Pauli string via an explicit Kronecker chain."""
    out = np.array([[1.0 + 0j]])
    for site in range(n):
        factor = pauli_matrix(ops[site]) if site in ops else np.eye(2, dtype=complex)
        out = np.kron(out, factor)
    return out


def kron_sum(h: PauliSum, n: int | None = None) -> np.ndarray:
    """Dense matrix of a Pauli sum via Kronecker products."""
    n = h.n_sites if n is None else n
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for t in h.terms:
        out += t.coefficient * kron_string(t.ops, n)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_hermitian(dim: int, rng) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2.0
