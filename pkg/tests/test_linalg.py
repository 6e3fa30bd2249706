import numpy as np
import pytest

from tfdprep.errors import GateTooLarge, InvalidMatrix
from tfdprep.linalg import (
    SvdTruncation,
    expm_hermitian,
    hermitian_eig,
    svd_truncate,
)
from tfdprep.pauli import pauli_matrix

from conftest import random_hermitian


class TestHermitianEig:
    def test_identity(self):
        es = hermitian_eig(np.eye(2, dtype=complex))
        assert np.allclose(es.energies, [1.0, 1.0])
        assert np.abs(es.vectors.conj().T @ es.vectors - np.eye(2)).max() <= 1e-10

    def test_pauli_z(self):
        es = hermitian_eig(pauli_matrix("Z"))
        assert np.allclose(es.energies, [-1.0, 1.0])
        # computational-basis eigenvectors with positive phase fixing
        assert np.allclose(np.abs(es.vectors), np.array([[0, 1], [1, 0]]))

    def test_reconstruction_8x8(self, rng):
        a = random_hermitian(8, rng)
        es = hermitian_eig(a)
        rebuilt = (es.vectors * es.energies) @ es.vectors.conj().T
        assert np.abs(rebuilt - a).max() <= 1e-10 * np.abs(a).max()

    @pytest.mark.parametrize("dim", [2, 16, 64])
    def test_reconstruction_property(self, dim, rng):
        for _ in range(3):
            a = random_hermitian(dim, rng)
            es = hermitian_eig(a)
            rebuilt = (es.vectors * es.energies) @ es.vectors.conj().T
            assert np.abs(rebuilt - a).max() <= 1e-10 * np.abs(a).max()
            assert np.abs(es.vectors.conj().T @ es.vectors - np.eye(dim)).max() <= 1e-10
            assert np.all(np.diff(es.energies) >= -1e-12)

    def test_rejects_non_square(self):
        with pytest.raises(InvalidMatrix):
            hermitian_eig(np.ones((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidMatrix):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_phase_fixing_deterministic(self, rng):
        a = random_hermitian(6, rng)
        v1 = hermitian_eig(a).vectors
        v2 = hermitian_eig(a.copy()).vectors
        assert np.allclose(v1, v2)


class TestSvdTruncate:
    def test_rank_one_exact(self, rng):
        u = rng.normal(size=4)
        v = rng.normal(size=5)
        a = np.outer(u, v)
        _, s, _, dw = svd_truncate(a, SvdTruncation(max_rank=1))
        assert len(s) == 1
        assert dw <= 1e-14

    def test_diagonal_cutoff(self):
        a = np.diag([3.0, 2.0, 1.0])
        u, s, vh, dw = svd_truncate(a, SvdTruncation(cutoff=0.5))
        assert np.allclose(s, [3.0, 2.0])
        assert abs(dw - 1.0 / 14.0) <= 1e-14

    def test_identity_full_rank(self):
        u, s, vh, dw = svd_truncate(np.eye(5), SvdTruncation(cutoff=0.0))
        assert len(s) == 5
        assert dw == 0.0

    def test_frobenius_contract(self, rng):
        for _ in range(5):
            a = rng.normal(size=(8, 6)) + 1j * rng.normal(size=(8, 6))
            policy = SvdTruncation(max_rank=3)
            u, s, vh, dw = svd_truncate(a, policy)
            total = np.linalg.norm(a, "fro") ** 2
            kept = float(np.sum(s**2))
            assert abs(kept + dw * total - total) <= 1e-12 * total
            approx = (u * s) @ vh
            err = np.linalg.norm(a - approx, "fro") ** 2 / total
            assert err <= dw + 1e-12


class TestExpmHermitian:
    def test_zero_scale(self, rng):
        a = random_hermitian(4, rng)
        assert np.allclose(expm_hermitian(a, 0.0), np.eye(4), atol=1e-14)

    def test_pauli_rotation(self):
        x = pauli_matrix("X")
        assert np.abs(expm_hermitian(x, -1j * np.pi / 2) - (-1j) * x).max() <= 1e-12

    def test_imaginary_time_z(self):
        beta = 1.7
        g = expm_hermitian(pauli_matrix("Z"), -beta / 2)
        assert np.allclose(np.diag(g), [np.exp(-beta / 2), np.exp(beta / 2)])

    def test_unitary_for_imaginary_scale(self, rng):
        a = random_hermitian(8, rng)
        u = expm_hermitian(a, -0.37j)
        assert np.abs(u @ u.conj().T - np.eye(8)).max() <= 1e-12

    def test_group_property_commuting(self):
        z = pauli_matrix("Z")
        lhs = expm_hermitian(z, 0.3) @ expm_hermitian(z, -0.9)
        rhs = expm_hermitian(z, -0.6)
        assert np.abs(lhs - rhs).max() <= 1e-12

    def test_size_limit(self, rng):
        with pytest.raises(GateTooLarge):
            expm_hermitian(random_hermitian(32, rng), 1.0)
