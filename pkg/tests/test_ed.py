import numpy as np
import pytest

from tfdprep.ed import (
    StateVector,
    convert_ordering,
    default_beta_grid,
    dense_matrix,
    expectation,
    fidelity_scan,
    gap,
    ground_state,
    h0_eigensystem,
    linear_operator,
    offdiag_weight,
    sparse_matrix,
    tfd_state,
)
from tfdprep.errors import AntiunitaryMismatch, InvalidGrid, TooLarge
from tfdprep.models import (
    build_mfi_1d,
    build_parent_mfi_1d,
    single_spin_beta_star,
    single_spin_h0,
    single_spin_toy,
)
from tfdprep.pauli import PauliString, PauliSum

from conftest import kron_sum
from test_models import doubled_block_oracle


class TestMatrices:
    def test_single_z(self):
        h = PauliSum([PauliString({0: "Z"}, 1.0)], 1)
        assert np.allclose(dense_matrix(h), np.diag([1.0, -1.0]))

    def test_mfi_matches_kron(self):
        h = build_mfi_1d(3, 1.0, 0.7, 0.3)
        assert np.abs(dense_matrix(h) - kron_sum(h)).max() <= 1e-12

    def test_sparse_equals_dense(self):
        h = build_mfi_1d(4, 1.0, 1.0, 0.5)
        assert np.abs(sparse_matrix(h).toarray() - dense_matrix(h)).max() <= 1e-12

    def test_linear_operator_matvec(self, rng):
        ds = build_parent_mfi_1d(2, 1.0, 1.0, 0.5, c=0.6)
        dense = dense_matrix(ds, ordering="block")
        op = linear_operator(ds, ordering="block")
        v = rng.normal(size=dense.shape[0]) + 1j * rng.normal(size=dense.shape[0])
        assert np.abs(op @ v - dense @ v).max() <= 1e-11

    def test_block_vs_zigzag_similarity(self):
        ds = build_parent_mfi_1d(2, 1.0, 1.0, 0.5, c=0.9)
        mb = dense_matrix(ds, ordering="block")
        mz = dense_matrix(ds, ordering="zigzag")
        assert np.allclose(np.sort(np.linalg.eigvalsh(mb)), np.sort(np.linalg.eigvalsh(mz)))

    def test_dense_limit(self):
        h = build_mfi_1d(14, 1.0, 1.0, 0.5)
        with pytest.raises(TooLarge):
            dense_matrix(h)


class TestOrderingConversion:
    def test_round_trip(self, rng):
        v = rng.normal(size=16) + 1j * rng.normal(size=16)
        v /= np.linalg.norm(v)
        sv = StateVector(v, 4, "block")
        back = convert_ordering(convert_ordering(sv, "zigzag"), "block")
        assert np.abs(back.amplitudes - v).max() <= 1e-15

    def test_energy_invariant(self, rng):
        ds = build_parent_mfi_1d(2, 1.0, 1.0, 0.5, c=0.5)
        e, psi = ground_state(ds, ordering="block")
        psi_z = convert_ordering(psi, "zigzag")
        assert abs(expectation(ds, psi_z) - e) <= 1e-9


class TestTfdState:
    def test_beta_zero_is_bell(self):
        h0 = dense_matrix(build_mfi_1d(2, 1.0, 1.0, 0.5))
        sv = tfd_state(h0, 0.0, ordering="zigzag")
        bell_pair = np.array([1.0, 0, 0, 1.0]) / np.sqrt(2)
        oracle = np.kron(bell_pair, bell_pair)  # zigzag = interleaved pairs
        assert np.abs(sv.amplitudes - oracle).max() <= 1e-12

    def test_large_beta_ground_pair(self):
        h0 = dense_matrix(build_mfi_1d(2, 1.0, 1.0, 0.5))
        w, v = np.linalg.eigh(h0)
        sv = tfd_state(h0, 200.0, ordering="block")
        gs = v[:, 0].real
        oracle = np.kron(gs, gs)
        overlap = abs(np.vdot(oracle, sv.amplitudes)) ** 2
        assert overlap >= 1 - 1e-8

    def test_single_spin_amplitudes(self):
        h0 = dense_matrix(single_spin_h0())
        sv = tfd_state(h0, 2.0, ordering="block")
        amp = sv.amplitudes
        # nonzero on |00> and |11> with ratio exp(-beta*eps1/2) = exp(-1)
        assert abs(amp[1]) + abs(amp[2]) <= 1e-14
        assert abs(amp[3] / amp[0] - np.exp(-1.0)) <= 1e-12

    def test_complex_h0_rejected(self):
        y = np.array([[0.0, -1j], [1j, 0.0]])
        with pytest.raises(AntiunitaryMismatch):
            tfd_state(y, 1.0)


class TestGroundState:
    def test_strong_coupling_bell(self):
        ds = build_parent_mfi_1d(2, 1.0, 1.0, 0.5, c=1e3)
        _, psi = ground_state(ds, ordering="block")
        bell = tfd_state(dense_matrix(ds.left), 0.0, ordering="block")
        assert abs(np.vdot(bell.amplitudes, psi.amplitudes)) ** 2 >= 1 - 1e-3

    def test_decoupled_limit(self):
        ds = build_parent_mfi_1d(2, 1.0, 1.0, 0.5, c=0.0)
        e, psi = ground_state(ds, ordering="block")
        w, v = np.linalg.eigh(dense_matrix(ds.left))
        assert abs(e - 2 * w[0]) <= 1e-10
        oracle = np.kron(v[:, 0].real, v[:, 0].real)
        assert abs(np.vdot(oracle, psi.amplitudes)) ** 2 >= 1 - 1e-10

    def test_single_spin_exact_tfd(self):
        ds = single_spin_toy(1.0)
        _, psi = ground_state(ds, ordering="block")
        beta = single_spin_beta_star(1.0)
        assert abs(beta - 1.762747174) <= 1e-8
        tfd = tfd_state(dense_matrix(ds.left), beta, ordering="block")
        assert abs(np.vdot(tfd.amplitudes, psi.amplitudes)) ** 2 >= 1 - 1e-10

    def test_sparse_path_matches_dense(self):
        # 2N = 10 sites forces nothing; compare against dense eigh directly
        ds = build_parent_mfi_1d(5, 1.0, 1.0, 0.5, c=1.0)
        e, _ = ground_state(ds)
        w = np.linalg.eigvalsh(dense_matrix(ds, ordering="block"))
        assert abs(e - w[0]) <= 1e-8


class TestFidelityScan:
    def test_self_consistency_peak(self):
        h0 = dense_matrix(build_mfi_1d(3, 1.0, 1.0, 0.5))
        beta0 = 0.8
        psi = tfd_state(h0, beta0, ordering="block")
        curve = fidelity_scan(psi, h0, default_beta_grid())
        assert abs(curve.beta_star - beta0) <= 1e-4 * beta0
        assert curve.f_max >= 1 - 1e-9

    def test_single_spin_half_coupling(self):
        ds = single_spin_toy(0.5)
        _, psi = ground_state(ds, ordering="block")
        curve = fidelity_scan(psi, dense_matrix(ds.left), default_beta_grid(),
                              refine_tol=1e-9)
        assert abs(curve.beta_star - 2.0 * np.arcsinh(2.0)) <= 1e-5
        assert curve.f_max >= 1 - 1e-10

    def test_beta_star_closed_form_grid(self):
        for c in (0.25, 0.5, 1.0, 2.0, 4.0, 10.0):
            ds = single_spin_toy(c)
            _, psi = ground_state(ds, ordering="block")
            curve = fidelity_scan(psi, dense_matrix(ds.left), default_beta_grid(),
                                  refine_tol=1e-10)
            assert abs(curve.beta_star - single_spin_beta_star(c)) <= 1e-6
            assert curve.f_max >= 1 - 1e-10

    def test_beta_star_monotone_in_c(self):
        stars = []
        for c in (0.25, 0.5, 1.0, 2.0, 4.0, 10.0):
            ds = single_spin_toy(c)
            _, psi = ground_state(ds, ordering="block")
            curve = fidelity_scan(psi, dense_matrix(ds.left), default_beta_grid())
            stars.append(curve.beta_star)
        assert all(a > b for a, b in zip(stars, stars[1:]))

    def test_empty_grid(self):
        ds = single_spin_toy(1.0)
        _, psi = ground_state(ds, ordering="block")
        with pytest.raises(InvalidGrid):
            fidelity_scan(psi, dense_matrix(ds.left), np.array([]))

    def test_boundary_flag_at_weak_coupling(self):
        ds = build_parent_mfi_1d(2, 1.0, 1.0, 0.5, c=0.0)
        _, psi = ground_state(ds, ordering="block")
        curve = fidelity_scan(psi, dense_matrix(ds.left), default_beta_grid())
        assert curve.boundary
        assert curve.beta_star == default_beta_grid()[-1]

    def test_ordering_invariance(self):
        ds = build_parent_mfi_1d(3, 1.0, 1.0, 0.5, c=1.0)
        _, psi = ground_state(ds, ordering="block")
        h0 = dense_matrix(ds.left)
        grid = default_beta_grid(31)
        f_block = fidelity_scan(psi, h0, grid)
        f_zig = fidelity_scan(convert_ordering(psi, "zigzag"), h0, grid)
        assert np.abs(f_block.overlaps - f_zig.overlaps).max() <= 1e-12
        assert abs(f_block.f_max - f_zig.f_max) <= 1e-12


class TestGap:
    def test_decoupled_gap_is_h0_gap(self):
        ds = build_parent_mfi_1d(2, 1.0, 1.0, 0.5, c=0.0)
        delta, e0, e1 = gap(ds)
        w = np.linalg.eigvalsh(dense_matrix(ds.left))
        assert abs(delta - (w[1] - w[0])) <= 1e-10

    def test_single_spin_strong_coupling_linear(self):
        # brute-force 4x4 diagonalization across a c grid: gap -> 4c + O(1)
        for c in (50.0, 100.0, 200.0):
            ds = build_parent_mfi_1d(1, 0.0, 0.0, 0.5, c=c)
            m = dense_matrix(ds, ordering="block")
            w = np.linalg.eigvalsh(m)
            delta, _, _ = gap(ds)
            assert abs(delta - (w[1] - w[0])) <= 1e-10
            assert abs(delta - 4 * c) <= 2.0

    def test_n3_matches_dense(self):
        ds = build_parent_mfi_1d(3, 1.0, 1.0, 0.5, c=1.0)
        delta, e0, e1 = gap(ds)
        w = np.linalg.eigvalsh(doubled_block_oracle(ds.left, 1.0))
        assert abs(e0 - w[0]) <= 1e-8 and abs(e1 - w[1]) <= 1e-8
        assert abs(delta - (w[1] - w[0])) <= 1e-8


class TestOffdiagWeight:
    def test_tfd_is_diagonal(self):
        h0 = dense_matrix(build_mfi_1d(3, 1.0, 1.0, 0.5))
        psi = tfd_state(h0, 1.3, ordering="block")
        assert offdiag_weight(psi, h0_eigensystem(h0)) <= 1e-10

    def test_pure_offdiagonal_state(self):
        h0 = dense_matrix(build_mfi_1d(2, 1.0, 1.0, 0.5))
        es = h0_eigensystem(h0)
        v0, v1 = es.vectors[:, 0].real, es.vectors[:, 1].real
        psi = StateVector(np.kron(v0, v1).astype(complex), 4, "block")
        assert abs(offdiag_weight(psi, es) - 1.0) <= 1e-12

    def test_fidelity_bound(self):
        ds = build_parent_mfi_1d(4, 1.0, 1.0, 0.5, c=1.0)
        _, psi = ground_state(ds, ordering="block")
        h0 = dense_matrix(ds.left)
        curve = fidelity_scan(psi, h0, default_beta_grid())
        w_off = offdiag_weight(psi, h0_eigensystem(h0))
        assert curve.f_max <= 1 - w_off + 1e-9


class TestVariational:
    def test_ground_energy_below_tfd_energy(self):
        ds = build_parent_mfi_1d(3, 1.0, 1.0, 0.5, c=1.0)
        e0, _ = ground_state(ds)
        h0 = dense_matrix(ds.left)
        for beta in np.geomspace(0.01, 100, 13):
            tfd = tfd_state(h0, beta, ordering="block")
            assert e0 <= expectation(ds, tfd) + 1e-9
