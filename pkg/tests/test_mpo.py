import numpy as np
import pytest

from tfdprep.ed import dense_matrix
from tfdprep.errors import SpanOverflow
from tfdprep.models import build_mfi_1d, build_parent_mfi_1d
from tfdprep.mps import (
    compile_mpo,
    compile_parent_mpo,
    mpo_add,
    mpo_compress,
    mpo_expectation,
    mpo_multiply,
    mpo_scale,
    mpo_to_dense,
)
from tfdprep.mps.state import TensorTrainState
from tfdprep.pauli import PauliString, PauliSum

from conftest import kron_sum


def random_product_mps(rng, n):
    tensors = []
    for _ in range(n):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        tensors.append(v.reshape(1, 2, 1))
    return TensorTrainState(tensors, center=0)


class TestCompileMpo:
    def test_field_sum_bond_dimension(self):
        h = PauliSum([PauliString({i: "X"}, 0.7) for i in range(5)], 5)
        mpo = compile_mpo(h)
        assert max(mpo.bond_dims()) == 2  # begin/end automaton only

    def test_mfi_dense_equivalence(self):
        h = build_mfi_1d(4, 1.0, 1.0, 0.5)
        assert np.abs(mpo_to_dense(compile_mpo(h)) - kron_sum(h)).max() <= 1e-12

    def test_parent_dense_equivalence(self):
        ds = build_parent_mfi_1d(3, 1.0, 1.0, 0.5, c=0.8)
        mpo = compile_parent_mpo(ds)
        oracle = dense_matrix(ds, ordering="zigzag")
        assert np.abs(mpo_to_dense(mpo) - oracle).max() <= 1e-12

    def test_constant_term(self):
        h = PauliSum([PauliString({}, 2.5), PauliString({1: "Z"}, 1.0)], 3)
        dense = mpo_to_dense(compile_mpo(h))
        assert np.abs(dense - kron_sum(h)).max() <= 1e-12

    def test_expectations_on_product_states(self, rng):
        ds = build_parent_mfi_1d(3, 1.0, 1.0, 0.5, c=1.0)
        mpo = compile_parent_mpo(ds)
        oracle = dense_matrix(ds, ordering="zigzag")
        for _ in range(5):
            psi = random_product_mps(rng, 6)
            vec = psi.to_dense()
            expect = np.real(np.vdot(vec, oracle @ vec))
            assert abs(mpo_expectation(mpo, psi) - expect) <= 1e-8

    def test_span_limit(self):
        h = PauliSum([PauliString({0: "Z", 5: "Z"}, 1.0)], 6)
        with pytest.raises(SpanOverflow):
            compile_mpo(h, max_span=3)
        dense = mpo_to_dense(compile_mpo(h))  # unlimited path works
        assert np.abs(dense - kron_sum(h)).max() <= 1e-12


class TestMpoArithmetic:
    def test_add(self):
        a = build_mfi_1d(4, 1.0, 0.0, 0.0)
        b = build_mfi_1d(4, 0.0, 1.0, 0.5)
        s = mpo_add(compile_mpo(a), compile_mpo(b))
        assert np.abs(mpo_to_dense(s) - kron_sum(a) - kron_sum(b)).max() <= 1e-12

    def test_multiply(self):
        h = build_mfi_1d(3, 1.0, 1.0, 0.5)
        sq = mpo_multiply(compile_mpo(h), compile_mpo(h))
        oracle = kron_sum(h) @ kron_sum(h)
        assert np.abs(mpo_to_dense(sq) - oracle).max() <= 1e-11

    def test_scale_and_compress(self):
        h = build_mfi_1d(5, 1.0, 1.0, 0.5)
        sq = mpo_multiply(compile_mpo(h), compile_mpo(h))
        compressed = mpo_compress(mpo_scale(sq, 0.25), cutoff=1e-12)
        oracle = 0.25 * (kron_sum(h) @ kron_sum(h))
        assert np.abs(mpo_to_dense(compressed) - oracle).max() <= 1e-9
        assert max(compressed.bond_dims()) <= max(sq.bond_dims())

    def test_penalty_mpo_matches_dense(self):
        ds = build_parent_mfi_1d(3, 1.0, 1.0, 0.5, c=0.6, xi=2.0)
        mpo = compile_parent_mpo(ds, cutoff=1e-12)
        oracle = dense_matrix(ds, ordering="zigzag")
        assert np.abs(mpo_to_dense(mpo) - oracle).max() <= 1e-8

    def test_penalty_compression_is_economical(self):
        ds = build_parent_mfi_1d(8, 1.0, 1.0, 0.5, c=1.0, xi=8.0)
        base = compile_parent_mpo(build_parent_mfi_1d(8, 1.0, 1.0, 0.5, c=1.0))
        full = compile_parent_mpo(ds)
        assert max(full.bond_dims()) <= 6 * max(base.bond_dims())
