"""Tensor-train machinery: MPS states, MPO compilation, DMRG, and TEBD."""

from .dmrg import DmrgResult, default_penalty_weight, dmrg
from .evolve import (
    TfdScanner,
    TrotterSchedule,
    itebd_tfd,
    lr_gate,
    one_body_gate,
    tebd_adiabatic,
    zz_gate,
)
from .mpo import (
    TensorTrainOperator,
    compile_mpo,
    compile_parent_mpo,
    gate_window,
    mpo_add,
    mpo_compress,
    mpo_expectation,
    mpo_multiply,
    mpo_scale,
    mpo_to_dense,
)
from .state import TensorTrainState, fidelity, mps_bell, overlap, product_state

__all__ = [
    "DmrgResult",
    "TensorTrainOperator",
    "TensorTrainState",
    "TfdScanner",
    "TrotterSchedule",
    "compile_mpo",
    "compile_parent_mpo",
    "default_penalty_weight",
    "dmrg",
    "fidelity",
    "gate_window",
    "itebd_tfd",
    "lr_gate",
    "mpo_add",
    "mpo_compress",
    "mpo_expectation",
    "mpo_multiply",
    "mpo_scale",
    "mpo_to_dense",
    "mps_bell",
    "one_body_gate",
    "overlap",
    "product_state",
    "tebd_adiabatic",
    "zz_gate",
]
