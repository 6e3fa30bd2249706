"""Model constructors: Ising chains/lattices, spin-SYK, and the coupled parent.

The parent operator lives on a doubled lattice of 2N sites in zigzag order
(left copy on even merged indices, right copy on odd ones).  The inter-copy
coupling squares (O_L - O*_R)^2 and the energy-mismatch penalty
(xi/2N)(H_L - H*_R)^2 are expanded symbolically into Pauli strings.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import EmptyLattice, InvalidBodySize, InvalidCoupling
from .pauli import PauliString, PauliSum, identity_sum


@dataclass
class IsingParams:
    """Mixed field Ising chain parameters for one copy."""

    n: int
    jz: float = 1.0
    hx: float = 1.0
    hz: float = 0.5


def merged_index(copy: str, i: int) -> int:
    """Zigzag embedding: left copy site i -> 2i, right copy site i -> 2i+1."""
    return 2 * i if copy == "L" else 2 * i + 1


def copy_site(merged: int) -> tuple[str, int]:
    """Inverse of ``merged_index``."""
    return ("L", merged // 2) if merged % 2 == 0 else ("R", merged // 2)


def build_mfi_1d(n: int, jz: float, hx: float, hz: float) -> PauliSum:
    """Mixed field Ising chain, open boundaries:
    jz * sum ZZ + hx * sum X + hz * sum Z."""
    if n < 1:
        raise EmptyLattice("mixed field Ising chain needs at least one site")
    terms = [PauliString({i: "Z", i + 1: "Z"}, jz) for i in range(n - 1)]
    terms += [PauliString({i: "X"}, hx) for i in range(n)]
    terms += [PauliString({i: "Z"}, hz) for i in range(n)]
    return PauliSum(terms, n, label=f"mfi1d(n={n})")


def build_mfi_2d(nx: int, ny: int, jz: float, hx: float, hz: float) -> PauliSum:
    """Mixed field Ising model on an open nx x ny rectangle, row-major sites."""
    if nx < 1 or ny < 1:
        raise EmptyLattice("mixed field Ising lattice needs at least one site")
    n = nx * ny

    def site(r: int, c: int) -> int:
        return r * ny + c

    terms = []
    for r in range(nx):
        for c in range(ny):
            if c + 1 < ny:
                terms.append(PauliString({site(r, c): "Z", site(r, c + 1): "Z"}, jz))
            if r + 1 < nx:
                terms.append(PauliString({site(r, c): "Z", site(r + 1, c): "Z"}, jz))
    for s in range(n):
        terms.append(PauliString({s: "X"}, hx))
    for s in range(n):
        terms.append(PauliString({s: "Z"}, hz))
    return PauliSum(terms, n, label=f"mfi2d({nx}x{ny})")


@dataclass
class DisorderSpec:
    """One spin-SYK disorder realization: q-body even-Y strings on n sites."""

    n: int
    q: int = 4
    j_scale: float = 1.0
    seed: int = 0
    realization_index: int = 0

    def coupling_sigma(self) -> float:
        """Std dev of the Gaussian couplings.

        Chosen so the infinite-temperature energy variance Tr(H^2)/2^n stays
        extensive in n at fixed j_scale (see README normalization note).
        """
        var = (
            self.j_scale**2
            * math.factorial(self.q - 1)
            / (self.q * self.n ** (self.q - 1) * 2 ** (self.q - 1))
        )
        return math.sqrt(var)


def sample_spin_syk(spec: DisorderSpec) -> PauliSum:
    """Draw one spin-SYK Hamiltonian: all q-site X/Y strings with even Y count.

    The even-Y restriction makes the matrix real symmetric in the
    computational basis, so complex conjugation is a valid antiunitary map.
    Coefficients are i.i.d. Gaussian; identical (seed, realization_index)
    gives bit-identical output.
    """
    if spec.q > spec.n:
        raise InvalidBodySize(f"q={spec.q} exceeds n={spec.n}")
    if spec.q % 2 != 0 or spec.q < 2:
        raise InvalidBodySize(f"q must be even and >= 2, got {spec.q}")
    patterns = [
        p
        for p in itertools.product("XY", repeat=spec.q)
        if p.count("Y") % 2 == 0
    ]
    subsets = list(itertools.combinations(range(spec.n), spec.q))
    rng = np.random.default_rng([spec.seed, spec.realization_index])
    coeffs = rng.normal(0.0, spec.coupling_sigma(), size=len(subsets) * len(patterns))
    terms = []
    k = 0
    for sites in subsets:
        for pat in patterns:
            terms.append(PauliString(dict(zip(sites, pat)), float(coeffs[k])))
            k += 1
    return PauliSum(terms, spec.n, label=f"spin_syk(n={spec.n},q={spec.q})")


def conjugate_spec(h: PauliSum) -> PauliSum:
    """Antiunitary image under complex conjugation: each string picks up (-1)^#Y."""
    return h.conjugated()


def default_couplings(n: int, kinds: tuple[str, ...] = ("X", "Z")) -> list[PauliSum]:
    """The ultra-local coupling set: one single-site operator per kind per site."""
    return [
        PauliSum([PauliString({i: k}, 1.0)], n)
        for k in kinds
        for i in range(n)
    ]


@dataclass
class DoubledSystem:
    """Two mirrored copies plus LR coupling and penalty, zigzag site mapping.

    ``left`` and ``right_conjugated`` are stored on single-copy site indices;
    embeddings onto the merged 2N-site chain are built on demand.
    """

    left: PauliSum
    right_conjugated: PauliSum
    lr_coupling_terms: PauliSum
    coupling_c: float
    penalty_xi: float
    n_per_copy: int
    include_constant: bool = True

    @property
    def n_sites(self) -> int:
        return 2 * self.n_per_copy

    def embed_left(self, h: PauliSum | None = None) -> PauliSum:
        h = self.left if h is None else h
        return h.embedded(lambda i: merged_index("L", i), self.n_sites, "L")

    def embed_right(self, h: PauliSum | None = None) -> PauliSum:
        h = self.right_conjugated if h is None else h
        return h.embedded(lambda i: merged_index("R", i), self.n_sites, "R*")

    def difference_sum(self) -> PauliSum:
        """H_L - H*_R on the merged chain (kernel of the diagonal subspace)."""
        return (self.embed_left() - self.embed_right()).canonicalized()

    @cached_property
    def penalty_terms(self) -> PauliSum:
        """(xi/2N)(H_L - H*_R)^2 expanded into merged-chain Pauli strings."""
        if self.penalty_xi == 0.0:
            return PauliSum([], self.n_sites)
        diff = self.difference_sum()
        sq = diff.multiplied(diff).scaled(self.penalty_xi / (2.0 * self.n_per_copy))
        if not self.include_constant:
            sq = PauliSum([t for t in sq.terms if t.ops], self.n_sites)
        return sq.canonicalized()

    def base_sum(self) -> PauliSum:
        """Doubled operator without penalty: H_L + H*_R + coupling."""
        return (
            self.embed_left() + self.embed_right() + self.lr_coupling_terms
        ).canonicalized()

    def merged_sum(self) -> PauliSum:
        """Full doubled operator on the merged 2N-site chain."""
        total = self.base_sum()
        if self.penalty_xi != 0.0:
            total = (total + self.penalty_terms).canonicalized()
        total.label = "parent"
        return total


def _validate_coupling(op: PauliSum, n: int) -> None:
    if not op.terms:
        raise InvalidCoupling("empty coupling operator")
    for t in op.terms:
        if not np.isfinite(t.coefficient) or isinstance(t.coefficient, complex):
            raise InvalidCoupling("coupling coefficients must be finite reals")
        for site in t.ops:
            if not 0 <= site < n:
                raise InvalidCoupling(f"coupling site {site} outside copy of {n} sites")


def build_parent(
    h0: PauliSum,
    coupling_ops: list[PauliSum],
    c: float,
    xi: float = 0.0,
    include_constant: bool = True,
) -> DoubledSystem:
    """Coupled parent Hamiltonian H_L + H*_R + c * sum (O_L - O*_R)^2 (+ penalty).

    Each coupling operator contributes c*(O_L - O*_R)^2, expanded symbolically;
    for a single-Pauli O this is c*(2I - 2 O_L O*_R).  Identity strings produced
    by the squares are kept only when ``include_constant``.
    """
    n = h0.n_sites
    merged_n = 2 * n
    acc = PauliSum([], merged_n)
    for op in coupling_ops:
        _validate_coupling(op, n)
        o_l = op.embedded(lambda i: merged_index("L", i), merged_n)
        o_r = conjugate_spec(op).embedded(lambda i: merged_index("R", i), merged_n)
        diff = o_l - o_r
        acc = acc + diff.multiplied(diff)
    coupling = acc.scaled(c).canonicalized()
    if not include_constant:
        coupling = PauliSum(
            [t for t in coupling.terms if t.ops], merged_n
        ).canonicalized()
    return DoubledSystem(
        left=h0,
        right_conjugated=conjugate_spec(h0),
        lr_coupling_terms=coupling,
        coupling_c=c,
        penalty_xi=xi,
        n_per_copy=n,
        include_constant=include_constant,
    )


def single_spin_h0() -> PauliSum:
    """The gapped one-qubit target (1 - Z)/2 used in the closed-form toy."""
    return PauliSum([PauliString({}, 0.5), PauliString({0: "Z"}, -0.5)], 1, "single_spin")


def single_spin_toy(c: float, include_constant: bool = True) -> DoubledSystem:
    """Single-spin coupled model with -c(X_L X_R + Z_L Z_R) coupling.

    Its ground state is an exact thermofield double of (1-Z)/2 at inverse
    temperature 2*asinh(1/c).  The -c(XX+ZZ) normalization equals the parent
    construction with coefficient c/2 per squared coupling, up to a constant.
    """
    return build_parent(
        single_spin_h0(),
        default_couplings(1, ("X", "Z")),
        c / 2.0,
        include_constant=include_constant,
    )


def single_spin_beta_star(c: float) -> float:
    """Closed-form optimal inverse temperature of the single-spin toy."""
    return 2.0 * math.asinh(1.0 / c)


def build_parent_mfi_1d(
    n: int, jz: float, hx: float, hz: float, c: float, xi: float = 0.0,
    include_constant: bool = True,
) -> DoubledSystem:
    """Convenience: coupled mixed field Ising chains with the {X_i, Z_i} set."""
    return build_parent(
        build_mfi_1d(n, jz, hx, hz), default_couplings(n, ("X", "Z")), c, xi,
        include_constant,
    )


def build_parent_spin_syk(
    spec: DisorderSpec, c: float, xi: float = 0.0, include_constant: bool = True
) -> DoubledSystem:
    """Coupled spin-SYK copies with the {X_i, Y_i} coupling set."""
    h0 = sample_spin_syk(spec)
    return build_parent(
        h0, default_couplings(spec.n, ("X", "Y")), c, xi, include_constant
    )
