"""Weighted Pauli-string sums: the symbolic operator representation.

A ``PauliString`` is a product of single-site X/Y/Z operators (identity on
every site not listed) with a real coefficient; a ``PauliSum`` is a list of
such strings on a declared number of sites.  Real coefficients make every
sum Hermitian by construction.  Products of strings are tracked with their
{±1, ±i} phases; squaring a Hermitian sum therefore yields real
coefficients again after merging.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidMatrix

PAULI_OPS = ("X", "Y", "Z")

# Single-site products P*Q = phase * R; None means identity.
_MULT: dict[tuple[str, str], tuple[complex, str | None]] = {
    ("X", "X"): (1.0, None),
    ("Y", "Y"): (1.0, None),
    ("Z", "Z"): (1.0, None),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}

_DENSE = {
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1j], [1j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def pauli_matrix(op: str) -> np.ndarray:
    """Dense 2x2 matrix of a single-site Pauli operator."""
    return _DENSE[op].copy()


@dataclass
class PauliString:
    """One weighted Pauli product.  ``ops`` maps site index -> 'X'|'Y'|'Z'."""

    ops: dict[int, str]
    coefficient: float

    def key(self) -> tuple[tuple[int, str], ...]:
        return tuple(sorted(self.ops.items()))

    @property
    def y_count(self) -> int:
        return sum(1 for p in self.ops.values() if p == "Y")

    def span(self) -> int:
        """Width of the site window covered by the string (0 for identity)."""
        if not self.ops:
            return 0
        sites = self.ops.keys()
        return max(sites) - min(sites) + 1

    def mapped(self, site_fn) -> "PauliString":
        return PauliString({site_fn(i): p for i, p in self.ops.items()}, self.coefficient)


def string_product(a: PauliString, b: PauliString) -> tuple[complex, dict[int, str]]:
    """Product of two strings: returns (phase * coeff_a * coeff_b, merged ops)."""
    phase: complex = a.coefficient * b.coefficient
    ops: dict[int, str] = dict(a.ops)
    for site, q in b.ops.items():
        p = ops.pop(site, None)
        if p is None:
            ops[site] = q
            continue
        ph, r = _MULT[(p, q)]
        phase *= ph
        if r is not None:
            ops[site] = r
    return phase, ops


@dataclass
class PauliSum:
    """A Hermitian operator as a list of weighted Pauli strings on n_sites."""

    terms: list[PauliString]
    n_sites: int
    label: str = ""

    def __post_init__(self) -> None:
        for t in self.terms:
            for site in t.ops:
                if not 0 <= site < self.n_sites:
                    raise InvalidMatrix(
                        f"site {site} outside lattice of {self.n_sites} sites"
                    )

    def canonicalized(self, drop_tol: float = 0.0) -> "PauliSum":
        """Merge duplicate strings; drop coefficients below drop_tol (absolute)."""
        acc: dict[tuple, float] = {}
        for t in self.terms:
            acc[t.key()] = acc.get(t.key(), 0.0) + t.coefficient
        terms = [
            PauliString(dict(k), c)
            for k, c in sorted(acc.items())
            if abs(c) > drop_tol
        ]
        return PauliSum(terms, self.n_sites, self.label)

    def scaled(self, factor: float) -> "PauliSum":
        return PauliSum(
            [PauliString(dict(t.ops), t.coefficient * factor) for t in self.terms],
            self.n_sites,
            self.label,
        )

    def __add__(self, other: "PauliSum") -> "PauliSum":
        n = max(self.n_sites, other.n_sites)
        return PauliSum(
            [PauliString(dict(t.ops), t.coefficient) for t in self.terms]
            + [PauliString(dict(t.ops), t.coefficient) for t in other.terms],
            n,
            self.label,
        )

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scaled(-1.0)

    def multiplied(self, other: "PauliSum", imag_tol: float = 1e-10) -> "PauliSum":
        """Symbolic operator product, merged to real coefficients.

        Raises if imaginary residue survives merging (the product of two
        Hermitian sums taken in a non-symmetric combination).
        """
        acc: dict[tuple, complex] = {}
        for ta in self.terms:
            for tb in other.terms:
                phase, ops = string_product(ta, tb)
                key = tuple(sorted(ops.items()))
                acc[key] = acc.get(key, 0.0) + phase
        scale = max((abs(c) for c in acc.values()), default=0.0)
        terms = []
        for key, c in sorted(acc.items()):
            if abs(c.imag) > imag_tol * max(scale, 1e-300):
                raise InvalidMatrix(
                    f"non-Hermitian product: residual imaginary coefficient {c.imag:.3e}"
                )
            if abs(c.real) > 1e-14 * max(scale, 1e-300):
                terms.append(PauliString(dict(key), c.real))
        return PauliSum(terms, max(self.n_sites, other.n_sites))

    def conjugated(self) -> "PauliSum":
        """Complex conjugation in the computational basis: Y -> -Y per factor."""
        return PauliSum(
            [
                PauliString(dict(t.ops), t.coefficient * (-1.0) ** t.y_count)
                for t in self.terms
            ],
            self.n_sites,
            self.label + "*" if self.label else "",
        )

    def embedded(self, site_fn, n_sites_new: int, label: str = "") -> "PauliSum":
        """Relabel sites through ``site_fn`` onto a larger lattice."""
        return PauliSum([t.mapped(site_fn) for t in self.terms], n_sites_new, label)

    def coefficient_norm(self) -> float:
        """Sum of |coefficients|: an upper bound on the spectral norm."""
        return float(sum(abs(t.coefficient) for t in self.terms))

    def max_span(self) -> int:
        return max((t.span() for t in self.terms), default=0)

    # --- line-oriented text format: "coeff site:op site:op ..." ---

    def to_lines(self) -> str:
        lines = [f"# n_sites={self.n_sites} label={self.label}"]
        for t in self.terms:
            body = " ".join(f"{i}:{p}" for i, p in sorted(t.ops.items()))
            lines.append(f"{t.coefficient!r} {body}".rstrip())
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_lines(text: str) -> "PauliSum":
        n_sites = 0
        label = ""
        terms: list[PauliString] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("n_sites="):
                        n_sites = int(tok.split("=", 1)[1])
                    elif tok.startswith("label="):
                        label = tok.split("=", 1)[1]
                continue
            parts = line.split()
            coeff = float(parts[0])
            ops: dict[int, str] = {}
            for tok in parts[1:]:
                site, op = tok.split(":")
                ops[int(site)] = op
            terms.append(PauliString(ops, coeff))
            if ops:
                n_sites = max(n_sites, max(ops) + 1)
        return PauliSum(terms, max(n_sites, 1), label)


def identity_sum(n_sites: int, coefficient: float = 1.0) -> PauliSum:
    return PauliSum([PauliString({}, coefficient)], n_sites)


def single_site(n_sites: int, site: int, op: str, coefficient: float = 1.0) -> PauliSum:
    return PauliSum([PauliString({site: op}, coefficient)], n_sites)
