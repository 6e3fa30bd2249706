"""Random-matrix version of the coupled Hamiltonian.

In the many-operator limit the interaction self-averages and the coupled
Hamiltonian acts separately on the diagonal and off-diagonal energy
subspaces: diagonal eigenstates are resolvent Choi states with eigenvalue
set by Tr R(lambda) = 2L/(JN).  For a semicircle spectrum everything is in
closed form (Stieltjes transform, critical coupling, gap, Bessel-series
overlap).  Finite-K Monte Carlo experiments quantify the leakage out of the
diagonal subspace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ive

from .ed import FidelityCurve, fidelity_scan_spectrum
from .errors import BelowCritical, InvalidGrid, PoleError, TooLarge
from .optimize import scan_refine_max

MAX_DENSE_L = 64


@dataclass
class RmtConfig:
    """Finite-K experiment parameters on a Hilbert space of dimension l."""

    l: int
    n: int
    j: float
    sigma: float = 1.0
    k: int = 1
    seed: int = 0

    @property
    def j_critical(self) -> float:
        return 2.0 * self.sigma / self.n


@dataclass
class DiagonalSolution:
    """Solutions of the resolvent root equation and the implied gap bound."""

    lambdas: np.ndarray
    lambda_star: float
    gap0: float


@dataclass
class GueAnalytics:
    """Closed-form semicircle quantities at one coupling ratio."""

    m_value: float
    lambda_star: float
    gap0: float
    overlap: float
    beta_star: float
    f_max: float


@dataclass
class FiniteKResult:
    w_off: float
    f_max: float
    beta_star: float
    gs_energy: float


def trace_resolvent_mean(eigs: np.ndarray, lam: float) -> float:
    """(1/L) Tr (H0 - lambda)^(-1): the empirical Stieltjes transform."""
    return float(np.mean(1.0 / (eigs - lam)))


def _bisect_root(eigs: np.ndarray, target: float, lo: float, hi: float) -> float:
    # strictly increasing in lambda between poles: plain bisection suffices
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if trace_resolvent_mean(eigs, mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_diagonal(h0_eigs: np.ndarray, j: float, n: int, n_solutions: int = 2) -> DiagonalSolution:
    """Solve Tr R(lambda) = 2L/(JN) for the lowest ``n_solutions`` roots.

    The ground-state root lies strictly below the lowest eigenvalue; further
    roots interlace the spectrum.
    """
    eigs = np.sort(np.asarray(h0_eigs, dtype=float))
    target = 2.0 / (j * n)  # per-state form of 2L/(JN)
    e_min = eigs[0]
    width = max(float(eigs[-1] - eigs[0]), abs(e_min), 1.0)
    lo = e_min - j * n  # m(e_min - JN) <= 1/(JN) < 2/(JN)
    offset = np.finfo(float).eps * width
    hi = e_min - offset
    while trace_resolvent_mean(eigs, hi) < target and offset > 1e-300:
        offset *= 0.5
        hi = e_min - offset
    roots = [_bisect_root(eigs, target, lo, hi)]
    distinct = np.unique(eigs)
    for a, b in zip(distinct, distinct[1:]):
        if len(roots) >= n_solutions:
            break
        pad = (b - a) * 1e-14
        roots.append(_bisect_root(eigs, target, a + pad, b - pad))
    lam = np.array(roots)
    return DiagonalSolution(lam, float(lam[0]), 2.0 * float(e_min - lam[0]))


def resolvent_state(h0_eigs: np.ndarray, lam: float) -> np.ndarray:
    """Normalized diagonal amplitudes a_n = 1/(eps_n - lambda) of a Choi state."""
    eigs = np.asarray(h0_eigs, dtype=float)
    gaps = eigs - lam
    if np.any(gaps == 0.0) or not np.all(np.isfinite(1.0 / gaps)):
        raise PoleError(f"lambda = {lam} collides with the spectrum")
    amps = 1.0 / gaps
    return amps / np.linalg.norm(amps)


def build_h_infinity(h0_eigs: np.ndarray, j: float, n: int) -> np.ndarray:
    """Dense K->infinity Hamiltonian on the doubled eigenbasis (L^2 x L^2)."""
    eigs = np.asarray(h0_eigs, dtype=float)
    l = len(eigs)
    if l > MAX_DENSE_L:
        raise TooLarge(f"L={l} exceeds dense doubled-space limit {MAX_DENSE_L}")
    jn = j * n
    diag = (eigs[:, None] + eigs[None, :]).ravel()
    h = np.diag(diag + jn).astype(float)
    inf_state = np.zeros(l * l)
    inf_state[:: l + 1] = 1.0 / np.sqrt(l)
    h -= jn * np.outer(inf_state, inf_state)
    return h


def h_infinity_diagonal_sector(h0_eigs: np.ndarray, j: float, n: int) -> np.ndarray:
    """Exact L x L reduction of H_infinity to the diagonal subspace."""
    eigs = np.asarray(h0_eigs, dtype=float)
    l = len(eigs)
    jn = j * n
    return np.diag(2.0 * eigs + jn) - (jn / l) * np.ones((l, l))


def stieltjes_semicircle(lam: float, sigma: float) -> float:
    """Semicircle Stieltjes transform on the real axis left of the support.

    Branch fixed by m -> 0+ as lambda -> -inf, which gives
    m(lambda) = (-sqrt(lambda^2 - 4 sigma^2) - lambda) / (2 sigma^2).
    """
    if lam >= -2.0 * sigma:
        raise BelowCritical(f"lambda = {lam} is not left of the support edge")
    return (-np.sqrt(lam * lam - 4.0 * sigma * sigma) - lam) / (2.0 * sigma * sigma)


def gue_overlap(j_over_jc: float, sigma: float, beta: float) -> float:
    """Closed-form |<TFD_beta|GS>|^2 for a semicircle target spectrum."""
    r = 1.0 / j_over_jc
    x = sigma * beta
    if x < 1e-8:
        # small-beta limit of the Bessel series
        return (1.0 - r * r) * (1.0 + x * r - 0.25 * x * x)
    m_terms = 64
    while True:
        m = np.arange(1, m_terms + 1)
        terms = m * (r**m) * ive(m, x)
        total = float(np.sum(terms))
        if abs(terms[-1]) < 1e-16 * max(abs(total), 1e-300) or m_terms >= 1 << 16:
            break
        m_terms *= 2
    denom = float(ive(1, 2.0 * x))
    return (4.0 / x) * (1.0 / r**2 - 1.0) * total**2 / denom


def gue_analytics(
    j_over_jc: float,
    sigma: float = 1.0,
    beta: float = 0.0,
    beta_grid: np.ndarray | None = None,
    refine_tol: float = 1e-6,
) -> GueAnalytics:
    """All closed-form semicircle quantities at coupling ratio J/J_c."""
    if j_over_jc < 1.0 + 1e-6:
        raise BelowCritical(
            f"J/J_c = {j_over_jc} below the continuum validity threshold 1+1e-6"
        )
    x = j_over_jc
    jn = 2.0 * sigma * x  # JN = (J/Jc) * Jc*N = (J/Jc) * 2 sigma
    lambda_star = -sigma * (x + 1.0 / x)  # = -(JN/2)(1 + Jc^2/J^2)
    gap0 = jn * (1.0 - 1.0 / (x * x))
    m_value = stieltjes_semicircle(lambda_star, sigma)
    overlap = gue_overlap(j_over_jc, sigma, beta) if beta > 0 else 1.0 - 1.0 / x**2
    if beta_grid is None:
        beta_grid = np.geomspace(1e-4 / sigma, 2e2 / sigma, 61)
    beta_star, f_max, _, _ = scan_refine_max(
        lambda b: gue_overlap(j_over_jc, sigma, b), beta_grid, refine_tol
    )
    return GueAnalytics(m_value, lambda_star, gap0, overlap, beta_star, f_max)


def sample_gue(l: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """GUE draw with entry variance sigma^2/L: semicircle edges at +/- 2 sigma."""
    scale = sigma / np.sqrt(2.0 * l)
    g = rng.normal(scale=scale, size=(l, l)) + 1j * rng.normal(scale=scale, size=(l, l))
    return (g + g.conj().T) / np.sqrt(2.0)


def resolvent_fidelity_scan(
    h0_eigs: np.ndarray,
    j: float,
    n: int,
    beta_grid: np.ndarray,
    refine_tol: float = 1e-6,
) -> tuple[DiagonalSolution, FidelityCurve]:
    """K->infinity optimum on a concrete spectrum: root solve + TFD scan."""
    sol = solve_diagonal(h0_eigs, j, n, n_solutions=1)
    amps = resolvent_state(h0_eigs, sol.lambda_star)
    curve = fidelity_scan_spectrum(h0_eigs, amps, beta_grid, refine_tol)
    return sol, curve


def finite_k_experiment(
    cfg: RmtConfig,
    h0=None,
    realization_index: int = 0,
    beta_grid: np.ndarray | None = None,
) -> FiniteKResult:
    """One disorder realization of the K-operator coupled Hamiltonian, full ED.

    Operators are sampled in the H0 eigenbasis with entry variance 1/L, so
    only the spectrum of H0 enters.  ``h0`` may be an eigenvalue array, a
    dense Hermitian matrix, or None for a fresh GUE draw.
    """
    l = cfg.l
    if l > MAX_DENSE_L:
        raise TooLarge(f"L={l} exceeds dense doubled-space limit {MAX_DENSE_L}")
    rng = np.random.default_rng([cfg.seed, realization_index])
    if h0 is None:
        eigs = np.linalg.eigvalsh(sample_gue(l, cfg.sigma, rng))
    else:
        h0 = np.asarray(h0)
        eigs = np.sort(h0.astype(float)) if h0.ndim == 1 else np.linalg.eigvalsh(h0)
    if len(eigs) != l:
        raise InvalidGrid(f"h0 dimension {len(eigs)} does not match cfg.l={l}")

    jn_over_2k = cfg.j * cfg.n / (2.0 * cfg.k)
    a_sum = np.zeros((l, l), dtype=complex)  # sum of O^2
    cross = np.zeros((l * l, l * l), dtype=complex)  # sum of O (x) conj(O)
    for _ in range(cfg.k):
        o = sample_gue(l, 1.0, rng)
        a_sum += o @ o
        cross += np.kron(o, o.conj())
    eye = np.eye(l)
    h = np.kron(np.diag(eigs), eye) + np.kron(eye, np.diag(eigs))
    h = h.astype(complex)
    h += jn_over_2k * (np.kron(a_sum, eye) + np.kron(eye, a_sum.conj()) - 2.0 * cross)

    w, v = np.linalg.eigh(h)
    psi = v[:, 0].reshape(l, l)
    w_off = 1.0 - float(np.sum(np.abs(np.diagonal(psi)) ** 2))
    if beta_grid is None:
        beta_grid = np.geomspace(1e-3 / cfg.sigma, 1e3 / cfg.sigma, 61)
    curve = fidelity_scan_spectrum(eigs, np.diagonal(psi), beta_grid)
    return FiniteKResult(
        w_off=max(w_off, 0.0),
        f_max=curve.f_max,
        beta_star=curve.beta_star,
        gs_energy=float(w[0]),
    )
