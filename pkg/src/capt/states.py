"""Bipartite density matrices and random state generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .operator_algebra import (
    SeedLike,
    as_square,
    dagger,
    partial_trace,
    random_haar_unitary,
    random_hermitian,
    rng_from,
)


class InvalidStateError(ValueError):
    """Raised when a matrix fails the density-matrix checks."""


@dataclass(frozen=True)
class BipartiteState:
    """Density matrix on ``C^{d_A} ⊗ C^{d_B}``.

    ``check=False`` skips the Hermitian/PSD/trace validation; this is used
    for empirical estimates (e.g. shot-noise reconstructions) that need not
    be positive.
    """

    matrix: np.ndarray
    dims: Tuple[int, int]
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        M = as_square(self.matrix, "state")
        dims = (int(self.dims[0]), int(self.dims[1]))
        object.__setattr__(self, "dims", dims)
        if M.shape[0] != dims[0] * dims[1]:
            raise ValueError(
                f"state of size {M.shape[0]} does not match dims {dims[0]}x{dims[1]}"
            )
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        if self.check:
            validate_density_matrix(M)

    @property
    def dim_a(self) -> int:
        return self.dims[0]

    @property
    def dim_b(self) -> int:
        return self.dims[1]

    def reduced(self, keep: str = "A") -> np.ndarray:
        """Marginal on subsystem ``keep``."""
        traced = "B" if keep.upper() == "A" else "A"
        return partial_trace(self.matrix, self.dims, traced)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def local_unitary(self, U, V=None) -> "BipartiteState":
        """``(U ⊗ V) ρ (U ⊗ V)†`` with ``V`` defaulting to identity."""
        W = np.kron(U, np.eye(self.dims[1]) if V is None else V)
        return BipartiteState(W @ self.matrix @ dagger(W), self.dims, self.check)


def validate_density_matrix(M, tol: float = 1e-10) -> None:
    M = np.asarray(M)
    herm_err = np.max(np.abs(M - dagger(M)), initial=0.0)
    if herm_err > tol:
        raise InvalidStateError(f"not Hermitian (max deviation {herm_err:.3e})")
    tr = np.trace(M)
    if abs(tr - 1) > tol:
        raise InvalidStateError(f"trace is {tr.real:.12g}, expected 1")
    lam_min = np.linalg.eigvalsh((M + dagger(M)) / 2).min()
    if lam_min < -tol:
        raise InvalidStateError(f"not PSD (smallest eigenvalue {lam_min:.3e})")


def product_state(rho_a, rho_b) -> BipartiteState:
    rho_a = as_square(rho_a)
    rho_b = as_square(rho_b)
    return BipartiteState(np.kron(rho_a, rho_b), (rho_a.shape[0], rho_b.shape[0]))


def pure_state(psi, dims) -> BipartiteState:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return BipartiteState(np.outer(psi, np.conj(psi)), dims)


def maximally_entangled_vector(d: int) -> np.ndarray:
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = 1.0
    return psi / np.sqrt(d)


def maximally_entangled_state(d: int) -> BipartiteState:
    return pure_state(maximally_entangled_vector(d), (d, d))


def maximally_mixed(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex) / d


def random_density_matrix(d: int, seed: SeedLike = None, rank: int | None = None) -> np.ndarray:
    """Ginibre-ensemble density matrix of the given rank (full by default)."""
    rng = rng_from(seed)
    r = d if rank is None else rank
    G = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    rho = G @ dagger(G)
    return rho / np.trace(rho)


def random_bipartite_state(dims, seed: SeedLike = None, rank: int | None = None) -> BipartiteState:
    dA, dB = dims
    return BipartiteState(random_density_matrix(dA * dB, seed, rank), (dA, dB))


def random_pure_vector(dims, seed: SeedLike = None, schmidt_rank: int | None = None) -> np.ndarray:
    """Random unit vector; with ``schmidt_rank`` the Schmidt rank is exact.

    The rank-``k`` vectors are ``(U ⊗ V) Σ_i c_i |i>|i>`` with Haar ``U, V``
    and random positive coefficients ``c_i``.
    """
    dA, dB = dims
    rng = rng_from(seed)
    if schmidt_rank is None:
        psi = rng.standard_normal(dA * dB) + 1j * rng.standard_normal(dA * dB)
        return psi / np.linalg.norm(psi)
    k = int(schmidt_rank)
    if not 1 <= k <= min(dA, dB):
        raise ValueError(f"Schmidt rank {k} impossible for dims {dims}")
    c = rng.uniform(0.2, 1.0, size=k)
    c /= np.linalg.norm(c)
    U = random_haar_unitary(dA, rng)
    V = random_haar_unitary(dB, rng)
    coeff = U[:, :k] @ np.diag(c) @ V[:, :k].T
    return coeff.reshape(-1)


def random_state_with_osr(dims, k: int, seed: SeedLike = None) -> BipartiteState:
    """Random mixed state whose operator Schmidt rank is exactly ``k``.

    Built as ``Σ_l c_l F_l ⊗ G_l`` with orthonormal Hermitian families; the
    first term is a random full-rank product ``τ_A ⊗ τ_B`` and the remaining
    ``k-1`` weights are small enough to keep the state positive definite.
    """
    dA, dB = dims
    if not 1 <= k <= min(dA, dB) ** 2:
        raise ValueError(f"OSR {k} impossible for dims {dims}")
    rng = rng_from(seed)
    # mixing with 1/d keeps λ_min(τ_A ⊗ τ_B) ≥ 1/(4 d_A d_B)
    tau_a = 0.5 * random_density_matrix(dA, rng) + 0.5 * maximally_mixed(dA)
    tau_b = 0.5 * random_density_matrix(dB, rng) + 0.5 * maximally_mixed(dB)
    base = np.kron(tau_a, tau_b)
    lam_min = np.linalg.eigvalsh(base).min()

    def family(tau, d):
        first = tau / np.linalg.norm(tau)
        ops = [first]
        # random Hermitian directions orthogonalised against the family
        while len(ops) < k:
            H = random_hermitian(d, rng)
            for _ in range(2):
                for E in ops:
                    H = H - np.real(np.trace(E @ H)) * E
            n = np.linalg.norm(H)
            if n > 1e-6:
                ops.append(H / n)
        return ops

    Fs = family(tau_a, dA)
    Gs = family(tau_b, dB)
    rho = base.copy()
    if k > 1:
        weights = rng.uniform(0.5, 1.0, size=k - 1)
        pert = sum(w * np.kron(F, G) for w, F, G in zip(weights, Fs[1:], Gs[1:]))
        # ‖pert‖_op ≤ Σ w ‖F‖_op ‖G‖_op ≤ Σ w
        scale = 0.5 * lam_min / weights.sum()
        rho = rho + scale * pert
    rho = (rho + dagger(rho)) / 2
    rho = rho / np.trace(rho)
    return BipartiteState(rho, (dA, dB))


def classical_quantum_qubit_state(seed: SeedLike = None, d_b: int = 2) -> BipartiteState:
    """Random zero-discord state ``p|a1><a1|⊗ρ1 + (1-p)|a2><a2|⊗ρ2``."""
    rng = rng_from(seed)
    U = random_haar_unitary(2, rng)
    p = rng.uniform(0.05, 0.95)
    rho1 = random_density_matrix(d_b, rng)
    rho2 = random_density_matrix(d_b, rng)
    P1 = np.outer(U[:, 0], np.conj(U[:, 0]))
    P2 = np.outer(U[:, 1], np.conj(U[:, 1]))
    return BipartiteState(p * np.kron(P1, rho1) + (1 - p) * np.kron(P2, rho2), (2, d_b))


def werner_state(p: float) -> BipartiteState:
    phi = maximally_entangled_state(2).matrix
    return BipartiteState((1 - p) * np.eye(4) / 4 + p * phi, (2, 2))
