"""Schmidt and operator Schmidt decompositions.

The operator Schmidt coefficients of ``ρ_AB`` are the singular values of its
correlation matrix ``C_ij = Tr((F_i† ⊗ G_j†) ρ_AB)`` in any pair of local
orthonormal operator bases.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .operator_algebra import (
    DEFAULT_TOL,
    HermitianBasis,
    hermitian_basis,
    is_hermitian,
    numerical_rank,
    unvec,
)
from .states import BipartiteState

#: Coefficients within this factor of the rank cut are flagged.
NEAR_THRESHOLD_FACTOR = 1e3


class OSRThresholdWarning(UserWarning):
    """A coefficient lies close to the relative rank threshold."""


@dataclass(frozen=True)
class OperatorSchmidtDecomposition:
    """``ρ = Σ_i r_i A_i ⊗ B_i`` restricted to the nonzero coefficients.

    ``near_threshold`` lists singular values (kept or dropped) that sit within
    a factor :data:`NEAR_THRESHOLD_FACTOR` of the cut; it is empty for
    well-separated spectra.
    """

    coefficients: np.ndarray
    ops_a: Tuple[np.ndarray, ...]
    ops_b: Tuple[np.ndarray, ...]
    osr: int
    dims: Tuple[int, int]
    singular_values: np.ndarray
    near_threshold: Tuple[float, ...] = ()

    def reconstruct(self) -> np.ndarray:
        dA, dB = self.dims
        out = np.zeros((dA * dB, dA * dB), dtype=complex)
        for r, A, B in zip(self.coefficients, self.ops_a, self.ops_b):
            out += r * np.kron(A, B)
        return out


@dataclass(frozen=True)
class PureSchmidt:
    """Schmidt decomposition ``|ψ> = Σ_i √p_i |a_i>|b_i>``.

    ``vectors_a[:, i]`` and ``vectors_b[:, i]`` are the Schmidt vectors.
    """

    coefficients: np.ndarray
    vectors_a: np.ndarray
    vectors_b: np.ndarray
    rank: int

    @property
    def probabilities(self) -> np.ndarray:
        return self.coefficients**2


def _as_basis(basis, d) -> HermitianBasis:
    if basis is None:
        return hermitian_basis(d)
    if basis.dim != d:
        raise ValueError(f"basis dimension {basis.dim} does not match subsystem dimension {d}")
    return basis


def _realigned(rho: np.ndarray, dims) -> np.ndarray:
    """Matrix ``R[(a,b),(μ,ν)] = ρ[(a,μ),(b,ν)]`` so ``C = conj(F) R conj(G)^T``."""
    dA, dB = dims
    return rho.reshape(dA, dB, dA, dB).transpose(0, 2, 1, 3).reshape(dA * dA, dB * dB)


def correlation_matrix(rho: BipartiteState, F: Optional[HermitianBasis] = None,
                       G: Optional[HermitianBasis] = None) -> np.ndarray:
    """Correlation matrix ``C_ij = Tr((F_i† ⊗ G_j†) ρ)``.

    Defaults to :func:`hermitian_basis` on both sides. The entries are real
    when both bases are Hermitian, up to rounding.
    """
    dA, dB = rho.dims
    F = _as_basis(F, dA)
    G = _as_basis(G, dB)
    R = _realigned(np.asarray(rho.matrix), rho.dims)
    # Tr((F†⊗G†)ρ) = Σ conj(F_ab) conj(G_μν) ρ[(a,μ),(b,ν)]
    return np.conj(F.matrix()) @ R @ np.conj(G.matrix()).T


def _fix_sign(A: np.ndarray) -> int:
    """+1 or -1 so that the largest-magnitude real entry of ``±A`` is positive."""
    flat = np.real(A).reshape(-1)
    idx = int(np.argmax(np.abs(flat)))
    return -1 if flat[idx] < 0 else 1


def operator_schmidt_decompose(rho: BipartiteState, tol: float = DEFAULT_TOL,
                               F: Optional[HermitianBasis] = None,
                               G: Optional[HermitianBasis] = None) -> OperatorSchmidtDecomposition:
    """Operator Schmidt decomposition via SVD of the correlation matrix.

    Parameters
    ----------
    rho : BipartiteState
        State to decompose.
    tol : float
        Relative cut: coefficients ``<= tol * r_max`` count as zero.
    F, G : HermitianBasis, optional
        Local orthonormal bases used to build the correlation matrix.

    Returns
    -------
    OperatorSchmidtDecomposition
        Hermitian local operators when ``rho`` is Hermitian. The sign of each
        pair is fixed so the largest-magnitude real entry of ``A_i`` is
        positive.
    """
    dA, dB = rho.dims
    F = _as_basis(F, dA)
    G = _as_basis(G, dB)
    C = correlation_matrix(rho, F, G)
    hermitian = is_hermitian(rho.matrix, 1e-10)
    if hermitian:
        C = np.real(C)
    W, s, Yh = np.linalg.svd(C)
    k = numerical_rank(s, tol)

    near = ()
    if s.size and s[0] > 0:
        cut = tol * s[0]
        mask = (s > cut / NEAR_THRESHOLD_FACTOR) & (s < cut * NEAR_THRESHOLD_FACTOR)
        near = tuple(float(x) for x in s[mask])
        if near:
            warnings.warn(
                f"operator Schmidt coefficients {near} are within a factor "
                f"{NEAR_THRESHOLD_FACTOR:g} of the rank threshold {cut:.3e}",
                OSRThresholdWarning,
                stacklevel=2,
            )

    FM = F.matrix()
    GM = G.matrix()
    ops_a, ops_b = [], []
    for i in range(k):
        # ρ = Σ_ij C_ij F_i ⊗ G_j  and  C = W diag(s) Yh
        A = unvec(W[:, i] @ FM, (dA, dA))
        B = unvec(Yh[i, :] @ GM, (dB, dB))
        sign = _fix_sign(A)
        ops_a.append(sign * A)
        ops_b.append(sign * B)
    return OperatorSchmidtDecomposition(
        coefficients=s[:k].copy(),
        ops_a=tuple(ops_a),
        ops_b=tuple(ops_b),
        osr=k,
        dims=(dA, dB),
        singular_values=s.copy(),
        near_threshold=near,
    )


def osr(rho: BipartiteState, tol: float = DEFAULT_TOL) -> int:
    """Operator Schmidt rank; never exceeds ``min(d_A, d_B)**2``."""
    s = np.linalg.svd(correlation_matrix(rho), compute_uv=False)
    return numerical_rank(s, tol)


def schmidt_decompose_pure(psi, dims, tol: float = DEFAULT_TOL) -> PureSchmidt:
    """Schmidt decomposition of a normalised bipartite vector."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    dA, dB = dims
    if psi.size != dA * dB:
        raise ValueError(f"vector of length {psi.size} does not match dims {dA}x{dB}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-8:
        raise ValueError(f"state vector is not normalised (norm {norm:.12g})")
    U, s, Vh = np.linalg.svd(psi.reshape(dA, dB))
    k = numerical_rank(s, tol)
    return PureSchmidt(
        coefficients=s[:k].copy(),
        vectors_a=U[:, :k].copy(),
        vectors_b=Vh[:k, :].T.copy(),
        rank=k,
    )
