"""Linear maps and quantum channels stored as Choi matrices.

The Choi matrix of ``Λ: L(C^n) -> L(C^m)`` is the unnormalised
``J(Λ) = Σ_ij Λ[|i><j|] ⊗ |i><j|``, an ``(m n) x (m n)`` matrix with the
output as the slow factor. ``Λ`` is completely positive iff ``J ⪰ 0`` and
trace preserving iff ``Tr_out J = 1_n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .operator_algebra import (
    SeedLike,
    HermitianBasis,
    as_square,
    dagger,
    is_unitary,
    partial_trace,
    random_haar_unitary,
    rng_from,
)
from .states import BipartiteState, validate_density_matrix

CP_SLACK = 1e-10
TP_SLACK = 1e-10


class CPViolationError(ValueError):
    """The Choi matrix of a map has a negative eigenvalue."""

    def __init__(self, message, eigenvalue):
        super().__init__(message)
        self.eigenvalue = eigenvalue


@dataclass(frozen=True)
class LinearMap:
    """A linear map ``L(C^dim_in) -> L(C^dim_out)`` given by its Choi matrix."""

    dim_in: int
    dim_out: int
    choi: np.ndarray
    check_tp: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        J = as_square(self.choi, "choi").copy()
        n = self.dim_in * self.dim_out
        if J.shape[0] != n:
            raise ValueError(
                f"Choi matrix of size {J.shape[0]} does not match "
                f"dim_out*dim_in = {self.dim_out}*{self.dim_in}"
            )
        J.setflags(write=False)
        object.__setattr__(self, "choi", J)
        if self.check_tp and not self.is_trace_preserving():
            raise ValueError(f"map is not trace preserving (error {self.tp_error():.3e})")

    def __call__(self, X) -> np.ndarray:
        return apply(self, X)

    @property
    def choi_tensor(self) -> np.ndarray:
        """``J[a, i, b, j]`` with ``Λ[X]_ab = Σ_ij J[a,i,b,j] X_ij``."""
        return np.asarray(self.choi).reshape(self.dim_out, self.dim_in, self.dim_out, self.dim_in)

    def superoperator(self) -> np.ndarray:
        """Matrix ``S`` with ``vec(Λ[X]) = S vec(X)`` (row-major vec)."""
        do, di = self.dim_out, self.dim_in
        return self.choi_tensor.transpose(0, 2, 1, 3).reshape(do * do, di * di)

    def tp_error(self) -> float:
        T = partial_trace(self.choi, (self.dim_out, self.dim_in), "A")
        return float(np.linalg.norm(T - np.eye(self.dim_in)))

    def is_trace_preserving(self, tol: float = TP_SLACK) -> bool:
        return self.tp_error() <= tol

    def min_choi_eigenvalue(self) -> float:
        J = np.asarray(self.choi)
        return float(np.linalg.eigvalsh((J + dagger(J)) / 2).min())

    def is_completely_positive(self, tol: float = CP_SLACK) -> bool:
        J = np.asarray(self.choi)
        if np.max(np.abs(J - dagger(J)), initial=0.0) > tol:
            return False
        return self.min_choi_eigenvalue() >= -tol

    def is_channel(self, tol: float = 1e-10) -> bool:
        return self.is_completely_positive(tol) and self.is_trace_preserving(tol)


class QuantumChannel(LinearMap):
    """A CPTP map; construction fails if either property is violated."""

    def __init__(self, dim_in: int, dim_out: int, choi):
        super().__init__(dim_in, dim_out, choi)
        lam = self.min_choi_eigenvalue()
        if not self.is_completely_positive():
            raise CPViolationError(
                f"Choi matrix is not PSD (smallest eigenvalue {lam:.3e})", lam
            )
        if not self.is_trace_preserving():
            raise ValueError(f"map is not trace preserving (error {self.tp_error():.3e})")


def choi_from_superoperator(S, dim_in: int, dim_out: int) -> np.ndarray:
    S = np.asarray(S, dtype=complex)
    T = S.reshape(dim_out, dim_out, dim_in, dim_in).transpose(0, 2, 1, 3)
    return T.reshape(dim_out * dim_in, dim_out * dim_in)


def linear_map_from_function(f, dim_in: int, dim_out: Optional[int] = None) -> LinearMap:
    """Assemble the Choi matrix of ``f`` from its action on ``|i><j|``."""
    dim_out = dim_in if dim_out is None else dim_out
    J = np.zeros((dim_out * dim_in, dim_out * dim_in), dtype=complex)
    for i in range(dim_in):
        for j in range(dim_in):
            E = np.zeros((dim_in, dim_in), dtype=complex)
            E[i, j] = 1.0
            J += np.kron(np.asarray(f(E), dtype=complex), E)
    return LinearMap(dim_in, dim_out, J)


def from_kraus(kraus: Sequence[np.ndarray]) -> QuantumChannel:
    kraus = [np.asarray(K, dtype=complex) for K in kraus]
    dim_out, dim_in = kraus[0].shape
    J = np.zeros((dim_out * dim_in, dim_out * dim_in), dtype=complex)
    for K in kraus:
        # J = Σ_K vec_c(K) vec_c(K)† where vec_c(K)[(a,i)] = K[a,i]
        v = K.reshape(-1)
        J += np.outer(v, np.conj(v))
    return QuantumChannel(dim_in, dim_out, J)


def as_channel(m: LinearMap) -> QuantumChannel:
    return QuantumChannel(m.dim_in, m.dim_out, m.choi)


def apply(channel: LinearMap, X) -> np.ndarray:
    """``Λ[X]`` computed from the Choi tensor."""
    X = as_square(X, "X")
    if X.shape[0] != channel.dim_in:
        raise ValueError(f"input of size {X.shape[0]} does not match dim_in {channel.dim_in}")
    return np.einsum("aibj,ij->ab", channel.choi_tensor, X)


def apply_local_a(channel: LinearMap, rho: BipartiteState, check: Optional[bool] = None) -> BipartiteState:
    """``(Λ ⊗ id)[ρ_AB]``."""
    dA, dB = rho.dims
    if channel.dim_in != dA:
        raise ValueError(f"channel dim_in {channel.dim_in} does not match d_A = {dA}")
    R = np.asarray(rho.matrix).reshape(dA, dB, dA, dB)
    out = np.einsum("aibj,imjn->ambn", channel.choi_tensor, R)
    do = channel.dim_out
    if check is None:
        check = rho.check and isinstance(channel, QuantumChannel)
    return BipartiteState(out.reshape(do * dB, do * dB), (do, dB), check)


def compose(second: LinearMap, first: LinearMap) -> LinearMap:
    """``second ∘ first``; a channel when both arguments are channels."""
    if first.dim_out != second.dim_in:
        raise ValueError("dimension mismatch in composition")
    S = second.superoperator() @ first.superoperator()
    J = choi_from_superoperator(S, first.dim_in, second.dim_out)
    if isinstance(first, QuantumChannel) and isinstance(second, QuantumChannel):
        return QuantumChannel(first.dim_in, second.dim_out, _herm(J))
    return LinearMap(first.dim_in, second.dim_out, J)


def _herm(J):
    return (J + dagger(J)) / 2


def identity_channel(d: int) -> QuantumChannel:
    return unitary_channel(np.eye(d))


def unitary_channel(U) -> QuantumChannel:
    U = as_square(U, "U")
    if not is_unitary(U, 1e-10):
        raise ValueError("matrix is not unitary")
    return from_kraus([U])


def constant_output_channel(rho0, dim_in: Optional[int] = None) -> QuantumChannel:
    """``X ↦ Tr(X) ρ0``."""
    rho0 = as_square(rho0, "rho0")
    validate_density_matrix(rho0)
    d_out = rho0.shape[0]
    dim_in = d_out if dim_in is None else dim_in
    return QuantumChannel(dim_in, d_out, np.kron(rho0, np.eye(dim_in)))


def depolarizing(d: int) -> QuantumChannel:
    """Totally depolarizing channel ``X ↦ Tr(X) 1/d``; its Choi is ``1/d``."""
    if d < 2:
        raise ValueError("depolarizing channel needs d >= 2")
    return constant_output_channel(np.eye(d) / d)


def transpose_map(d: int) -> LinearMap:
    """Transposition, positive and trace preserving but not CP."""
    return linear_map_from_function(lambda X: X.T, d)


def random_channel(d: int, seed: SeedLike = None, kraus_rank: int = 2,
                   dim_out: Optional[int] = None) -> QuantumChannel:
    """Random CPTP map from a Haar isometry ``V: C^d -> C^{d_out} ⊗ C^r``."""
    if kraus_rank < 1:
        raise ValueError("kraus_rank must be >= 1")
    dim_out = d if dim_out is None else dim_out
    if dim_out * kraus_rank < d:
        raise ValueError("dim_out * kraus_rank must be at least d")
    rng = rng_from(seed)
    U = random_haar_unitary(dim_out * kraus_rank, rng)
    V = U[:, :d]
    # rows of V indexed by (out, env), env fast
    K = V.reshape(dim_out, kraus_rank, d)
    return from_kraus([K[:, r, :] for r in range(kraus_rank)])


def make_gamma_tilde(basis: HermitianBasis, shift_index: int, osr: int,
                     fixed_output=None) -> LinearMap:
    """Trace-preserving map that rotates the basis by ``shift_index * osr``.

    ``X ↦ Σ_j Tr(A_j X) A_{γ(j)} + [Tr X - Σ_j Tr(A_j X) Tr A_{γ(j)}] τ``
    with ``γ(j) = (j + shift_index * osr) mod d²`` (0-based) and ``τ`` the
    fixed output state (default ``1/d``). The sum runs over the whole basis.
    """
    d = basis.dim
    n = d * d
    if shift_index < 0 or osr < 1:
        raise ValueError("need shift_index >= 0 and osr >= 1")
    tau = np.eye(d) / d if fixed_output is None else as_square(fixed_output)
    shift = (shift_index * osr) % n
    elements = basis.elements

    def act(X):
        out = np.zeros((d, d), dtype=complex)
        residual = np.trace(X)
        for j in range(n):
            c = np.trace(elements[j] @ X)
            target = elements[(j + shift) % n]
            out += c * target
            residual -= c * np.trace(target)
        return out + residual * tau

    m = linear_map_from_function(act, d)
    return LinearMap(d, d, m.choi, check_tp=True)


def _fixed_output_choi(tau, d):
    return np.kron(tau, np.eye(d))


def max_cp_epsilon(gamma_tilde: LinearMap, fixed_output=None) -> float:
    """Largest ``ε ∈ (0, 1]`` with ``(1-ε) Tr(·) τ + ε Γ̃`` completely positive.

    The Choi matrix is ``J0 + ε (J̃ - J0)`` with ``J0 = τ ⊗ 1 ≻ 0``; after
    whitening by ``J0^{-1/2}`` the condition is ``1 + ε μ_min ≥ 0`` on the
    smallest eigenvalue ``μ_min`` of the whitened difference.
    """
    d = gamma_tilde.dim_in
    tau = np.eye(d) / d if fixed_output is None else as_square(fixed_output)
    J0 = _fixed_output_choi(tau, d)
    w, Q = np.linalg.eigh(J0)
    if w.min() <= 0:
        raise ValueError("fixed output must be full rank")
    Wm = Q @ np.diag(w**-0.5) @ dagger(Q)
    D = Wm @ (np.asarray(gamma_tilde.choi) - J0) @ Wm
    mu_min = np.linalg.eigvalsh(_herm(D)).min()
    if mu_min >= 0:
        return 1.0
    return float(min(1.0, -1.0 / mu_min))


def make_gamma(gamma_tilde: LinearMap, epsilon: float, fixed_output=None) -> QuantumChannel:
    """Convex mixture ``Γ[X] = (1-ε) Tr(X) τ + ε Γ̃[X]``, certified CPTP."""
    d = gamma_tilde.dim_in
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    tau = np.eye(d) / d if fixed_output is None else as_square(fixed_output)
    J = (1 - epsilon) * _fixed_output_choi(tau, d) + epsilon * np.asarray(gamma_tilde.choi)
    J = _herm(J)
    lam = float(np.linalg.eigvalsh(J).min())
    if lam < -CP_SLACK:
        raise CPViolationError(
            f"epsilon = {epsilon:.6g} breaks complete positivity: "
            f"Choi eigenvalue {lam:.3e}",
            lam,
        )
    return QuantumChannel(d, d, J)
