"""Dense complex-matrix primitives and operator bases.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Bipartite index convention: subsystem A is the slow (left) Kronecker
factor, so the joint index of ``|i_A, i_B>`` is ``i_A * d_B + i_B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

#: Relative tolerance used for rank decisions throughout the package.
DEFAULT_TOL = 1e-9

SeedLike = Union[int, np.random.Generator, None]

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Coerce ``M`` to a finite 2-D complex array."""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def as_square(M, name: str = "matrix") -> np.ndarray:
    arr = as_matrix(M, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    return arr


def rng_from(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def dagger(M: np.ndarray) -> np.ndarray:
    return np.conj(M).T


def tensor_product(A, B) -> np.ndarray:
    """Kronecker product ``A ⊗ B`` with A as the slow index."""
    return np.kron(as_matrix(A, "A"), as_matrix(B, "B"))


def partial_trace(M, dims: Tuple[int, int], side: str = "B") -> np.ndarray:
    """Trace out subsystem ``side`` ('A' or 'B') of a bipartite operator.

    Parameters
    ----------
    M : array_like
        Square matrix of size ``d_A * d_B``.
    dims : tuple of int
        ``(d_A, d_B)``.
    side : {'A', 'B'}
        The subsystem that is traced out.

    Returns
    -------
    numpy.ndarray
        The reduced operator on the remaining subsystem.
    """
    M = as_square(M)
    dA, dB = (int(x) for x in dims)
    if M.shape[0] != dA * dB:
        raise ValueError(
            f"matrix of size {M.shape[0]} does not match dims {dA}x{dB}"
        )
    T = M.reshape(dA, dB, dA, dB)
    side = side.upper()
    if side == "B":
        return np.einsum("ibjb->ij", T)
    if side == "A":
        return np.einsum("aiaj->ij", T)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def hs_inner(A, B) -> complex:
    """Hilbert-Schmidt inner product ``Tr(A† B)``."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return complex(np.vdot(A, B))


def p_norm(L, p: Union[int, float, str] = 2) -> float:
    """Schatten p-norm computed from the singular values of ``L``.

    ``p`` may be 1 (trace norm), 2 (Frobenius) or ``inf`` / ``'inf'``
    (operator norm).
    """
    s = np.linalg.svd(as_matrix(L, "L"), compute_uv=False)
    if p in (np.inf, "inf", float("inf")):
        return float(s.max(initial=0.0))
    if p == 1:
        return float(s.sum())
    if p == 2:
        return float(np.sqrt(np.sum(s**2)))
    raise ValueError(f"unsupported p = {p!r}; use 1, 2 or inf")


def numerical_rank(singular_values, tol: float = DEFAULT_TOL) -> int:
    """Count singular values above ``tol`` times the largest one."""
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0 or s.max() <= 0:
        return 0
    return int(np.sum(s > tol * s.max()))


def vec(X) -> np.ndarray:
    """Row-major vectorisation, ``vec(X)[i*d + j] = X[i, j]``."""
    return np.asarray(X, dtype=complex).reshape(-1)


def unvec(v, shape: Tuple[int, int]) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(shape)


def is_hermitian(M, tol: float = 1e-10) -> bool:
    M = np.asarray(M)
    return bool(np.max(np.abs(M - dagger(M)), initial=0.0) <= tol)


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = as_square(U, "U")
    return bool(np.linalg.norm(dagger(U) @ U - np.eye(U.shape[0])) <= tol)


def flip_operator(d: int) -> np.ndarray:
    """Swap ``V|a>|b> = |b>|a>`` on ``C^d ⊗ C^d``."""
    V = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            V[b * d + a, a * d + b] = 1.0
    return V


@dataclass(frozen=True)
class HermitianBasis:
    """Hilbert-Schmidt orthonormal basis of Hermitian ``d x d`` operators."""

    dim: int
    elements: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.elements) != self.dim**2:
            raise ValueError(
                f"basis for d={self.dim} needs {self.dim**2} elements, "
                f"got {len(self.elements)}"
            )

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def gram(self) -> np.ndarray:
        V = self.matrix()
        return np.conj(V) @ V.T

    def matrix(self) -> np.ndarray:
        """Rows are the vectorised basis elements."""
        return np.array([vec(E) for E in self.elements])

    def coefficients(self, X) -> np.ndarray:
        """Expansion coefficients ``Tr(E_i† X)``."""
        return np.conj(self.matrix()) @ vec(X)

    def expand(self, coeffs) -> np.ndarray:
        v = np.asarray(coeffs) @ self.matrix()
        return unvec(v, (self.dim, self.dim))


def gell_mann_matrices(d: int) -> list:
    """Generalized Gell-Mann matrices (unnormalised, ``Tr(G^2) = 2``)."""
    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            S = np.zeros((d, d), dtype=complex)
            S[j, k] = S[k, j] = 1.0
            mats.append(S)
            A = np.zeros((d, d), dtype=complex)
            A[j, k] = -1j
            A[k, j] = 1j
            mats.append(A)
    for l in range(1, d):
        D = np.zeros((d, d), dtype=complex)
        D[np.arange(l), np.arange(l)] = 1.0
        D[l, l] = -l
        D *= np.sqrt(2.0 / (l * (l + 1)))
        mats.append(D)
    return mats


def hermitian_basis(d: int) -> HermitianBasis:
    """``1/sqrt(d)`` followed by the normalised generalized Gell-Mann matrices.

    For ``d = 2`` the order is ``1, σ_x, σ_y, σ_z`` (all divided by √2).
    """
    if d < 1:
        raise ValueError("hermitian_basis requires d >= 1")
    elements = [np.eye(d, dtype=complex) / np.sqrt(d)]
    elements += [G / np.sqrt(2.0) for G in gell_mann_matrices(d)]
    return HermitianBasis(d, tuple(elements))


def complete_hermitian_basis(ops: Sequence[np.ndarray], tol: float = 1e-8) -> HermitianBasis:
    """Extend orthonormal Hermitian ``ops`` to a full Hermitian basis.

    The given operators keep their positions at the front; the remaining
    elements come from Gram-Schmidt against :func:`hermitian_basis`.
    Because every vector involved is Hermitian and the Hilbert-Schmidt inner
    product between Hermitian operators is real, the output stays Hermitian.
    """
    ops = [as_square(A, "op") for A in ops]
    if not ops:
        raise ValueError("need at least one operator")
    d = ops[0].shape[0]
    # real coordinates in the Gell-Mann basis keep everything Hermitian
    ref = hermitian_basis(d)
    R = ref.matrix()
    coords = [np.real(np.conj(R) @ vec(A)) for A in ops]
    gram = np.array([[a @ b for b in coords] for a in coords])
    if not np.allclose(gram, np.eye(len(ops)), atol=tol):
        raise ValueError("operators must be Hermitian and Hilbert-Schmidt orthonormal")
    Q = list(coords)
    for i in range(d * d):
        if len(Q) == d * d:
            break
        v = np.zeros(d * d)
        v[i] = 1.0
        for q in Q:
            v = v - (q @ v) * q
        for q in Q:
            v = v - (q @ v) * q
        n = np.linalg.norm(v)
        if n > tol:
            Q.append(v / n)
    elements = [A for A in ops] + [unvec(q @ R, (d, d)) for q in Q[len(ops):]]
    return HermitianBasis(d, tuple(elements))


def random_haar_unitary(d: int, seed: SeedLike = None) -> np.ndarray:
    """Haar-distributed unitary from QR of a complex Ginibre matrix.

    The diagonal of ``R`` is made real positive by absorbing its phases into
    ``Q``; without that correction the distribution is not Haar.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = rng_from(seed)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R)
    phases = diag / np.abs(diag)
    return Q * phases[np.newaxis, :]


def random_hermitian(d: int, seed: SeedLike = None) -> np.ndarray:
    rng = rng_from(seed)
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (G + dagger(G)) / 2


def closest_unitary(M) -> np.ndarray:
    """Unitary factor of the polar decomposition of ``M``."""
    W, _, Vh = np.linalg.svd(as_square(M))
    return W @ Vh
