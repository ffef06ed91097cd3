"""Faithful sets from local unitaries: generic states and pure states."""

from __future__ import annotations

import math
from typing import List

import numpy as np

from ..faithfulness import alpha_beta_state, local_span_dim
from ..operator_algebra import (
    DEFAULT_TOL,
    SeedLike,
    closest_unitary,
    dagger,
    random_haar_unitary,
    rng_from,
    vec,
)
from ..schmidt import operator_schmidt_decompose, schmidt_decompose_pure
from ..states import BipartiteState, pure_state
from .errors import ConstructionError, ForbiddenInputError

#: Relative component a candidate ``U A U†`` must add to count as new.
GREEDY_GAIN = 1e-6


def _to_special_unitary(U: np.ndarray) -> np.ndarray:
    d = U.shape[0]
    phase = np.linalg.det(U) ** (1.0 / d)
    return U / phase


def select_probe_operator(rho: BipartiteState, tol: float = DEFAULT_TOL,
                          mixed_tol: float = 1e-9) -> np.ndarray:
    """Operator ``A`` in the OSD span whose unitary orbit is a frame.

    Returns ``ρ_A`` when it is not maximally mixed. Otherwise ``ρ_A + t A_j``
    for the OSD operator ``A_j`` farthest from the identity line, halving
    ``t`` until both twirl coefficients of ``A ⊗ A†`` are positive.

    Raises
    ------
    ForbiddenInputError
        For ``ρ = 1/d ⊗ ρ_B``: every local unitary leaves it unchanged.
    """
    dA = rho.dim_a
    rho_a = rho.reduced("A")
    if np.linalg.norm(rho_a - np.eye(dA) / dA) > mixed_tol:
        return rho_a
    osd = operator_schmidt_decompose(rho, tol)
    if osd.osr == 1:
        raise ForbiddenInputError(
            "state is of the form 1/d ⊗ ρ_B; no set of local unitaries can make it faithful"
        )

    def distance_from_identity(A):
        return np.linalg.norm(A - np.trace(A) / dA * np.eye(dA))

    Aj = max(osd.ops_a, key=distance_from_identity)
    t = 1.0
    for _ in range(60):
        A = rho_a + t * Aj
        alpha, beta = alpha_beta_state(A)
        if alpha > 0 and beta > 0:
            return A
        t /= 2
    raise ConstructionError("could not find a frame-viable probe operator")


def theorem2_unitary_set(rho: BipartiteState, seed: SeedLike = 0, tol: float = DEFAULT_TOL,
                         max_candidates: int | None = None) -> List[np.ndarray]:
    """``d²`` special unitaries, the identity first, making ``rho`` faithful.

    Haar candidates are kept greedily when ``U A U†`` leaves the span of the
    operators kept so far, where ``A`` is :func:`select_probe_operator`.
    Faithfulness of the rotated states is certified before returning.
    """
    dA = rho.dim_a
    n = dA * dA
    A = select_probe_operator(rho, tol)
    alpha, beta = alpha_beta_state(A)
    if not (alpha > 0 and beta > 0):
        raise ConstructionError(f"probe operator not frame viable (α={alpha}, β={beta})")
    rng = rng_from(seed)
    max_candidates = 200 * n if max_candidates is None else max_candidates

    unitaries = [np.eye(dA, dtype=complex)]
    v = vec(A)
    Q = (v / np.linalg.norm(v))[:, None]
    tried = 0
    while len(unitaries) < n:
        if tried >= max_candidates:
            raise ConstructionError(f"greedy span stuck at {Q.shape[1]} of {n}")
        tried += 1
        U = random_haar_unitary(dA, rng)
        w = vec(U @ A @ dagger(U))
        r = w - Q @ (dagger(Q) @ w)
        r = r - Q @ (dagger(Q) @ r)
        if np.linalg.norm(r) > GREEDY_GAIN * np.linalg.norm(w):
            Q = np.hstack([Q, (r / np.linalg.norm(r))[:, None]])
            unitaries.append(_to_special_unitary(U))

    report = local_span_dim([rho.local_unitary(U) for U in unitaries], tol)
    if not report.faithful:
        raise ConstructionError(f"certification failed: span {report.span_dim} of {n}")
    return unitaries


def _block_shift(d: int, k: int, p: int) -> np.ndarray:
    """Cyclic shift ``|x> ↦ |x + p k mod d>``."""
    S = np.zeros((d, d), dtype=complex)
    for x in range(d):
        S[(x + p * k) % d, x] = 1.0
    return S


def _pair_unitary(d: int, k: int, p: int, q: int, phase: complex) -> np.ndarray:
    """Unitary with ``|n> ↦ (|n + pk> + phase |n + qk>)/√2`` for ``n < k``.

    Block 0 is first swapped with block ``p`` (when ``p > 0``), then a
    Hadamard-type rotation mixes blocks ``p`` and ``q``; everything else is
    left alone.
    """
    swap = np.eye(d, dtype=complex)
    if p != 0:
        for n in range(k):
            swap[[n, n + p * k]] = swap[[n + p * k, n]]
    H = np.eye(d, dtype=complex)
    h = 1 / np.sqrt(2)
    for n in range(k):
        a, b = n + p * k, n + q * k
        H[a, a], H[a, b] = h, h
        H[b, a], H[b, b] = phase * h, -phase * h
    return H @ swap


def canonical_pure_vector(d: int, k: int) -> np.ndarray:
    """``Σ_{n<k} |n>|n> / √k`` on ``C^d ⊗ C^d``."""
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(k) * (d + 1)] = 1.0
    return psi / np.sqrt(k)


def theorem3_pure_unitaries(d: int, k: int, verify: bool = True) -> List[np.ndarray]:
    """``⌈d/k⌉²`` unitaries for a pure state with Schmidt support on ``|0..k-1>``.

    The first ``⌈d/k⌉`` are the block shifts (identity first); then for each
    block pair ``p < q`` one real and one ``i``-phase pair unitary. When ``k``
    does not divide ``d`` the construction runs at ``d' = ⌈d/k⌉ k`` and each
    unitary is compressed to its top-left ``d x d`` block followed by the
    closest-unitary (polar) correction.
    """
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    m = math.ceil(d / k)
    dp = m * k
    unitaries = [_block_shift(dp, k, p) for p in range(m)]
    for p in range(m):
        for q in range(p + 1, m):
            unitaries.append(_pair_unitary(dp, k, p, q, 1.0))
            unitaries.append(_pair_unitary(dp, k, p, q, 1j))
    if dp != d:
        unitaries = [closest_unitary(U[:d, :d]) for U in unitaries]
    if verify:
        rho = pure_state(canonical_pure_vector(d, k), (d, d))
        report = local_span_dim([rho.local_unitary(U) for U in unitaries])
        if not report.faithful:
            raise ConstructionError(
                f"block unitaries not faithful at d={d}, k={k} (span {report.span_dim})"
            )
    return unitaries


def theorem3_state_unitaries(psi, dims, tol: float = DEFAULT_TOL) -> List[np.ndarray]:
    """Block unitaries adapted to the Schmidt basis of an arbitrary pure ``psi``.

    With ``W`` mapping the Schmidt vectors ``|a_n>`` to ``|n>``, the canonical
    set is conjugated to ``W† U_i W`` so ``U_0`` stays the identity.
    """
    dA, _ = dims
    sd = schmidt_decompose_pure(psi, dims, tol)
    # orthonormal completion of the Schmidt vectors; columns of Ua
    basis = np.hstack([sd.vectors_a, np.eye(dA, dtype=complex)])
    Ua, _ = np.linalg.qr(basis)
    Ua = Ua[:, :dA]
    # QR may flip phases of the leading columns; restore them
    phases = np.array([np.vdot(Ua[:, n], sd.vectors_a[:, n]) for n in range(sd.rank)])
    Ua[:, : sd.rank] = Ua[:, : sd.rank] * (phases / np.abs(phases))
    W = dagger(Ua)
    return [dagger(W) @ U @ W for U in theorem3_pure_unitaries(dA, sd.rank, verify=False)]
