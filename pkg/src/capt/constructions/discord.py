"""Qubit probes: discord test and the single extra rotation."""

from __future__ import annotations

import itertools

import numpy as np

from ..faithfulness import is_faithful_set
from ..operator_algebra import DEFAULT_TOL, PAULIS, SeedLike, random_haar_unitary, rng_from
from ..schmidt import operator_schmidt_decompose
from ..states import BipartiteState
from .errors import NotDiscordantError

COMMUTATOR_TOL = 1e-8


def bloch_vector(L) -> np.ndarray:
    """``(Tr σ_x L, Tr σ_y L, Tr σ_z L)`` for a Hermitian qubit operator."""
    L = np.asarray(L, dtype=complex)
    return np.array([np.real(np.trace(s @ L)) for s in PAULIS])


def rotation_unitary(axis, angle: float) -> np.ndarray:
    """SU(2) element ``exp(-i θ n·σ/2)``; conjugation rotates Bloch vectors by ``θ`` about ``n``."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    ns = sum(c * s for c, s in zip(n, PAULIS))
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * ns


def _check_qubit(rho: BipartiteState):
    if rho.dim_a != 2:
        raise ValueError(f"probe must be a qubit, got d_A = {rho.dim_a}")


def _noncommuting_pairs(rho, tol, comm_tol):
    osd = operator_schmidt_decompose(rho, tol)
    pairs = []
    for A1, A2 in itertools.combinations(osd.ops_a, 2):
        c = np.linalg.norm(A1 @ A2 - A2 @ A1)
        if c > comm_tol:
            pairs.append((c, A1, A2))
    return osd, pairs


def qubit_discord_test(rho: BipartiteState, tol: float = DEFAULT_TOL,
                       comm_tol: float = COMMUTATOR_TOL) -> bool:
    """True iff ``rho`` has discord on the qubit ``A``.

    Equivalent to two local OSD operators (nonzero coefficients) failing to
    commute, i.e. having non-collinear Bloch vectors.
    """
    _check_qubit(rho)
    osd, pairs = _noncommuting_pairs(rho, tol, comm_tol)
    return osd.osr >= 2 and bool(pairs)


def qubit_discord_unitary(rho: BipartiteState, tol: float = DEFAULT_TOL, seed: SeedLike = 0,
                          comm_tol: float = COMMUTATOR_TOL, max_tries: int = 64) -> np.ndarray:
    """One qubit unitary ``U`` with ``{ρ, (U⊗1)ρ(U⊗1)†}`` faithful.

    The deterministic first choice is a quarter turn about the axis halfway
    between ``â_1 × â_2`` and ``â_1``, for the most strongly noncommuting OSD
    pair. Rotations about the plane normal alone keep the four Bloch vectors
    coplanar, and in-plane axes leave their differences parallel, so the
    tilted axis is used. Seeded Haar rotations are the fallback.

    Raises
    ------
    NotDiscordantError
        When ``rho`` is classical on ``A``.
    """
    _check_qubit(rho)
    osd, pairs = _noncommuting_pairs(rho, tol, comm_tol)
    if osd.osr < 2 or not pairs:
        raise NotDiscordantError("state has zero discord on the qubit probe")
    _, A1, A2 = max(pairs, key=lambda t: t[0])
    a1 = bloch_vector(A1)
    a2 = bloch_vector(A2)
    u1 = a1 / np.linalg.norm(a1)
    normal = np.cross(a1, a2)
    normal = normal / np.linalg.norm(normal)
    candidates = [rotation_unitary(normal + u1, np.pi / 2)]
    rng = rng_from(seed)
    for _ in range(max_tries):
        U = candidates.pop(0) if candidates else random_haar_unitary(2, rng)
        if is_faithful_set([rho, rho.local_unitary(U)], tol):
            return U
    raise NotDiscordantError("no faithful rotation found; discord below numerical resolution")
