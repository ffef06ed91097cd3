"""Weyl operators, Fourier orbits and the two-setting state family.

Conjugation by the discrete Fourier transform sends ``X^k Z^l`` to
``ω^{-kl} X^{-l} Z^k``, so on index pairs it acts as ``(k, l) ↦ (-l, k)``
and partitions the Weyl basis into orbits of size 1, 2 or 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from ..faithfulness import is_faithful_set
from ..operator_algebra import dagger, numerical_rank, vec
from ..states import BipartiteState

PHASE_TOL = 1e-9


@lru_cache(maxsize=None)
def _shift_clock(d: int):
    X = np.zeros((d, d), dtype=complex)
    for p in range(d):
        X[(p + 1) % d, p] = 1.0
    omega = np.exp(2j * np.pi / d)
    Z = np.diag(omega ** np.arange(d))
    if not np.allclose(Z @ X, omega * X @ Z, atol=1e-12):
        raise RuntimeError("braiding relation ZX = ωXZ failed")
    X.setflags(write=False)
    Z.setflags(write=False)
    return X, Z


def shift_clock(d: int) -> Tuple[np.ndarray, np.ndarray]:
    """Shift ``X|p> = |p+1>`` and clock ``Z|q> = ω^q |q>``."""
    return _shift_clock(d)


def fourier_matrix(d: int) -> np.ndarray:
    """``F = d^{-1/2} Σ_kl ω^{kl} |k><l|``."""
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


@dataclass(frozen=True)
class WeylOperator:
    k: int
    l: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % self.d)
        object.__setattr__(self, "l", self.l % self.d)

    @property
    def index(self) -> Tuple[int, int]:
        return (self.k, self.l)

    @property
    def matrix(self) -> np.ndarray:
        X, Z = shift_clock(self.d)
        return np.linalg.matrix_power(X, self.k) @ np.linalg.matrix_power(Z, self.l)


def weyl_operator(k: int, l: int, d: int) -> WeylOperator:
    return WeylOperator(k, l, d)


def phase_equivalent(W1, W2, tol: float = PHASE_TOL) -> bool:
    """Equal up to a global phase: ``|Tr(W1† W2)| = d``."""
    W1 = np.asarray(W1)
    W2 = np.asarray(W2)
    return abs(abs(np.vdot(W1, W2)) - W1.shape[0]) <= tol


def _match_index(M: np.ndarray, d: int) -> Tuple[int, int]:
    """Index of the Weyl operator phase-equivalent to ``M``."""
    for k in range(d):
        for l in range(d):
            if phase_equivalent(weyl_operator(k, l, d).matrix, M):
                return (k, l)
    raise RuntimeError("matrix is not a Weyl operator up to phase")


@dataclass(frozen=True)
class Orbit:
    members: FrozenSet[Tuple[int, int]]

    @property
    def size(self) -> int:
        return len(self.members)

    def representative(self) -> Tuple[int, int]:
        return min(self.members)


def fourier_index_action(k: int, l: int, d: int) -> Tuple[int, int]:
    return ((-l) % d, k % d)


def weyl_orbits(d: int, verify: bool = True) -> List[Orbit]:
    """Partition of ``Z_d × Z_d`` under ``(k, l) ↦ (-l, k)``.

    With ``verify`` every step of the index action is cross-checked against
    explicit conjugation ``F W F†``, including the ``ω^{-kl}`` phase.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    F = fourier_matrix(d)
    omega = np.exp(2j * np.pi / d)
    seen = set()
    orbits = []
    for k in range(d):
        for l in range(d):
            if (k, l) in seen:
                continue
            members = []
            cur = (k, l)
            while cur not in members:
                members.append(cur)
                nxt = fourier_index_action(*cur, d)
                if verify:
                    W = weyl_operator(*cur, d).matrix
                    expected = omega ** (-cur[0] * cur[1]) * weyl_operator(*nxt, d).matrix
                    if not np.allclose(F @ W @ dagger(F), expected, atol=1e-10):
                        raise RuntimeError(f"Fourier phase bookkeeping failed at {cur}")
                cur = nxt
            seen.update(members)
            orbits.append(Orbit(frozenset(members)))
    return orbits


def representative_sets(d: int) -> Tuple[List[WeylOperator], List[WeylOperator]]:
    """One representative per orbit (``P1``) and a pair per orbit (``P2``).

    ``P1`` follows the explicit choice by parity: for ``d = 2m+1``,
    ``{X^k Z^l : 0≤k≤m, 1≤l≤m} ∪ {1}``; for ``d = 2m``,
    ``{X^k Z^l : 0≤k≤m-1, 1≤l≤m} ∪ {1, X^m Z^m}``.

    ``P2 = P1 ∪ F² P1 F†²`` with phase-equal elements merged. Pairing each
    representative with its ``F²`` partner (``W†`` up to phase) is what
    makes ``P2 ∪ F P2 F†`` cover all four positions of every orbit;
    ``P1 ∪ F P1 F†`` would miss the position reached by ``F³``.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    m = d // 2
    p1 = [weyl_operator(0, 0, d)]
    if d % 2:
        p1 += [weyl_operator(k, l, d) for k in range(m + 1) for l in range(1, m + 1)]
    else:
        p1 += [weyl_operator(k, l, d) for k in range(m) for l in range(1, m + 1)]
        p1.append(weyl_operator(m, m, d))
    F2 = np.linalg.matrix_power(fourier_matrix(d), 2)
    p2 = list(p1)
    for W in p1:
        M = F2 @ W.matrix @ dagger(F2)
        if not any(phase_equivalent(V.matrix, M) for V in p2):
            p2.append(weyl_operator(*_match_index(M, d), d))
    return p1, p2


def _span_rank(mats) -> int:
    s = np.linalg.svd(np.array([vec(M) for M in mats]), compute_uv=False)
    return numerical_rank(s)


def _fourier_images(ops, d, powers):
    F = fourier_matrix(d)
    out = []
    for n in powers:
        Fn = np.linalg.matrix_power(F, n)
        out += [Fn @ W.matrix @ dagger(Fn) for W in ops]
    return out


def span_check_p1(d: int) -> bool:
    """``∪_{i=0..3} F^i P1 F^{†i}`` spans ``L(C^d)``."""
    p1, _ = representative_sets(d)
    return _span_rank(_fourier_images(p1, d, range(4))) == d * d


def span_check_p2(d: int) -> bool:
    """``P2 ∪ F P2 F†`` spans ``L(C^d)``."""
    _, p2 = representative_sets(d)
    return _span_rank(_fourier_images(p2, d, range(2))) == d * d


def hermitian_parts(W: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """``H = (W + W†)/√2`` and ``J = (W - W†)/(i√2)``."""
    return (W + dagger(W)) / np.sqrt(2), (W - dagger(W)) / (1j * np.sqrt(2))


def sigma_perturbation(d: int) -> np.ndarray:
    """``K = Σ (H⊗H + J⊗J)`` over the non-identity elements of ``P1``.

    Vanishing ``H`` or ``J`` (Weyl operators Hermitian or anti-Hermitian up
    to sign, which occur for even ``d``) are skipped.
    """
    p1, _ = representative_sets(d)
    K = np.zeros((d * d, d * d), dtype=complex)
    for W in p1:
        if W.index == (0, 0):
            continue
        for P in hermitian_parts(W.matrix):
            if np.linalg.norm(P) > 1e-12:
                K += np.kron(P, P)
    return (K + dagger(K)) / 2


def sigma_family(d: int, epsilon: Optional[float] = None) -> BipartiteState:
    """State ``1/d ⊗ 1/d + ε K`` that is faithful together with its ``F ⊗ 1`` rotation.

    ``K`` is :func:`sigma_perturbation`. The default ``ε`` is half of the
    largest value keeping the state positive, ``1 / (d² |λ_min(K)|)``.
    ``K`` is traceless, so the result already has unit trace.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    K = sigma_perturbation(d)
    if epsilon is None:
        lam_min = np.linalg.eigvalsh(K).min()
        epsilon = 0.5 / (d * d * abs(lam_min))
    sigma = np.eye(d * d) / (d * d) + epsilon * K
    return BipartiteState(sigma, (d, d))


def sigma_pair_is_faithful(d: int, epsilon: Optional[float] = None) -> bool:
    sigma = sigma_family(d, epsilon)
    return is_faithful_set([sigma, sigma.local_unitary(fourier_matrix(d))])
