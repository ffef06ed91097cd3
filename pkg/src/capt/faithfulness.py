"""Faithfulness of input sets, frame bounds and the U⊗U twirl."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .operator_algebra import (
    DEFAULT_TOL,
    SeedLike,
    as_square,
    dagger,
    flip_operator,
    numerical_rank,
    random_haar_unitary,
    rng_from,
    vec,
)
from .states import BipartiteState


@dataclass(frozen=True)
class FaithfulnessReport:
    span_dim: int
    singular_values: np.ndarray
    faithful: bool
    target_dim: int
    frame: Optional[Tuple[float, float]] = None

    def to_dict(self) -> dict:
        out = {
            "span_dim": int(self.span_dim),
            "faithful": bool(self.faithful),
            "singular_values": [float(s) for s in self.singular_values],
        }
        if self.frame is not None:
            out["frame"] = [float(self.frame[0]), float(self.frame[1])]
        return out


def local_operator_slices(rho: BipartiteState) -> np.ndarray:
    """Rows ``vec(⟨μ|ρ|ν⟩_B)`` for all ``μ, ν``: one ``d_A x d_A`` slice each.

    These are ``Tr_B((1 ⊗ |ν><μ|) ρ)``, i.e. the partial contractions against
    the matrix-unit basis of ``L(H_B)``. Any other orthonormal basis of
    ``L(H_B)`` gives a unitarily equivalent stack with the same singular
    values.
    """
    dA, dB = rho.dims
    R = np.asarray(rho.matrix).reshape(dA, dB, dA, dB)
    return R.transpose(1, 3, 0, 2).reshape(dB * dB, dA * dA)


def stacked_local_operators(states: Sequence[BipartiteState]) -> np.ndarray:
    states = list(states)
    if not states:
        raise ValueError("empty set of states")
    dA = states[0].dim_a
    if any(s.dim_a != dA for s in states):
        raise ValueError("all states must share the probe dimension d_A")
    return np.vstack([local_operator_slices(s) for s in states])


def local_span_dim(states: Sequence[BipartiteState], tol: float = DEFAULT_TOL,
                   frame: bool = False) -> FaithfulnessReport:
    """Dimension of the probe operator space reached by ``states``.

    The stack of partial contractions ``Tr_B((1 ⊗ G_j†) ρ_i)`` spans exactly
    ``span{A_{l,i}}``, the local OSD operators with nonzero coefficient, so its
    numerical rank is the faithfulness dimension. Uses the same relative
    tolerance policy as :func:`capt.schmidt.osr`.
    """
    M = stacked_local_operators(states)
    dA = int(round(np.sqrt(M.shape[1])))
    s = np.linalg.svd(M, compute_uv=False)
    span = numerical_rank(s, tol)
    bounds = None
    if frame:
        ops = [row.reshape(dA, dA) for row in M]
        bounds = frame_bounds(ops)
    return FaithfulnessReport(
        span_dim=span,
        singular_values=s,
        faithful=span == dA * dA,
        target_dim=dA * dA,
        frame=bounds,
    )


def is_faithful_set(states: Sequence[BipartiteState], tol: float = DEFAULT_TOL) -> bool:
    return local_span_dim(states, tol).faithful


def frame_operator(ops: Sequence[np.ndarray]) -> np.ndarray:
    """``S = Σ_k vec(P_k) vec(P_k)†``."""
    ops = [np.asarray(P, dtype=complex) for P in ops]
    if not ops:
        raise ValueError("empty operator family")
    shape = ops[0].shape
    if any(P.shape != shape for P in ops):
        raise ValueError("operators must share a common shape")
    V = np.array([vec(P) for P in ops])
    return V.T @ np.conj(V)


def frame_bounds(ops: Sequence[np.ndarray]) -> Tuple[float, float]:
    """Optimal ``a, b`` with ``a‖X‖² ≤ Σ|Tr(P_k† X)|² ≤ b‖X‖²``."""
    S = frame_operator(ops)
    w = np.linalg.eigvalsh((S + dagger(S)) / 2)
    a = float(w[0])
    b = float(w[-1])
    # clamp rounding noise of a rank-deficient family
    if abs(a) <= 1e-12 * max(b, 1.0):
        a = 0.0
    return a, b


def _twirl_dim(Y) -> int:
    n = Y.shape[0]
    d = int(round(np.sqrt(n)))
    if d * d != n:
        raise ValueError(f"operator of size {n} is not on C^d ⊗ C^d")
    if d < 2:
        raise ValueError("twirl is degenerate for d = 1")
    return d


def twirl_coefficients(Y) -> Tuple[complex, complex]:
    """``(α, β)`` with ``T(Y) = α 1 + β V``."""
    Y = as_square(Y, "Y")
    d = _twirl_dim(Y)
    V = flip_operator(d)
    trY = np.trace(Y)
    trYV = np.trace(Y @ V)
    denom = d**3 - d
    return (d * trY - trYV) / denom, (d * trYV - trY) / denom


def twirl(Y) -> np.ndarray:
    """Haar average of ``(U⊗U) Y (U⊗U)†`` in closed form."""
    Y = as_square(Y, "Y")
    d = _twirl_dim(Y)
    alpha, beta = twirl_coefficients(Y)
    return alpha * np.eye(d * d) + beta * flip_operator(d)


def twirl_monte_carlo(Y, samples: int = 10_000, seed: SeedLike = None) -> np.ndarray:
    """Empirical twirl over ``samples`` Haar unitaries (independent oracle)."""
    Y = as_square(Y, "Y")
    d = _twirl_dim(Y)
    rng = rng_from(seed)
    acc = np.zeros_like(Y)
    for _ in range(samples):
        U = random_haar_unitary(d, rng)
        W = np.kron(U, U)
        acc += W @ Y @ dagger(W)
    return acc / samples


def alpha_beta_state(A) -> Tuple[float, float]:
    """Twirl coefficients of ``A ⊗ A†``.

    ``α = (d|Tr A|² - ‖A‖₂²)/(d³-d)``, ``β = (d‖A‖₂² - |Tr A|²)/(d³-d)``.
    The orbit ``{U A U†}`` of a 2-design is a frame iff both are positive.
    """
    A = as_square(A, "A")
    d = A.shape[0]
    if d < 2:
        raise ValueError("need d >= 2")
    t2 = abs(np.trace(A)) ** 2
    n2 = float(np.real(np.vdot(A, A)))
    denom = d**3 - d
    return (d * t2 - n2) / denom, (d * n2 - t2) / denom


def frame_viable(A) -> bool:
    alpha, beta = alpha_beta_state(A)
    return alpha > 0 and beta > 0
