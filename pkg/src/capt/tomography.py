"""Closed-loop process tomography: prepare, simulate, reconstruct, score.

Three schemes share one reconstruction path. Every prepared bipartite input
``ρ_i`` contributes its ancilla slices ``X = <μ|ρ_i|ν>_B`` together with the
observed ``Λ[X] = <μ|(Λ⊗id)ρ_i|ν>_B``; the unknown superoperator is the
minimum-norm least-squares solution of the stacked system. Standard
tomography is the special case of a one-dimensional ancilla.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .channels import (
    LinearMap,
    QuantumChannel,
    apply_local_a,
    choi_from_superoperator,
)
from .faithfulness import local_operator_slices
from .operator_algebra import DEFAULT_TOL, SeedLike, dagger, numerical_rank, rng_from
from .states import BipartiteState

log = logging.getLogger(__name__)

SCHEMES = ("SPT", "AAPT", "CAPT")


@dataclass(frozen=True)
class ExperimentPlan:
    """Inputs of one tomography experiment.

    ``channels`` and ``unitaries`` are the local preprocessing operations
    (at most one of the two is non-empty). ``probes`` are the SPT input
    states. ``seed`` drives shot noise only.
    """

    scheme: str
    state: Optional[BipartiteState] = None
    channels: Tuple[LinearMap, ...] = ()
    unitaries: Tuple[np.ndarray, ...] = ()
    probes: Tuple[np.ndarray, ...] = ()
    seed: int = 0
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        scheme = self.scheme.upper()
        object.__setattr__(self, "scheme", scheme)
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "unitaries", tuple(np.asarray(U, dtype=complex) for U in self.unitaries))
        object.__setattr__(self, "probes", tuple(np.asarray(P, dtype=complex) for P in self.probes))
        if scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if scheme == "SPT":
            if not self.probes:
                raise ValueError("SPT plan needs probe states")
            d = self.probes[0].shape[0]
            if len(self.probes) != d * d:
                raise ValueError(f"SPT plan needs d² = {d * d} probe states, got {len(self.probes)}")
            if self.state is not None:
                raise ValueError("SPT plan carries no bipartite state")
        else:
            if self.state is None:
                raise ValueError(f"{scheme} plan needs a bipartite state")
            if self.channels and self.unitaries:
                raise ValueError("give local channels or local unitaries, not both")
            if scheme == "AAPT" and (self.channels or self.unitaries):
                raise ValueError("AAPT uses the state alone")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")

    @property
    def dim_in(self) -> int:
        if self.scheme == "SPT":
            return self.probes[0].shape[0]
        return self.state.dim_a

    @property
    def n_settings(self) -> int:
        if self.scheme == "SPT":
            return len(self.probes)
        return max(1, len(self.channels) + len(self.unitaries))


@dataclass(frozen=True)
class ReconstructionResult:
    estimated: LinearMap
    residual: float
    determined_dim: int
    target_dim: int
    choi_error: Optional[float] = None
    tol: float = field(default=DEFAULT_TOL, repr=False)

    @property
    def exact(self) -> bool:
        return self.residual < self.tol and self.determined_dim == self.target_dim


def prepared_inputs(plan: ExperimentPlan) -> List[BipartiteState]:
    """The bipartite states entering the unknown channel."""
    if plan.scheme == "SPT":
        return [BipartiteState(P, (P.shape[0], 1)) for P in plan.probes]
    rho = plan.state
    if plan.channels:
        return [apply_local_a(G, rho) for G in plan.channels]
    if plan.unitaries:
        return [rho.local_unitary(U) for U in plan.unitaries]
    return [rho]


def simulate_outputs(plan: ExperimentPlan, channel: LinearMap) -> List[BipartiteState]:
    """Exact outputs ``(Λ ⊗ id)[ρ_i]`` for every prepared input."""
    if channel.dim_in != plan.dim_in:
        raise ValueError(
            f"channel input dimension {channel.dim_in} does not match probe dimension {plan.dim_in}"
        )
    return [apply_local_a(channel, rho) for rho in prepared_inputs(plan)]


def _design(plan: ExperimentPlan):
    return np.vstack([local_operator_slices(rho) for rho in prepared_inputs(plan)])


def determined_projector(plan: ExperimentPlan) -> np.ndarray:
    """Projector ``M⁺ M`` onto the determined part of the probe operator space.

    In row-major vec coordinates, ``S_est = S_true @ P.T`` for exact data.
    """
    M = _design(plan)
    return np.linalg.pinv(M, rcond=plan.tol) @ M


def reconstruct(plan: ExperimentPlan, outputs: Sequence[BipartiteState],
                truth: Optional[LinearMap] = None, project: bool = False) -> ReconstructionResult:
    """Linear-inversion estimate of the channel from the observed outputs.

    Parameters
    ----------
    plan : ExperimentPlan
    outputs : sequence of BipartiteState
        One output per prepared input, in order.
    truth : LinearMap, optional
        When given, ``choi_error`` is the Frobenius distance of the Choi
        matrices.
    project : bool
        Replace the estimate by a nearby CPTP map (off by default: the
        projection would hide exactness).
    """
    inputs = prepared_inputs(plan)
    outputs = list(outputs)
    if len(outputs) != len(inputs):
        raise ValueError(f"expected {len(inputs)} outputs, got {len(outputs)}")
    dA = plan.dim_in
    d_out = outputs[0].dim_a
    for rho, out in zip(inputs, outputs):
        if out.dim_b != rho.dim_b or out.dim_a != d_out:
            raise ValueError(f"output dims {out.dims} inconsistent with input dims {rho.dims}")
    M = np.vstack([local_operator_slices(rho) for rho in inputs])
    Y = np.vstack([local_operator_slices(out) for out in outputs])
    # M @ T = Y with T = S^T
    T, _, rank, sv = np.linalg.lstsq(M, Y, rcond=plan.tol)
    residual = float(np.linalg.norm(M @ T - Y))
    S = T.T
    J = choi_from_superoperator(S, dA, d_out)
    estimate = LinearMap(dA, d_out, J)
    if project:
        estimate = project_cptp(estimate)
    err = None
    if truth is not None:
        err = float(np.linalg.norm(np.asarray(estimate.choi) - np.asarray(truth.choi)))
    return ReconstructionResult(
        estimated=estimate,
        residual=residual,
        determined_dim=numerical_rank(sv, plan.tol),
        target_dim=dA * dA,
        choi_error=err,
        tol=plan.tol,
    )


def run_experiment(plan: ExperimentPlan, channel: LinearMap, shots: Optional[int] = None,
                   project: bool = False) -> ReconstructionResult:
    """Simulate, optionally add shot noise (seeded by ``plan.seed``), reconstruct."""
    outputs = simulate_outputs(plan, channel)
    if shots is not None:
        outputs = add_shot_noise(outputs, shots, plan.seed)
    return reconstruct(plan, outputs, truth=channel, project=project)


# -- finite statistics -------------------------------------------------------

def _frame_potential(x: np.ndarray, d: int, weyl) -> float:
    phi = x[:d] + 1j * x[d:]
    phi = phi / np.linalg.norm(phi)
    return float(sum(abs(np.vdot(phi, W @ phi)) ** 4 for W in weyl))


@lru_cache(maxsize=None)
def _fiducial(d: int) -> np.ndarray:
    """Fiducial minimizing the Weyl frame potential; a SIC fiducial at the optimum.

    Closed forms are used for ``d = 2, 3``; otherwise BFGS from a fixed start.
    """
    if d == 2:
        theta = np.arccos(1 / np.sqrt(3))
        return np.array([np.cos(theta / 2), np.exp(1j * np.pi / 4) * np.sin(theta / 2)])
    if d == 3:
        return np.array([0.0, 1.0, -1.0], dtype=complex) / np.sqrt(2)
    from .constructions.weyl import weyl_operator

    weyl = [weyl_operator(k, l, d).matrix for k in range(d) for l in range(d) if (k, l) != (0, 0)]
    n = np.arange(d)
    x0 = np.concatenate([1.0 + 0.37 * n, 0.21 * n * n])
    res = minimize(_frame_potential, x0, args=(d, weyl), method="BFGS")
    v = res.x[:d] + 1j * res.x[d:]
    return v / np.linalg.norm(v)


def weyl_covariant_povm(d: int) -> np.ndarray:
    """Informationally complete POVM ``E_kl = W_kl |φ><φ| W_kl† / d``.

    ``W_kl = X^k Z^l`` and ``|φ>`` is a fixed generic fiducial; the ``d²``
    effects sum to the identity because the Weyl group is a unitary
    1-design. Returns an array of shape ``(d², d, d)``.
    """
    if d == 1:
        return np.ones((1, 1, 1), dtype=complex)
    from .constructions.weyl import weyl_operator

    phi = _fiducial(d)
    P = np.outer(phi, np.conj(phi))
    effects = []
    for k in range(d):
        for l in range(d):
            W = weyl_operator(k, l, d).matrix
            effects.append(W @ P @ dagger(W) / d)
    E = np.array(effects)
    rank = np.linalg.matrix_rank(E.reshape(d * d, -1))
    if rank != d * d:
        raise RuntimeError("fiducial does not give an informationally complete POVM")
    return E


def _joint_povm(dims):
    EA = weyl_covariant_povm(dims[0])
    EB = weyl_covariant_povm(dims[1])
    return np.array([np.kron(a, b) for a in EA for b in EB])


def add_shot_noise(outputs: Sequence[BipartiteState], shots: int, seed: SeedLike = 0) -> List[BipartiteState]:
    """Replace each output by a linear-inversion estimate from ``shots`` samples.

    The measurement is the product of single-system Weyl-covariant
    informationally complete POVMs. Estimates are Hermitian with unit trace
    but need not be positive.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = rng_from(seed)
    noisy = []
    for out in outputs:
        E = _joint_povm(out.dims)
        A = np.conj(E.reshape(E.shape[0], -1))
        rho = np.asarray(out.matrix)
        p = np.real(A @ rho.reshape(-1))
        p = np.clip(p, 0, None)
        p = p / p.sum()
        freq = rng.multinomial(shots, p) / shots
        est = np.linalg.solve(A, freq.astype(complex)).reshape(rho.shape)
        est = (est + dagger(est)) / 2
        noisy.append(BipartiteState(est, out.dims, check=False))
    return noisy


# -- CPTP projection ---------------------------------------------------------

def project_cptp(m: LinearMap, iterations: int = 500, tol: float = 1e-12) -> QuantumChannel:
    """Nearby CPTP map by Dykstra alternation of the PSD cone and the TP plane."""
    di, do = m.dim_in, m.dim_out
    J = np.asarray(m.choi)
    J = (J + dagger(J)) / 2

    def proj_psd(X):
        w, V = np.linalg.eigh((X + dagger(X)) / 2)
        return (V * np.clip(w, 0, None)) @ dagger(V)

    def proj_tp(X):
        T = X.reshape(do, di, do, di)
        tr_out = np.einsum("aiaj->ij", T)
        corr = np.kron(np.eye(do), (tr_out - np.eye(di)) / do)
        return X - corr

    X = J.copy()
    P = np.zeros_like(X)
    Q = np.zeros_like(X)
    for _ in range(iterations):
        Yk = proj_tp(X + P)
        P = X + P - Yk
        Xn = proj_psd(Yk + Q)
        Q = Yk + Q - Xn
        if np.linalg.norm(Xn - X) < tol:
            X = Xn
            break
        X = Xn
    X = proj_tp(X)
    X = (X + dagger(X)) / 2
    w = np.linalg.eigvalsh(X).min()
    if w < 0:
        # shrink toward the fully depolarizing map to absorb the residual negativity
        J0 = np.eye(do * di) / do
        lam0 = 1.0 / do
        t = -w / (lam0 - w)
        X = (1 - t) * X + t * J0
    return QuantumChannel(di, do, X)


# -- batch runner ------------------------------------------------------------

def _run_entry(entry: dict) -> dict:
    from . import serialization as ser
    from .channels import random_channel

    plan = ser.plan_from_dict(entry["plan"])
    if "channel" in entry:
        channel = ser.channel_from_dict(entry["channel"])
    else:
        rc = entry.get("random_channel", {})
        channel = random_channel(
            plan.dim_in, rc.get("seed", 0), rc.get("kraus_rank", 2)
        )
    result = run_experiment(plan, channel, shots=entry.get("shots"))
    out = ser.result_to_dict(result)
    if "name" in entry:
        out["name"] = entry["name"]
    return out


def run_batch(config, workers: int = 1) -> List[dict]:
    """Run every experiment of a config; results are in config order.

    ``config`` is a dict or a path to a JSON file with an ``"experiments"``
    list. Each entry holds a ``"plan"`` plus either a ``"channel"`` or
    ``"random_channel": {"seed", "kraus_rank"}`` and an optional ``"shots"``.
    Experiments are independent, so concurrent runs are bit-identical to
    sequential ones.
    """
    if not isinstance(config, dict):
        with open(config) as fh:
            config = json.load(fh)
    entries = config["experiments"]
    if workers <= 1:
        return [_run_entry(e) for e in entries]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_entry, entries))


def write_results(results: Sequence[dict], path) -> None:
    with open(path, "w") as fh:
        for r in results:
            fh.write(json.dumps(r) + "\n")
