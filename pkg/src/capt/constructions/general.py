"""Faithful sets from general local channels.

For a state of operator Schmidt rank ``k`` the probe-side OSD operators
``A_1..A_k`` are completed to a Hermitian basis; each channel then mixes the
constant-output channel with a basis shift by ``i*k`` positions, so that
``⌈d²/k⌉`` channels (the identity included) reach every basis direction.
"""

from __future__ import annotations

import logging
import math
from typing import List

import numpy as np

from ..channels import (
    QuantumChannel,
    apply_local_a,
    identity_channel,
    make_gamma,
    make_gamma_tilde,
    max_cp_epsilon,
)
from ..faithfulness import local_span_dim
from ..operator_algebra import DEFAULT_TOL, SeedLike, complete_hermitian_basis, rng_from
from ..schmidt import operator_schmidt_decompose
from ..states import BipartiteState, random_density_matrix
from .errors import ConstructionError

log = logging.getLogger(__name__)


def theorem1_channel_set(rho: BipartiteState, tol: float = DEFAULT_TOL,
                         epsilon_fraction: float = 0.9, seed: SeedLike = 0,
                         max_retries: int = 8) -> List[QuantumChannel]:
    """``⌈d_A²/OSR⌉`` channels whose local images of ``rho`` form a faithful set.

    Parameters
    ----------
    rho : BipartiteState
        Fixed probe-ancilla state.
    tol : float
        Relative rank tolerance for the OSR and the faithfulness check.
    epsilon_fraction : float
        Each channel uses ``ε = epsilon_fraction * max_cp_epsilon``.
    seed : int or Generator
        Source of the full-rank fixed outputs tried when the maximally mixed
        one leaves an accidental linear dependence.
    max_retries : int
        Number of perturbed fixed outputs to try before giving up.

    Returns
    -------
    list of QuantumChannel
        The identity channel first.

    Raises
    ------
    ConstructionError
        If no tried fixed output yields a faithful set.
    """
    dA = rho.dim_a
    osd = operator_schmidt_decompose(rho, tol)
    k = osd.osr
    n_channels = math.ceil(dA * dA / k)
    if n_channels == 1:
        return [identity_channel(dA)]
    basis = complete_hermitian_basis(osd.ops_a)
    rng = rng_from(seed)
    mixed = np.eye(dA) / dA

    last_span = None
    for attempt in range(max_retries + 1):
        if attempt == 0:
            tau = mixed
        else:
            t = min(0.9, 0.15 * attempt)
            tau = (1 - t) * mixed + t * random_density_matrix(dA, rng)
        channels = [identity_channel(dA)]
        for i in range(1, n_channels):
            gt = make_gamma_tilde(basis, i, k, fixed_output=tau)
            eps = epsilon_fraction * max_cp_epsilon(gt, fixed_output=tau)
            channels.append(make_gamma(gt, eps, fixed_output=tau))
        report = local_span_dim([apply_local_a(G, rho) for G in channels], tol)
        if report.faithful:
            return channels
        last_span = report.span_dim
        log.info("attempt %d: span %d < %d, perturbing fixed output", attempt, report.span_dim, dA * dA)
    raise ConstructionError(
        f"no faithful set after {max_retries + 1} fixed outputs "
        f"(osr={k}, channels={n_channels}, last span {last_span} of {dA * dA})"
    )
