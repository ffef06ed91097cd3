import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from capt.channels import apply_local_a, random_channel
from capt.constructions import sigma_family
from capt.operator_algebra import HermitianBasis, hermitian_basis, random_haar_unitary
from capt.schmidt import (
    OSRThresholdWarning,
    correlation_matrix,
    operator_schmidt_decompose,
    osr,
    schmidt_decompose_pure,
)
from capt.states import (
    BipartiteState,
    maximally_entangled_state,
    maximally_mixed,
    product_state,
    pure_state,
    random_bipartite_state,
    random_density_matrix,
    random_pure_vector,
)

seeds = st.integers(0, 2**31 - 1)


def trace_loop_correlation(rho, F, G):
    """Reference correlation matrix from explicit traces."""
    M = np.asarray(rho.matrix)
    return np.array([[np.trace(np.kron(Fi, Gj).conj().T @ M) for Gj in G] for Fi in F])


def test_correlation_matrix_maximally_mixed_qubits():
    rho = product_state(maximally_mixed(2), maximally_mixed(2))
    C = correlation_matrix(rho)
    expected = np.zeros((4, 4))
    expected[0, 0] = 0.5
    assert np.allclose(C, expected, atol=1e-12)


def test_correlation_matrix_bell_state():
    C = correlation_matrix(maximally_entangled_state(2))
    # <σ_i⊗σ_j>/2 for Φ+: (1, 1, -1, 1)/2 on the diagonal
    assert np.allclose(C, np.diag([0.5, 0.5, -0.5, 0.5]), atol=1e-12)


def test_correlation_matrix_product_is_rank_one(rng):
    rho = product_state(random_density_matrix(3, rng), random_density_matrix(2, rng))
    s = np.linalg.svd(correlation_matrix(rho), compute_uv=False)
    assert s[1] < 1e-12 * s[0]


@given(seeds)
def test_correlation_matrix_matches_trace_oracle(seed):
    rng = np.random.default_rng(seed)
    rho = random_bipartite_state((2, 3), rng)
    F, G = hermitian_basis(2), hermitian_basis(3)
    assert np.allclose(correlation_matrix(rho), trace_loop_correlation(rho, F, G), atol=1e-12)


def test_product_state_osd(rng):
    a = random_density_matrix(3, rng)
    b = random_density_matrix(2, rng)
    osd = operator_schmidt_decompose(product_state(a, b))
    assert osd.osr == 1
    assert np.isclose(osd.coefficients[0], np.linalg.norm(a) * np.linalg.norm(b))


def test_bell_state_osd():
    osd = operator_schmidt_decompose(maximally_entangled_state(2))
    assert osd.osr == 4
    assert np.allclose(osd.coefficients, 0.5)


@pytest.mark.parametrize("d,k", [(2, 1), (2, 2), (3, 2), (4, 3)])
def test_pure_state_osr_law(d, k, rng):
    psi = random_pure_vector((d, d), rng, k)
    assert osr(pure_state(psi, (d, d))) == k * k


@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]))
def test_osd_invariants(seed, dims):
    rho = random_bipartite_state(dims, seed)
    osd = operator_schmidt_decompose(rho)
    r = osd.coefficients
    assert np.all(np.diff(r) <= 1e-14) and np.all(r > 0)
    assert len(osd.ops_a) == len(osd.ops_b) == osd.osr
    GA = np.array([[np.vdot(A, B) for B in osd.ops_a] for A in osd.ops_a])
    GB = np.array([[np.vdot(A, B) for B in osd.ops_b] for A in osd.ops_b])
    assert np.allclose(GA, np.eye(osd.osr), atol=1e-10)
    assert np.allclose(GB, np.eye(osd.osr), atol=1e-10)
    assert np.linalg.norm(osd.reconstruct() - rho.matrix) < 1e-10
    assert abs(np.sum(r**2) - rho.purity()) < 1e-10
    for A, B in zip(osd.ops_a, osd.ops_b):
        assert np.allclose(A, A.conj().T, atol=1e-12)
        assert np.allclose(B, B.conj().T, atol=1e-12)


def test_sign_convention(rng):
    osd = operator_schmidt_decompose(random_bipartite_state((2, 2), rng))
    for A in osd.ops_a:
        flat = np.real(A).ravel()
        assert flat[np.argmax(np.abs(flat))] > 0


def test_basis_independence(rng):
    rho = random_bipartite_state((3, 2), rng)
    U = random_haar_unitary(3, rng)
    rotated = HermitianBasis(3, tuple(U @ F @ U.conj().T for F in hermitian_basis(3)))
    s1 = operator_schmidt_decompose(rho).singular_values
    s2 = operator_schmidt_decompose(rho, F=rotated).singular_values
    assert np.allclose(s1, s2, atol=1e-10)
    # and against the basis-free realignment
    R = np.asarray(rho.matrix).reshape(3, 2, 3, 2).transpose(0, 2, 1, 3).reshape(9, 4)
    assert np.allclose(s1, np.linalg.svd(R, compute_uv=False), atol=1e-12)


def test_local_unitary_invariance(rng):
    rho = random_bipartite_state((3, 3), rng, rank=2)
    U, V = random_haar_unitary(3, rng), random_haar_unitary(3, rng)
    assert osr(rho.local_unitary(U, V)) == osr(rho)


def test_osr_monotone_under_local_channels(rng):
    from capt.states import random_state_with_osr

    for seed in range(10):
        rho = random_state_with_osr((3, 3), 1 + seed % 9, seed)
        out = apply_local_a(random_channel(3, rng, kraus_rank=2), rho)
        assert osr(out) <= osr(rho)


def test_sigma_family_osr_bound():
    assert osr(sigma_family(3)) <= 5


def test_near_threshold_warning():
    # coefficient ratio 1e-8 sits within three decades of the 1e-9 cut
    rho = product_state(maximally_mixed(2), maximally_mixed(2)).matrix
    Z = np.diag([1, -1]).astype(complex)
    rho = rho + 1e-9 * np.kron(Z, Z)
    with pytest.warns(OSRThresholdWarning):
        osd = operator_schmidt_decompose(BipartiteState(rho, (2, 2)))
    assert osd.near_threshold
    assert osd.osr == 2


def test_no_warning_for_separated_spectrum(rng):
    with warnings.catch_warnings():
        warnings.simplefilter("error", OSRThresholdWarning)
        operator_schmidt_decompose(random_bipartite_state((2, 2), rng))


def test_schmidt_pure_examples():
    sd = schmidt_decompose_pure(np.array([1, 0, 0, 0]), (2, 2))
    assert sd.rank == 1 and np.allclose(sd.probabilities, [1])
    sd = schmidt_decompose_pure(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
    assert sd.rank == 2 and np.allclose(sd.probabilities, [0.5, 0.5])


def test_schmidt_pure_roundtrip(rng):
    psi = random_pure_vector((4, 4), rng)
    sd = schmidt_decompose_pure(psi, (4, 4))
    assert np.isclose(sd.probabilities.sum(), 1)
    rebuilt = sum(c * np.kron(sd.vectors_a[:, i], sd.vectors_b[:, i]) for i, c in enumerate(sd.coefficients))
    assert np.linalg.norm(rebuilt - psi) < 1e-10


def test_schmidt_pure_rejects_unnormalised():
    with pytest.raises(ValueError):
        schmidt_decompose_pure(np.ones(4), (2, 2))
