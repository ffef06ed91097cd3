import numpy as np
import pytest
from hypothesis import given, strategies as st

from capt.operator_algebra import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    closest_unitary,
    complete_hermitian_basis,
    flip_operator,
    hermitian_basis,
    hs_inner,
    is_unitary,
    numerical_rank,
    p_norm,
    partial_trace,
    random_haar_unitary,
    random_hermitian,
    tensor_product,
    unvec,
    vec,
)
from capt.states import maximally_entangled_state

from conftest import loop_partial_trace_b

seeds = st.integers(0, 2**31 - 1)


def _rand(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def test_tensor_identity():
    assert np.allclose(tensor_product(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_basis_permutation():
    ket00 = np.array([1, 0, 0, 0])
    assert np.allclose(tensor_product(PAULI_X, PAULI_X) @ ket00, [0, 0, 0, 1])


def test_tensor_norm_multiplicative(rng):
    for _ in range(10):
        A, B = _rand(rng, 3, 3), _rand(rng, 3, 3)
        assert np.isclose(np.linalg.norm(np.kron(A, B)), np.linalg.norm(A) * np.linalg.norm(B))


def test_tensor_associative(rng):
    A, B, C = _rand(rng, 2, 2), _rand(rng, 3, 3), _rand(rng, 2, 2)
    assert np.allclose(tensor_product(tensor_product(A, B), C), tensor_product(A, tensor_product(B, C)))


def test_tensor_rejects_non_matrix():
    with pytest.raises(ValueError):
        tensor_product(np.ones(3), np.eye(2))


def test_partial_trace_product(rng):
    A, B = _rand(rng, 3, 3), _rand(rng, 2, 2)
    M = np.kron(A, B)
    assert np.allclose(partial_trace(M, (3, 2), "B"), np.trace(B) * A, atol=1e-12)
    assert np.allclose(partial_trace(M, (3, 2), "A"), np.trace(A) * B, atol=1e-12)


def test_partial_trace_bell_is_mixed():
    phi = np.asarray(maximally_entangled_state(2).matrix)
    assert np.allclose(partial_trace(phi, (2, 2), "B"), np.eye(2) / 2)


@given(seeds)
def test_partial_trace_matches_loop_oracle(seed):
    rng = np.random.default_rng(seed)
    dA, dB = rng.integers(1, 5, size=2)
    M = _rand(rng, dA * dB, dA * dB)
    assert np.allclose(partial_trace(M, (dA, dB)), loop_partial_trace_b(M, dA, dB))


def test_partial_trace_chain(rng):
    G = _rand(rng, 6, 6)
    M = G @ G.conj().T
    assert np.isclose(np.trace(partial_trace(M, (2, 3), "A")), np.trace(M))


def test_partial_trace_bad_dims():
    with pytest.raises(ValueError):
        partial_trace(np.eye(6), (2, 2))
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), (2, 2), side="C")


def test_hs_inner_examples(rng):
    assert np.isclose(hs_inner(np.eye(2), np.eye(2)), 2)
    assert np.isclose(hs_inner(PAULI_X, PAULI_Y), 0)
    for _ in range(20):
        A, B = _rand(rng, 3, 3), _rand(rng, 3, 3)
        assert abs(hs_inner(A, B)) <= np.linalg.norm(A) * np.linalg.norm(B) + 1e-12


def test_hs_inner_conjugates_first_argument():
    A = np.array([[1j, 0], [0, 0]])
    assert np.isclose(hs_inner(A, A), 1)
    assert np.isclose(hs_inner(A, np.eye(2)), -1j)


def test_p_norm_identity():
    for d in (2, 3, 5):
        assert np.isclose(p_norm(np.eye(d), 1), d)
        assert np.isclose(p_norm(np.eye(d), 2), np.sqrt(d))
        assert np.isclose(p_norm(np.eye(d), "inf"), 1)
        assert np.isclose(p_norm(np.eye(d), np.inf), 1)
    assert np.isclose(p_norm(PAULI_X, 1), 2)


def test_p_norm_monotone(rng):
    for d in (2, 3, 4):
        for _ in range(100):
            L = _rand(rng, d, d)
            n1, n2, ninf = p_norm(L, 1), p_norm(L, 2), p_norm(L, "inf")
            assert ninf <= n2 + 1e-12 <= n1 + 2e-12


def test_p_norm_rejects_unknown():
    with pytest.raises(ValueError):
        p_norm(np.eye(2), 3)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_hermitian_basis_orthonormal(d):
    basis = hermitian_basis(d)
    assert len(basis) == d * d
    assert np.allclose(basis.gram(), np.eye(d * d), atol=1e-10)
    for F in basis:
        assert np.allclose(F, F.conj().T, atol=1e-12)
    assert np.allclose(basis[0], np.eye(d) / np.sqrt(d))


def test_hermitian_basis_qubit_is_pauli():
    basis = hermitian_basis(2)
    for F, P in zip(basis, (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)):
        assert np.allclose(F, P / np.sqrt(2))


@given(seeds, st.integers(2, 5))
def test_hermitian_basis_complete(seed, d):
    H = random_hermitian(d, seed)
    basis = hermitian_basis(d)
    c = basis.coefficients(H)
    assert np.allclose(c.imag, 0, atol=1e-12)
    assert np.allclose(basis.expand(c), H, atol=1e-12)


def test_complete_hermitian_basis_keeps_leading_elements():
    ops = [PAULI_Z / np.sqrt(2), (PAULI_I + PAULI_X) / 2]
    basis = complete_hermitian_basis(ops)
    assert np.allclose(basis.gram(), np.eye(4), atol=1e-10)
    assert np.allclose(basis[0], ops[0])
    assert np.allclose(basis[1], ops[1])


def test_complete_hermitian_basis_rejects_dependent():
    with pytest.raises(ValueError):
        complete_hermitian_basis([PAULI_Z / np.sqrt(2), PAULI_Z / np.sqrt(2)])


def test_haar_unitary_d1_is_phase():
    U = random_haar_unitary(1, 3)
    assert U.shape == (1, 1) and np.isclose(abs(U[0, 0]), 1)


@given(seeds)
def test_haar_unitary_is_unitary(seed):
    U = random_haar_unitary(5, seed)
    assert np.linalg.norm(U.conj().T @ U - np.eye(5)) < 1e-10


def test_haar_unitary_deterministic():
    assert np.array_equal(random_haar_unitary(4, 11), random_haar_unitary(4, 11))
    assert not np.allclose(random_haar_unitary(4, 11), random_haar_unitary(4, 12))


def test_haar_first_moment():
    # E|U_00|^2 = 1/d; E U_00 = 0
    rng = np.random.default_rng(0)
    samples = np.array([random_haar_unitary(3, rng)[0, 0] for _ in range(4000)])
    assert abs(np.mean(abs(samples) ** 2) - 1 / 3) < 0.02
    assert abs(np.mean(samples)) < 0.05


def test_vec_row_major():
    X = np.arange(6).reshape(2, 3)
    assert np.array_equal(vec(X), [0, 1, 2, 3, 4, 5])
    assert np.array_equal(unvec(vec(X), (2, 3)), X)


def test_flip_operator_swaps():
    V = flip_operator(3)
    a, b = np.eye(3)[0], np.eye(3)[2]
    assert np.allclose(V @ np.kron(a, b), np.kron(b, a))
    assert np.allclose(V @ V, np.eye(9))


def test_closest_unitary(rng):
    M = _rand(rng, 4, 4)
    U = closest_unitary(M)
    assert is_unitary(U)
    for _ in range(20):
        W = random_haar_unitary(4, rng)
        assert np.linalg.norm(M - U) <= np.linalg.norm(M - W) + 1e-12


def test_numerical_rank_relative():
    assert numerical_rank([1.0, 1e-8, 1e-12]) == 2
    assert numerical_rank([1e-3, 1e-11]) == 2
    assert numerical_rank([1e-3, 1e-13]) == 1
    assert numerical_rank([]) == 0
