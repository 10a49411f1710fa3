import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermalzeno.operators import (
    commutator_superop,
    devectorize_row,
    eig_hermitian,
    is_hermitian,
    ket_bra,
    left_right_superop,
    matrix_exp,
    random_hermitian,
    vectorize_row,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
A3 = ket_bra(1, 2, 3) + ket_bra(2, 1, 3)


def rand_complex(rng, d):
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def test_is_hermitian_examples():
    assert is_hermitian(SX, 0.0)
    assert not is_hermitian(np.array([[0, 1j], [1j, 0]]), 1e-12)
    assert is_hermitian(A3)
    with pytest.raises(ValueError):
        is_hermitian(SX, -1.0)


def test_vectorize_examples():
    np.testing.assert_array_equal(vectorize_row(np.eye(2)), [1, 0, 0, 1])
    np.testing.assert_array_equal(vectorize_row(ket_bra(0, 0, 3)), [1, 0, 0, 0, 0, 0, 0, 0, 0])
    v = vectorize_row(ket_bra(1, 2, 3))
    assert np.flatnonzero(v).tolist() == [5]  # rho_23 slot, 6th entry


def test_vectorize_round_trip_random():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        d = int(rng.integers(1, 7))
        rho = rand_complex(rng, d)
        np.testing.assert_array_equal(devectorize_row(vectorize_row(rho)), rho)


def test_left_right_superop_examples():
    np.testing.assert_array_equal(left_right_superop(np.eye(3), np.eye(3)), np.eye(9))
    out = devectorize_row(left_right_superop(SX, np.eye(2)) @ vectorize_row(ket_bra(0, 0, 2)))
    np.testing.assert_array_equal(out, ket_bra(1, 0, 2))
    out = devectorize_row(left_right_superop(A3, A3) @ vectorize_row(ket_bra(2, 2, 3)))
    np.testing.assert_array_equal(out, ket_bra(1, 1, 3))
    with pytest.raises(ValueError):
        left_right_superop(np.eye(2), np.eye(3))


def test_left_right_superop_identity_random():
    rng = np.random.default_rng(1)
    for _ in range(200):
        d = int(rng.integers(1, 7))
        X, Y, rho = rand_complex(rng, d), rand_complex(rng, d), rand_complex(rng, d)
        lhs = vectorize_row(X @ rho @ Y)
        rhs = left_right_superop(X, Y) @ vectorize_row(rho)
        bound = 1e-12 * np.linalg.norm(X, 2) * np.linalg.norm(Y, 2) * np.linalg.norm(rho, 2) * d
        assert np.linalg.norm(lhs - rhs) <= bound


def _expm_eig(M, t):
    w, V = np.linalg.eig(M)
    return V @ np.diag(np.exp(t * w)) @ np.linalg.inv(V)


def test_matrix_exp_examples():
    np.testing.assert_array_equal(matrix_exp(np.zeros((3, 3))), np.eye(3))
    np.testing.assert_allclose(matrix_exp(np.diag([-1.0, -2.0]), 1.0), np.diag([np.exp(-1), np.exp(-2)]), rtol=1e-14)
    # -i[w sz / 2, .] has eigenvalues 0, 0, -iw, +iw on |1><1|, |2><2|, |1><2|, |2><1|
    w = 1.7
    U = matrix_exp(commutator_superop(0.5 * w * SZ), 2.3)
    np.testing.assert_allclose(np.abs(np.diag(U)), 1.0, atol=1e-14)
    np.testing.assert_allclose(np.diag(U), [1, np.exp(-1j * w * 2.3), np.exp(1j * w * 2.3), 1], atol=1e-13)


def test_matrix_exp_against_eigendecomposition():
    rng = np.random.default_rng(2)
    for _ in range(100):
        d = int(rng.integers(2, 8))
        M = rand_complex(rng, d)
        t = rng.uniform(0.1, 1.0)
        ref = _expm_eig(M, t)
        np.testing.assert_allclose(matrix_exp(M, t), ref, rtol=1e-10, atol=1e-10 * np.abs(ref).max())


def test_matrix_exp_overflow_signals():
    with pytest.raises(OverflowError):
        matrix_exp(np.diag([1e6, 0.0]), 1.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1), st.floats(0, 1))
def test_matrix_exp_semigroup(seed, s, t):
    rng = np.random.default_rng(seed)
    d = 4
    M = rand_complex(rng, d)
    M = M - (np.max(np.linalg.eigvals(M).real) + 0.5) * np.eye(d)  # stable
    np.testing.assert_allclose(matrix_exp(M, s + t), matrix_exp(M, s) @ matrix_exp(M, t), atol=1e-9)


def test_exp_of_anti_hermitian_is_unitary():
    rng = np.random.default_rng(3)
    for _ in range(50):
        d = int(rng.integers(2, 7))
        U = matrix_exp(1j * random_hermitian(d, rng), 1.0)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(d), atol=1e-10)


def test_eig_hermitian_examples():
    np.testing.assert_allclose(eig_hermitian(SX)[0], [-1, 1], atol=1e-15)
    np.testing.assert_allclose(eig_hermitian(np.diag([3.0, -1.0, 2.0]))[0], [-1, 2, 3])
    np.testing.assert_allclose(eig_hermitian(A3)[0], [-1, 0, 1], atol=1e-15)
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_eig_hermitian_residuals():
    rng = np.random.default_rng(4)
    for _ in range(50):
        d = int(rng.integers(1, 9))
        M = random_hermitian(d, rng)
        w, V = eig_hermitian(M)
        assert np.all(np.diff(w) >= 0)
        assert np.linalg.norm(M @ V - V * w) <= 1e-9 * np.linalg.norm(M, 2) * d
        np.testing.assert_allclose(V.conj().T @ V, np.eye(d), atol=1e-10)
