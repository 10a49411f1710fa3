"""Dense operator algebra shared by every other module.

Vectorization is row stacking throughout: ``rho[k, l]`` lands at index
``k * d + l``, so ``vec(X @ rho @ Y) == kron(X, Y.T) @ vec(rho)``.
Units are hbar = k_B = 1.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

HERMITIAN_TOL = 1e-10
ORTHONORMAL_TOL = 1e-10


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a square complex array, rejecting non-finite entries."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def dagger(M: np.ndarray) -> np.ndarray:
    return np.conj(M).T


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    M = as_matrix(M)
    return bool(np.max(np.abs(M - dagger(M)), initial=0.0) <= tol)


def vectorize_row(rho) -> np.ndarray:
    return as_matrix(rho).reshape(-1).copy()


def devectorize_row(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape(d, d).copy()


def left_right_superop(X, Y) -> np.ndarray:
    """Superoperator of ``rho -> X @ rho @ Y`` acting on row-stacked vectors."""
    X = as_matrix(X)
    Y = as_matrix(Y)
    if X.shape != Y.shape:
        raise ValueError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    return np.kron(X, Y.T)


def commutator_superop(H) -> np.ndarray:
    """Superoperator of ``rho -> -i [H, rho]``."""
    H = as_matrix(H)
    eye = np.eye(H.shape[0])
    return -1j * (np.kron(H, eye) - np.kron(eye, H.T))


def anticommutator_superop(X) -> np.ndarray:
    """Superoperator of ``rho -> X rho + rho X``."""
    X = as_matrix(X)
    eye = np.eye(X.shape[0])
    return np.kron(X, eye) + np.kron(eye, X.T)


def apply_superop(S: np.ndarray, rho) -> np.ndarray:
    return devectorize_row(S @ vectorize_row(rho))


def matrix_exp(M, t: float = 1.0) -> np.ndarray:
    """Return ``exp(t M)``.

    Uses scaling and squaring with Pade approximants. Raises
    ``OverflowError`` rather than returning infinities.
    """
    M = as_matrix(M)
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    with np.errstate(over="raise", invalid="raise"):
        try:
            out = scipy.linalg.expm(t * M)
        except FloatingPointError as exc:
            raise OverflowError(f"exp(tM) overflows for ||tM|| = {abs(t) * np.linalg.norm(M):.3e}") from exc
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"exp(tM) overflows for ||tM|| = {abs(t) * np.linalg.norm(M):.3e}")
    return out


def eig_hermitian(M, tol: float = HERMITIAN_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix."""
    M = as_matrix(M)
    if not is_hermitian(M, tol):
        raise ValueError("eig_hermitian requires a Hermitian matrix")
    w, V = np.linalg.eigh(0.5 * (M + dagger(M)))
    return w, V


def operator_norm(M) -> float:
    """Largest singular value."""
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, ord=2))


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of ``rho - sigma`` (both Hermitian)."""
    diff = as_matrix(rho) - as_matrix(sigma)
    w = np.linalg.eigvalsh(0.5 * (diff + dagger(diff)))
    return float(0.5 * np.sum(np.abs(w)))


def ket_bra(i: int, j: int, d: int) -> np.ndarray:
    """``|i><j|`` in ``d`` dimensions, 0-based."""
    out = np.zeros((d, d), dtype=complex)
    out[i, j] = 1.0
    return out


def random_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * 0.5 * (X + dagger(X))


def random_density_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = X @ dagger(X)
    return rho / np.trace(rho).real
