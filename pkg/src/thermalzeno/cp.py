"""Complete-positivity tests and dissipator eigenanalysis.

The canonical (GKS) decomposition expands a generator in an orthonormal
operator basis ``F_0 = I / sqrt(d)``, ``F_1 .. F_{d^2-1}`` (generalized
Gell-Mann matrices, Hilbert-Schmidt normalized)::

    L(rho) = -i[H, rho] + sum_{j,k>=1} c_jk (F_j rho F_k^+ - 1/2 {F_k^+ F_j, rho})

and the generator is of GKSL form iff the Kossakowski matrix ``c`` is PSD.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .generators import Liouvillian, Variant, high_temperature_dissipator
from .operators import (
    anticommutator_superop,
    as_matrix,
    commutator_superop,
    dagger,
    is_hermitian,
    left_right_superop,
    matrix_exp,
    operator_norm,
    vectorize_row,
)

CP_TOL = 1e-10
GENERATOR_TOL = 1e-10


def gell_mann_basis(d: int) -> list[np.ndarray]:
    """Identity over sqrt(d) followed by the d^2 - 1 generalized Gell-Mann matrices, HS-orthonormal."""
    basis = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            S = np.zeros((d, d), dtype=complex)
            S[j, k] = S[k, j] = 1 / np.sqrt(2)
            basis.append(S)
            Y = np.zeros((d, d), dtype=complex)
            Y[j, k] = -1j / np.sqrt(2)
            Y[k, j] = 1j / np.sqrt(2)
            basis.append(Y)
    for l in range(1, d):
        D = np.zeros((d, d), dtype=complex)
        D[np.arange(l), np.arange(l)] = 1.0
        D[l, l] = -l
        basis.append(D / np.sqrt(l * (l + 1)))
    return basis


@dataclass(frozen=True)
class KossakowskiReport:
    hamiltonian_part: np.ndarray
    kossakowski: np.ndarray
    basis: list
    eigenvalues: np.ndarray
    min_eigenvalue: float
    is_cp_generator: bool
    witness: Optional[np.ndarray] = None


def _basis_columns(basis: Sequence[np.ndarray]) -> np.ndarray:
    # column n is (I (x) F_n) sum_i |i>|i>, entry (i, k) = F_n[k, i]
    B = np.asarray(basis)
    n = B.shape[0]
    return B.transpose(0, 2, 1).reshape(n, -1).T


def _coefficients(L: np.ndarray, basis: Sequence[np.ndarray]) -> np.ndarray:
    # c_jk is the inner product of L with F_j (x) conj(F_k); equivalently the
    # Choi matrix of L expressed in the basis {(I (x) F_j)|Omega>}.
    W = _basis_columns(basis)
    return dagger(W) @ choi_matrix(L) @ W


def check_generator(L: Liouvillian, tol: float = GENERATOR_TOL) -> None:
    scale = max(1.0, operator_norm(L.matrix))
    if L.trace_defect() > tol * scale:
        raise ValueError(f"generator is not trace preserving (defect {L.trace_defect():.3e})")
    if L.hermiticity_defect() > tol * scale:
        raise ValueError(f"generator is not Hermiticity preserving (defect {L.hermiticity_defect():.3e})")


def canonical_decompose(L: Liouvillian, basis_tol: float = GENERATOR_TOL, cp_tol: float = CP_TOL) -> KossakowskiReport:
    """Extract the effective Hamiltonian and Kossakowski matrix of ``L``."""
    check_generator(L, basis_tol)
    d = L.dim
    basis = gell_mann_basis(d)
    c = _coefficients(L.matrix, basis)
    c = 0.5 * (c + dagger(c))
    F = c[0, 0] / (2 * d) * np.eye(d) + sum(c[j, 0] * basis[j] for j in range(1, d * d)) / np.sqrt(d)
    H = 0.5j * (F - dagger(F))
    H = 0.5 * (H + dagger(H))
    K = c[1:, 1:]
    w, V = np.linalg.eigh(K)
    norm = operator_norm(K)
    min_eig = float(w[0]) if w.size else 0.0
    # round-off in the extraction is ~eps * ||L||; below that K is numerically zero
    noise = 100 * np.finfo(float).eps * max(1.0, operator_norm(L.matrix))
    is_cp = min_eig >= -max(cp_tol * norm, noise)
    witness = None
    if not is_cp:
        v = V[:, 0]
        witness = sum(v[j] * basis[j + 1] for j in range(d * d - 1))
    return KossakowskiReport(H, K, basis, w, min_eig, bool(is_cp), witness)


def reconstruct_generator(hamiltonian, kossakowski, basis: Sequence[np.ndarray]) -> np.ndarray:
    """Inverse of :func:`canonical_decompose` (trace-preserving by construction)."""
    H = as_matrix(hamiltonian)
    K = np.asarray(kossakowski, dtype=complex)
    B = np.asarray(basis[1:])
    W = _basis_columns(basis[1:])
    jump_part = superop_from_choi(W @ K @ dagger(W))
    G = -0.5 * np.einsum("jk,kba,jbc->ac", K, np.conj(B), B)  # sum c_jk F_k^+ F_j
    return commutator_superop(H) + jump_part + anticommutator_superop(G)


def choi_matrix(superop: np.ndarray) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| (x) Phi(|i><j|)`` of a row-stacked superoperator."""
    n = superop.shape[0]
    d = int(round(np.sqrt(n)))
    # Phi(|i><j|)[k, l] = S[k*d + l, i*d + j]; Choi[(i,k), (j,l)]
    T = superop.reshape(d, d, d, d)  # [k, l, i, j]
    return T.transpose(2, 0, 3, 1).reshape(n, n)


def superop_from_choi(choi: np.ndarray) -> np.ndarray:
    n = choi.shape[0]
    d = int(round(np.sqrt(n)))
    return choi.reshape(d, d, d, d).transpose(1, 3, 0, 2).reshape(n, n)


def choi_of_map(L: Liouvillian, t: float):
    """Choi matrix of ``exp(t L)`` and its smallest eigenvalue."""
    if not t > 0:
        raise ValueError("t must be positive")
    C = choi_matrix(matrix_exp(L.matrix, t))
    C = 0.5 * (C + dagger(C))
    return C, float(np.linalg.eigvalsh(C)[0])


def choi_scan(L: Liouvillian, times: Iterable[float]) -> np.ndarray:
    return np.array([choi_of_map(L, t)[1] for t in times])


def is_cp_map(min_eigenvalue: float, d: int, tol: float = 1e-9) -> bool:
    return min_eigenvalue >= -tol * d


@dataclass(frozen=True)
class DissipatorEigensystem:
    """Eigenpairs of ``rho -> 2 A rho A - A^2 rho - rho A^2``, eigenvalues descending.

    ``clusters`` groups indices of (numerically) equal eigenvalues;
    ``gaps[a, b] = |lambda_a - lambda_b|``.
    """

    eigenvalues: np.ndarray
    eigenoperators: list
    gaps: np.ndarray
    clusters: list
    superop: np.ndarray

    @property
    def cluster_values(self) -> np.ndarray:
        return np.array([self.eigenvalues[c].mean() for c in self.clusters])


def dissipator_eigensystem(A, tol: float = 1e-9) -> DissipatorEigensystem:
    A = as_matrix(A)
    if not is_hermitian(A):
        raise ValueError("dissipator eigenanalysis needs a Hermitian A")
    d = A.shape[0]
    D = high_temperature_dissipator(A)
    # Hermitian A makes D a Hermitian (and negative semidefinite) matrix
    w, V = np.linalg.eigh(0.5 * (D + dagger(D)))
    w = w[::-1]
    V = V[:, ::-1]
    scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    clusters = []
    for k in range(len(w)):
        if clusters and w[clusters[-1][0]] - w[k] <= tol * scale:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    ops = [V[:, k].reshape(d, d) for k in range(len(w))]
    return DissipatorEigensystem(w, ops, np.abs(w[:, None] - w[None, :]), clusters, D)


@dataclass(frozen=True)
class ZenoPair:
    a: int
    b: int
    lambda_a: float
    lambda_b: float
    separation: float  # alpha * |lambda_a - lambda_b|
    coupling: float  # ||P_a C P_b|| with C the commutator superoperator
    ratio: float
    protected: bool


@dataclass(frozen=True)
class ZenoGapReport:
    alpha: float
    cluster_values: np.ndarray
    pairs: list
    threshold: float
    focus_cluster: Optional[int] = None

    @property
    def protected(self) -> bool:
        return all(p.protected for p in self.pairs)

    @property
    def focus_protected(self) -> Optional[bool]:
        if self.focus_cluster is None:
            return None
        return all(p.protected for p in self.pairs if self.focus_cluster in (p.a, p.b))

    def focus_ratio(self) -> Optional[float]:
        if self.focus_cluster is None:
            return None
        ratios = [p.ratio for p in self.pairs if self.focus_cluster in (p.a, p.b)]
        return max(ratios, default=0.0)


def zeno_gap_report(A, H, alpha: float, threshold: float = 0.1, focus=None) -> ZenoGapReport:
    """Compare dissipator eigenvalue separations with the Hamiltonian coupling between eigenspaces.

    A pair is flagged unprotected when ``coupling / (alpha * gap) > threshold``.
    ``focus`` (an operator, e.g. the initial state) selects the eigenspace
    carrying most of its weight; its pairs are summarized separately.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    H = as_matrix(H)
    es = dissipator_eigensystem(A)
    C = commutator_superop(H)
    n = es.superop.shape[0]
    V = np.column_stack([vectorize_row(op) for op in es.eigenoperators]) if n else np.zeros((0, 0))
    projs = [V[:, c] @ dagger(V[:, c]) for c in es.clusters]
    vals = es.cluster_values

    pairs = []
    for a, b in itertools.combinations(range(len(es.clusters)), 2):
        gap = alpha * abs(vals[a] - vals[b])
        coupling = max(operator_norm(projs[a] @ C @ projs[b]), operator_norm(projs[b] @ C @ projs[a]))
        ratio = coupling / gap if gap > 0 else (0.0 if coupling == 0 else np.inf)
        pairs.append(ZenoPair(a, b, float(vals[a]), float(vals[b]), gap, coupling, ratio, ratio <= threshold))

    focus_cluster = None
    if focus is not None:
        v = vectorize_row(focus)
        weights = [np.linalg.norm(P @ v) for P in projs]
        focus_cluster = int(np.argmax(weights))
    return ZenoGapReport(alpha, vals, pairs, threshold, focus_cluster)


# Low temperature and near-degenerate transitions: the regime where the
# unrestricted non-secular generator is expected to break complete positivity.
WITNESS_SEARCH_GRID = {
    "models": ("two-level", "three-level-ladder", "four-level-overlapping"),
    "temperatures": (0.05, 0.2, 1.0),
    "gammas": (0.1,),
    "times": (0.01, 0.1, 1.0),
}


def witness_model(name: str):
    """Small models whose Bohr frequencies overlap (or coincide); see WITNESS_SEARCH_GRID."""
    from .system import SystemModel

    if name == "two-level":
        H = np.diag([0.0, 1.0])
        A = np.array([[0, 1], [1, 0]])
    elif name == "three-level-ladder":
        H = np.diag([0.0, 1.0, 2.05])
        A = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    elif name == "four-level-overlapping":
        H = np.diag([0.0, 0.1, 1.0, 1.15])
        A = np.zeros((4, 4))
        A[:2, 2:] = [[1.0, 0.5], [0.7, 1.0]]
        A = A + A.T
    else:
        raise ValueError(f"unknown witness model {name!r}")
    return SystemModel(H=H, A=A)


@dataclass(frozen=True)
class CPWitness:
    model: str
    temperature: float
    gamma: float
    t: float
    min_eigenvalue: float

    def as_dict(self) -> dict:
        return dict(model=self.model, temperature=self.temperature, gamma=self.gamma, t=self.t,
                    min_eigenvalue=self.min_eigenvalue)


def find_cp_violation(grid: Optional[dict] = None, threshold: float = -1e-6) -> list[CPWitness]:
    """Scan ``grid`` with the non-secular generator and return every (model, t) whose Choi matrix
    has an eigenvalue below ``threshold``, most negative first."""
    from .bath import BathModel
    from .generators import build_nonsecular

    grid = grid or WITNESS_SEARCH_GRID
    found = []
    for name in grid["models"]:
        sys = witness_model(name)
        for T in grid["temperatures"]:
            for g in grid["gammas"]:
                L = build_nonsecular(sys, None, BathModel(g, T))
                for t in grid["times"]:
                    _, m = choi_of_map(L, t)
                    if m < threshold:
                        found.append(CPWitness(name, T, g, t, m))
    return sorted(found, key=lambda w: w.min_eigenvalue)


def planted_non_cp_generator(d: int = 2, negative_rate: float = -1.0) -> Liouvillian:
    """GKSL-shaped generator with one negative channel rate (a deliberately invalid generator)."""
    F = np.zeros((d, d), dtype=complex)
    F[0, d - 1] = 1.0
    M = negative_rate * (left_right_superop(F, dagger(F)) - 0.5 * anticommutator_superop(dagger(F) @ F))
    return Liouvillian(d, M, Variant.EXPLICIT, {"planted_rate": negative_rate})


def recorded_witness() -> dict:
    """The strongest violation found on WITNESS_SEARCH_GRID, as shipped in ``data/cp_witness.json``."""
    import json
    from importlib import resources

    return json.loads(resources.files("thermalzeno").joinpath("data/cp_witness.json").read_text())
