"""System Hamiltonian spectrum, jump operators and two-band coupling checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .operators import HERMITIAN_TOL, as_matrix, dagger, eig_hermitian, is_hermitian, operator_norm

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class SystemModel:
    """Hamiltonian ``H``, Hermitian coupling operator ``A`` (``H_I = A x B``) and an optional Lamb shift."""

    H: np.ndarray
    A: np.ndarray
    lamb_shift: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "H", as_matrix(self.H))
        object.__setattr__(self, "A", as_matrix(self.A))
        if self.H.shape != self.A.shape:
            raise ValueError(f"H and A differ in shape: {self.H.shape} vs {self.A.shape}")
        for name in ("H", "A"):
            if not is_hermitian(getattr(self, name), HERMITIAN_TOL):
                raise ValueError(f"{name} is not Hermitian")
        if self.lamb_shift is not None:
            ls = as_matrix(self.lamb_shift)
            if ls.shape != self.H.shape or not is_hermitian(ls, HERMITIAN_TOL):
                raise ValueError("lamb_shift must be Hermitian with the shape of H")
            object.__setattr__(self, "lamb_shift", ls)

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    @property
    def effective_hamiltonian(self) -> np.ndarray:
        if self.lamb_shift is None:
            return self.H
        return self.H + self.lamb_shift


@dataclass(frozen=True)
class SystemSpectrum:
    """Degenerate eigenspaces of H and the Bohr frequencies between them.

    ``transitions[k]`` lists the level-index pairs ``(i, j)`` with
    ``energies[j] - energies[i] == bohr_frequencies[k]`` (within ``tol``).
    """

    dim: int
    energies: np.ndarray
    projectors: tuple
    bohr_frequencies: np.ndarray
    transitions: tuple
    tol: float

    @property
    def levels(self):
        return list(zip(self.energies, self.projectors))

    @property
    def coincident_frequencies(self) -> list[float]:
        """Bohr frequencies shared by more than one level pair."""
        return [float(w) for w, pairs in zip(self.bohr_frequencies, self.transitions) if len(pairs) > 1]

    def frequency_index(self, omega: float) -> int:
        k = int(np.argmin(np.abs(self.bohr_frequencies - omega)))
        if abs(self.bohr_frequencies[k] - omega) > 10 * self.tol:
            raise ValueError(f"{omega!r} is not a Bohr frequency of this spectrum")
        return k


def _cluster(values: np.ndarray, tol: float) -> list[list[int]]:
    # values must be sorted ascending
    groups: list[list[int]] = []
    for k, v in enumerate(values):
        if groups and v - values[groups[-1][-1]] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def spectrum(H, degeneracy_tol: float = DEGENERACY_TOL) -> SystemSpectrum:
    """Group the eigenvalues of ``H`` into eigenspaces and enumerate Bohr frequencies.

    Eigenvalues closer than ``degeneracy_tol * max(1, ||H||)`` are merged,
    and the same absolute tolerance deduplicates Bohr frequencies.
    """
    if degeneracy_tol <= 0:
        raise ValueError("degeneracy_tol must be positive")
    H = as_matrix(H)
    w, V = eig_hermitian(H)
    d = H.shape[0]
    tol = degeneracy_tol * max(1.0, operator_norm(H))

    energies = []
    projectors = []
    for group in _cluster(w, tol):
        vecs = V[:, group]
        energies.append(float(np.mean(w[group])))
        projectors.append(vecs @ dagger(vecs))
    energies = np.array(energies)

    n = len(energies)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    gaps = np.array([energies[j] - energies[i] for i, j in pairs])
    order = np.argsort(gaps, kind="stable")
    positive = []
    positive_pairs = []
    for group in _cluster(gaps[order], tol):
        idx = order[group]
        positive.append(float(np.mean(gaps[idx])))
        positive_pairs.append([pairs[k] for k in idx])

    freqs = [-w_ for w_ in reversed(positive)] + [0.0] + positive
    trans = (
        [tuple((j, i) for i, j in p) for p in reversed(positive_pairs)]
        + [tuple((i, i) for i in range(n))]
        + [tuple(p) for p in positive_pairs]
    )
    return SystemSpectrum(
        dim=d,
        energies=energies,
        projectors=tuple(projectors),
        bohr_frequencies=np.array(freqs),
        transitions=tuple(trans),
        tol=tol,
    )


def jump_operator(spec: SystemSpectrum, A, omega: float) -> np.ndarray:
    """``A(omega) = sum over eps' - eps = omega of Pi(eps) A Pi(eps')``."""
    A = as_matrix(A)
    k = spec.frequency_index(omega)
    out = np.zeros_like(A)
    for i, j in spec.transitions[k]:
        out += spec.projectors[i] @ A @ spec.projectors[j]
    return out


def jump_operators(spec: SystemSpectrum, A) -> list[tuple[float, np.ndarray]]:
    """All ``(omega, A(omega))`` pairs, in ascending order of omega."""
    return [(float(w), jump_operator(spec, A, w)) for w in spec.bohr_frequencies]


def reconstruct_coupling(spec: SystemSpectrum, A) -> np.ndarray:
    return sum((Aw for _, Aw in jump_operators(spec, A)), np.zeros((spec.dim, spec.dim), dtype=complex))


@dataclass(frozen=True)
class BandPartition:
    """Two complementary projectors with the band geometry derived from a spectrum.

    ``omega0`` is the distance between band centres (unweighted mean of the
    distinct level energies in each band). ``delta_omega`` is the spread of
    the inter-band Bohr frequencies, which equals the sum of both band widths.
    """

    P1: np.ndarray
    P2: np.ndarray
    omega0: float
    delta_omega: float
    omega0_weighted: float
    max_intraband_frequency: float
    band_of_level: tuple

    @property
    def separated(self) -> bool:
        return self.omega0 > self.delta_omega


def projector_from_indices(indices, d: int) -> np.ndarray:
    P = np.zeros((d, d), dtype=complex)
    for i in indices:
        P[i, i] = 1.0
    return P


def band_partition(spec: SystemSpectrum, P1, P2, tol: float = 1e-10) -> BandPartition:
    P1 = as_matrix(P1)
    P2 = as_matrix(P2)
    eye = np.eye(spec.dim)
    if operator_norm(P1 + P2 - eye) > tol or operator_norm(P1 @ P2) > tol:
        raise ValueError("band projectors are not a resolution of the identity")

    band_of_level = []
    for energy, Pi in spec.levels:
        if operator_norm(P1 @ Pi - Pi) <= max(tol, 1e-9):
            band_of_level.append(1)
        elif operator_norm(P2 @ Pi - Pi) <= max(tol, 1e-9):
            band_of_level.append(2)
        else:
            raise ValueError(f"eigenspace at energy {energy:.6g} straddles both bands")
    band_of_level = tuple(band_of_level)
    e1 = np.array([e for e, b in zip(spec.energies, band_of_level) if b == 1])
    e2 = np.array([e for e, b in zip(spec.energies, band_of_level) if b == 2])
    if e1.size == 0 or e2.size == 0:
        raise ValueError("each band must contain at least one eigenspace")
    m1 = np.array([np.trace(Pi).real for Pi, b in zip(spec.projectors, band_of_level) if b == 1])
    m2 = np.array([np.trace(Pi).real for Pi, b in zip(spec.projectors, band_of_level) if b == 2])

    omega0 = float(e2.mean() - e1.mean())
    weighted = float(np.average(e2, weights=m2) - np.average(e1, weights=m1))
    inter = np.abs(e2[:, None] - e1[None, :])
    return BandPartition(
        P1=P1,
        P2=P2,
        omega0=abs(omega0),
        delta_omega=float(inter.max() - inter.min()),
        omega0_weighted=abs(weighted),
        max_intraband_frequency=float(max(np.ptp(e1), np.ptp(e2))),
        band_of_level=band_of_level,
    )


@dataclass(frozen=True)
class BandReport:
    intra_band_1: float
    intra_band_2: float
    inter_band: float
    omega0: float
    omega0_weighted: float
    delta_omega: float
    max_intraband_frequency: float
    coincident_frequencies: list = field(default_factory=list)
    validity_indicator: Optional[float] = None
    tol: float = 1e-10

    @property
    def diagonal_ok(self) -> bool:
        return self.intra_band_1 <= self.tol and self.intra_band_2 <= self.tol

    @property
    def off_diagonal_ok(self) -> bool:
        return self.inter_band > self.tol

    @property
    def holds(self) -> bool:
        return self.diagonal_ok and self.off_diagonal_ok

    def as_dict(self) -> dict:
        return {
            "intra_band_1": self.intra_band_1,
            "intra_band_2": self.intra_band_2,
            "inter_band": self.inter_band,
            "omega0": self.omega0,
            "omega0_weighted": self.omega0_weighted,
            "delta_omega": self.delta_omega,
            "max_intraband_frequency": self.max_intraband_frequency,
            "validity_indicator": self.validity_indicator,
            "diagonal_ok": self.diagonal_ok,
            "off_diagonal_ok": self.off_diagonal_ok,
            "holds": self.holds,
        }


def validate_band_hypotheses(spec: SystemSpectrum, A, partition: BandPartition, tol: float = 1e-10, bath=None) -> BandReport:
    """Check that ``A`` has no intra-band and some inter-band matrix elements.

    When a bath is supplied the report carries ``gamma * T * dw / w0**2``,
    which must be small for the high-temperature generator to apply.
    """
    A = as_matrix(A)
    P1, P2 = partition.P1, partition.P2
    indicator = None
    if bath is not None:
        indicator = bath.gamma * bath.temperature * partition.delta_omega / partition.omega0**2
    return BandReport(
        intra_band_1=operator_norm(P1 @ A @ P1),
        intra_band_2=operator_norm(P2 @ A @ P2),
        inter_band=operator_norm(P1 @ A @ P2),
        omega0=partition.omega0,
        omega0_weighted=partition.omega0_weighted,
        delta_omega=partition.delta_omega,
        max_intraband_frequency=partition.max_intraband_frequency,
        coincident_frequencies=spec.coincident_frequencies,
        validity_indicator=indicator,
        tol=tol,
    )


def discover_bands(spec: SystemSpectrum) -> tuple[np.ndarray, np.ndarray]:
    """Split the levels at the largest spectral gap.

    A convenience for exploring a model; callers still have to pass the
    result through :func:`validate_band_hypotheses`.
    """
    if len(spec.energies) < 2:
        raise ValueError("need at least two distinct levels to form two bands")
    cut = int(np.argmax(np.diff(spec.energies))) + 1
    P1 = sum(spec.projectors[:cut])
    P2 = sum(spec.projectors[cut:])
    return P1, P2
