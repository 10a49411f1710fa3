"""Liouvillian superoperators: non-secular Born-Markov, secular GKSL, high-temperature limit.

All generators act on row-stacked density matrices (see :mod:`thermalzeno.operators`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bath import BathModel, ZeroFrequencyRateError, high_temperature_alpha, rate
from .operators import (
    anticommutator_superop,
    as_matrix,
    commutator_superop,
    dagger,
    left_right_superop,
    operator_norm,
    vectorize_row,
)
from .system import SystemModel, SystemSpectrum, jump_operators, spectrum

PRUNE_TOL = 1e-14
ZERO_FREQUENCY_TOL = 1e-10


class Variant(str, enum.Enum):
    NONSECULAR = "nonsecular"
    SECULAR = "secular"
    HIGH_TEMPERATURE = "hight"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class Liouvillian:
    dim: int
    matrix: np.ndarray
    variant: Variant
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.dim**2, self.dim**2):
            raise ValueError(f"generator of shape {m.shape} does not act on a {self.dim}-level system")
        object.__setattr__(self, "matrix", m)

    def trace_defect(self) -> float:
        """Norm of the trace functional applied to the generator (0 if trace preserving)."""
        tr = vectorize_row(np.eye(self.dim)).real
        return float(np.max(np.abs(tr @ self.matrix), initial=0.0))

    def hermiticity_defect(self) -> float:
        """Max deviation from ``L(rho)^dagger == L(rho^dagger)`` over matrix units."""
        d = self.dim
        # swap(k*d+l) = l*d+k implements rho -> rho^T; Hermiticity preservation
        # means conj(L) = S L S with S the swap permutation.
        perm = np.arange(d * d).reshape(d, d).T.reshape(-1)
        swapped = self.matrix[np.ix_(perm, perm)]
        return float(np.max(np.abs(np.conj(self.matrix) - swapped), initial=0.0))


def _check_zero_frequency(jumps, tol: float = ZERO_FREQUENCY_TOL) -> None:
    for w, Aw in jumps:
        if w == 0.0 and operator_norm(Aw) > tol:
            raise ZeroFrequencyRateError(
                f"A(0) has norm {operator_norm(Aw):.3e}; the coupling induces transitions inside an eigenspace"
            )


def _provenance(sys: SystemModel, bath: Optional[BathModel], **extra) -> dict:
    out = {
        "dim": sys.dim,
        "H": sys.H,
        "A": sys.A,
        "lamb_shift": sys.lamb_shift,
    }
    if bath is not None:
        out["gamma"] = bath.gamma
        out["temperature"] = bath.temperature
    out.update(extra)
    return out


def _nonzero_jumps(sys: SystemModel, spec: SystemSpectrum):
    jumps = jump_operators(spec, sys.A)
    _check_zero_frequency(jumps)
    return [(w, Aw) for w, Aw in jumps if w != 0.0 and operator_norm(Aw) > PRUNE_TOL]


def build_nonsecular(sys: SystemModel, spec: Optional[SystemSpectrum], bath: BathModel) -> Liouvillian:
    """Born-Markov generator before the secular approximation.

    ``-i[H, rho] + sum_{w,w'} Gamma(w) [A(w) rho A(w')^+ - A(w')^+ A(w) rho] + h.c.``

    The sum over ``w'`` collapses to ``A`` itself (``sum_w' A(w') = A`` once
    ``A(0) = 0``), leaving a single sum over the rate-weighted operator
    ``Lam = sum_w Gamma(w) A(w)``.
    """
    spec = spec if spec is not None else spectrum(sys.H)
    jumps = _nonzero_jumps(sys, spec)
    A = sys.A
    d = sys.dim
    Lam = np.zeros((d, d), dtype=complex)
    for w, Aw in jumps:
        Lam += rate(w, bath) * Aw
    # X rho = Lam rho A^+ - A^+ Lam rho, plus its Hermitian conjugate
    D = (
        left_right_superop(Lam, dagger(A))
        - left_right_superop(dagger(A) @ Lam, np.eye(d))
        + left_right_superop(A, dagger(Lam))
        - left_right_superop(np.eye(d), dagger(Lam) @ A)
    )
    L = commutator_superop(sys.effective_hamiltonian) + D
    return Liouvillian(d, L, Variant.NONSECULAR, _provenance(sys, bath, bohr_frequencies=[w for w, _ in jumps]))


def build_secular(sys: SystemModel, spec: Optional[SystemSpectrum], bath: BathModel) -> Liouvillian:
    """Secular (GKSL) generator: only ``w == w'`` terms survive.

    Each channel ``A(w)`` carries the GKSL rate ``2 Gamma(w)``.
    """
    spec = spec if spec is not None else spectrum(sys.H)
    jumps = _nonzero_jumps(sys, spec)
    d = sys.dim
    L = commutator_superop(sys.effective_hamiltonian)
    for w, Aw in jumps:
        g = rate(w, bath)
        L = L + g * (2.0 * left_right_superop(Aw, dagger(Aw)) - anticommutator_superop(dagger(Aw) @ Aw))
    return Liouvillian(d, L, Variant.SECULAR, _provenance(sys, bath, bohr_frequencies=[w for w, _ in jumps]))


def high_temperature_dissipator(A) -> np.ndarray:
    """Superoperator of ``rho -> 2 A rho A - A^2 rho - rho A^2``."""
    A = as_matrix(A)
    A2 = A @ A
    return 2.0 * left_right_superop(A, A) - anticommutator_superop(A2)


def build_high_temperature(sys: SystemModel, alpha: float) -> Liouvillian:
    """``-i[H, rho] + alpha (2 A rho A - A^2 rho - rho A^2)``."""
    if not alpha >= 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    L = commutator_superop(sys.effective_hamiltonian) + alpha * high_temperature_dissipator(sys.A)
    return Liouvillian(sys.dim, L, Variant.HIGH_TEMPERATURE, _provenance(sys, None, alpha=alpha))


def build_high_temperature_from_bath(sys: SystemModel, bath: BathModel, omega0: float) -> Liouvillian:
    """High-temperature generator with ``alpha = gamma * N(omega0)``."""
    alpha = high_temperature_alpha(bath, omega0)
    L = build_high_temperature(sys, alpha)
    L.provenance.update(gamma=bath.gamma, temperature=bath.temperature, omega0=omega0)
    return L


def high_temperature_defect(nonsec: Liouvillian, hiT: Liouvillian) -> float:
    """Operator norm of the difference between two generators."""
    if nonsec.dim != hiT.dim:
        raise ValueError(f"dimension mismatch: {nonsec.dim} vs {hiT.dim}")
    return operator_norm(nonsec.matrix - hiT.matrix)


def build(variant, sys: SystemModel, *, bath: Optional[BathModel] = None, alpha: Optional[float] = None,
          omega0: Optional[float] = None, spec: Optional[SystemSpectrum] = None) -> Liouvillian:
    """Dispatch on ``variant``; the high-temperature variant takes ``alpha`` or ``(bath, omega0)``."""
    variant = Variant(variant)
    if variant is Variant.NONSECULAR:
        if bath is None:
            raise ValueError("the non-secular generator needs a bath")
        return build_nonsecular(sys, spec, bath)
    if variant is Variant.SECULAR:
        if bath is None:
            raise ValueError("the secular generator needs a bath")
        return build_secular(sys, spec, bath)
    if variant is Variant.HIGH_TEMPERATURE:
        if alpha is not None:
            return build_high_temperature(sys, alpha)
        if bath is None or omega0 is None:
            raise ValueError("the high-temperature generator needs alpha or (bath, omega0)")
        return build_high_temperature_from_bath(sys, bath, omega0)
    raise ValueError(f"cannot build variant {variant.value!r} from a system model")
