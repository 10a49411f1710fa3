"""Three-level model: levels 1 and 2 driven by a field, levels 2 and 3 coupled to the bath.

``H = sum_l nu_l |l><l| + (Omega |1><2| + h.c.)`` and ``A = |2><3| + |3><2|``,
band 1 spanned by ``|1>, |2>`` and band 2 by ``|3>``. Defaults satisfy
``alpha >> omega_13, omega_23 >> omega_12`` and ``alpha >> Omega`` at the top
of the default alpha grid; they are implementation choices, not measured values.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .system import SystemModel, projector_from_indices

PRESET_NAME = "paper-three-level"
DEFAULT_NU = (0.0, 0.1, 50.0)
DEFAULT_OMEGA = 1.0
DEFAULT_HORIZON = 10.0
DEFAULT_ALPHAS = (1.0, 10.0, 100.0, 1000.0, 10000.0)
DEFAULT_ALPHA = 1e4
MUCH_GREATER = 10.0


class HierarchyWarning(UserWarning):
    pass


def three_level_hamiltonian(nu=DEFAULT_NU, Omega: complex = DEFAULT_OMEGA) -> np.ndarray:
    H = np.diag(np.asarray(nu, dtype=complex))
    H[0, 1] = Omega
    H[1, 0] = np.conj(Omega)
    return H


def three_level_coupling() -> np.ndarray:
    A = np.zeros((3, 3), dtype=complex)
    A[1, 2] = A[2, 1] = 1.0
    return A


def three_level_model(nu=DEFAULT_NU, Omega: complex = DEFAULT_OMEGA, lamb_shift=None) -> SystemModel:
    return SystemModel(three_level_hamiltonian(nu, Omega), three_level_coupling(), lamb_shift)


def three_level_bands() -> tuple[np.ndarray, np.ndarray]:
    return projector_from_indices([0, 1], 3), projector_from_indices([2], 3)


def band_centred_nu(omega0: float, delta_omega: float) -> tuple[float, float, float]:
    """Level energies with band-centre separation ``omega0`` and band-1 width ``delta_omega``."""
    return (0.0, delta_omega, omega0 + 0.5 * delta_omega)


@dataclass(frozen=True)
class HierarchyCheck:
    alpha_over_bath_frequency: float
    bath_over_intraband_frequency: float
    alpha_over_Omega: float

    @property
    def ok(self) -> bool:
        return min(self.alpha_over_bath_frequency, self.bath_over_intraband_frequency,
                   self.alpha_over_Omega) >= MUCH_GREATER


def check_hierarchy(nu, Omega: complex, alpha: float, warn: bool = True) -> HierarchyCheck:
    """Check ``alpha >> omega_13, omega_23 >> omega_12`` and ``alpha >> |Omega|`` (factor 10)."""
    nu = np.asarray(nu, dtype=float)
    w12 = abs(nu[0] - nu[1])
    w_bath = max(abs(nu[0] - nu[2]), abs(nu[1] - nu[2]))
    w_bath_min = min(abs(nu[0] - nu[2]), abs(nu[1] - nu[2]))

    def ratio(a, b):
        return np.inf if b == 0 else a / b

    check = HierarchyCheck(ratio(alpha, w_bath), ratio(w_bath_min, w12), ratio(alpha, abs(Omega)))
    if warn and not check.ok:
        warnings.warn(
            "three-level parameters violate alpha >> omega_13, omega_23 >> omega_12, alpha >> Omega: "
            f"ratios {check.alpha_over_bath_frequency:.3g}, {check.bath_over_intraband_frequency:.3g}, "
            f"{check.alpha_over_Omega:.3g}",
            HierarchyWarning,
            stacklevel=2,
        )
    return check
