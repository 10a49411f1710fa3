"""Master-equation generators for a finite quantum system in a thermal bosonic bath.

Non-secular, secular and high-temperature Liouvillians, complete-positivity
checks and the thermal quantum Zeno effect of a driven three-level system.
"""

__version__ = "0.1.0"

from .bath import BathModel, occupation, occupation_linearized, rate
from .cp import canonical_decompose, choi_of_map, dissipator_eigensystem, zeno_gap_report
from .dynamics import propagate, survival, zeno_sweep
from .generators import (
    Liouvillian,
    Variant,
    build_high_temperature,
    build_nonsecular,
    build_secular,
    high_temperature_defect,
)
from .system import SystemModel, jump_operator, reconstruct_coupling, spectrum, validate_band_hypotheses

__all__ = [
    "BathModel",
    "Liouvillian",
    "SystemModel",
    "Variant",
    "build_high_temperature",
    "build_nonsecular",
    "build_secular",
    "canonical_decompose",
    "choi_of_map",
    "dissipator_eigensystem",
    "high_temperature_defect",
    "jump_operator",
    "occupation",
    "occupation_linearized",
    "propagate",
    "rate",
    "reconstruct_coupling",
    "spectrum",
    "survival",
    "validate_band_hypotheses",
    "zeno_gap_report",
    "zeno_sweep",
]
