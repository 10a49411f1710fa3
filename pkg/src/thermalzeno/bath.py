"""Thermal bosonic bath with a flat spectral density."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ZeroFrequencyRateError(ValueError):
    """Gamma(0) was requested; the occupation number diverges there."""


@dataclass(frozen=True)
class BathModel:
    """Flat coupling strength ``gamma = |g|^2 D`` and temperature (k_B = 1)."""

    gamma: float
    temperature: float

    def __post_init__(self):
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")


def occupation(omega: float, T: float) -> float:
    """Bose-Einstein occupation ``1 / (exp(omega / T) - 1)``."""
    if not omega > 0:
        raise ValueError(f"occupation needs omega > 0, got {omega}")
    if not T > 0:
        raise ValueError(f"occupation needs T > 0, got {T}")
    x = omega / T
    if x > 700:
        return float(np.exp(-x))
    return float(1.0 / np.expm1(x))


def rate(omega: float, bath: BathModel) -> float:
    """Real part of the one-sided bath correlation transform, Lamb shift dropped.

    ``gamma * (1 + N(omega))`` for emission (omega > 0) and
    ``gamma * N(|omega|)`` for absorption (omega < 0).
    """
    if omega == 0:
        raise ZeroFrequencyRateError("zero-frequency rate undefined: A(0) must vanish")
    n = occupation(abs(omega), bath.temperature)
    if omega > 0:
        return bath.gamma * (1.0 + n)
    return bath.gamma * n


def occupation_linearized(omega0: float, delta: float, T: float) -> float:
    """High-temperature linearization ``N(w0) - T * delta / w0**2``."""
    if not omega0 > 0:
        raise ValueError("omega0 must be positive")
    if not abs(delta) < omega0:
        raise ValueError("|delta| must be smaller than omega0")
    return occupation(omega0, T) - T * delta / omega0**2


def high_temperature_alpha(bath: BathModel, omega0: float) -> float:
    """Dissipator strength ``gamma * N(omega0)`` of the high-temperature generator."""
    return bath.gamma * occupation(omega0, bath.temperature)
