"""Density-matrix propagation, survival probabilities and Zeno sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .generators import Liouvillian, build_high_temperature
from .operators import as_matrix, dagger, devectorize_row, matrix_exp, trace_distance, vectorize_row
from .system import SystemModel

STATE_TOL = 1e-10
POSITIVITY_TOL = 1e-9
SURVIVAL_SLACK = 1e-9


def validate_density_matrix(rho, tol: float = STATE_TOL, positivity_tol: float = POSITIVITY_TOL) -> np.ndarray:
    rho = as_matrix(rho)
    if np.max(np.abs(rho - dagger(rho))) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix has trace {np.trace(rho).real:.12g}, expected 1")
    if np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))[0] < -positivity_tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, np.conj(psi))


def basis_state(i: int, d: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[i] = 1.0
    return pure_state(e)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (n_times, d, d)
    survival: Optional[np.ndarray] = None

    def trace_deviation(self) -> np.ndarray:
        return np.abs(np.trace(self.states, axis1=1, axis2=2) - 1.0)

    def hermiticity_deviation(self) -> np.ndarray:
        return np.max(np.abs(self.states - np.conj(self.states.transpose(0, 2, 1))), axis=(1, 2))

    def min_eigenvalues(self) -> np.ndarray:
        herm = 0.5 * (self.states + np.conj(self.states.transpose(0, 2, 1)))
        return np.linalg.eigvalsh(herm)[:, 0]


def _check_times(times) -> np.ndarray:
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size == 0:
        raise ValueError("empty time grid")
    if not np.all(np.isfinite(times)):
        raise ValueError("non-finite times")
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be ascending and nonnegative")
    return times


def is_rank_one_projector(rho, tol: float = 1e-9) -> bool:
    rho = as_matrix(rho)
    return bool(np.max(np.abs(rho @ rho - rho)) <= tol and abs(np.trace(rho) - 1.0) <= tol)


def survival(rho0, rho_t, slack: float = SURVIVAL_SLACK) -> float:
    """``Tr[rho0 rho_t]`` for a rank-1 projector ``rho0``."""
    rho0 = as_matrix(rho0)
    if not is_rank_one_projector(rho0):
        raise ValueError("survival needs a rank-1 projector as reference state")
    p = float(np.real(np.trace(rho0 @ as_matrix(rho_t))))
    if p < -slack or p > 1 + slack:
        raise ValueError(f"survival probability {p!r} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def _survival_curve(rho0, states) -> np.ndarray:
    if not is_rank_one_projector(rho0):
        return None
    return np.array([survival(rho0, s) for s in states])


def propagate(L: Liouvillian, rho0, times: Sequence[float]) -> Trajectory:
    """Dense-exponential propagation: ``rho(t) = devec(exp(t L) vec(rho0))``.

    On a uniform grid one step propagator is reused; otherwise each time gets
    its own exponential.
    """
    rho0 = validate_density_matrix(rho0)
    times = _check_times(times)
    v0 = vectorize_row(rho0)
    d = L.dim
    out = np.empty((times.size, d, d), dtype=complex)
    steps = np.diff(times)
    uniform = times.size > 2 and np.allclose(steps, steps[0], rtol=1e-12, atol=0)
    if uniform:
        step = matrix_exp(L.matrix, steps[0])
        v = matrix_exp(L.matrix, times[0]) @ v0
        for k in range(times.size):
            out[k] = devectorize_row(v)
            v = step @ v
    else:
        for k, t in enumerate(times):
            out[k] = devectorize_row(matrix_exp(L.matrix, t) @ v0)
    return Trajectory(times, out, _survival_curve(rho0, out))


def propagate_ode(L: Liouvillian, rho0, times: Sequence[float], rtol: float = 1e-11, atol: float = 1e-13) -> Trajectory:
    """Adaptive Runge-Kutta integration of the same equation; a cross-check for :func:`propagate`."""
    rho0 = validate_density_matrix(rho0)
    times = _check_times(times)
    M = L.matrix
    sol = solve_ivp(lambda _t, y: M @ y, (0.0, times[-1]), vectorize_row(rho0), method="DOP853",
                    t_eval=times, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"ODE integration failed: {sol.message}")
    d = L.dim
    states = sol.y.T.reshape(times.size, d, d)
    return Trajectory(times, states, _survival_curve(rho0, states))


def trajectory_defect(L1: Liouvillian, L2: Liouvillian, rho0, t: float) -> float:
    """Trace distance between the two evolutions of ``rho0`` at time ``t``."""
    rho0 = validate_density_matrix(rho0)
    v0 = vectorize_row(rho0)
    r1 = devectorize_row(matrix_exp(L1.matrix, t) @ v0)
    r2 = devectorize_row(matrix_exp(L2.matrix, t) @ v0)
    return trace_distance(r1, r2)


@dataclass(frozen=True)
class ZenoSweepResult:
    alphas: np.ndarray
    min_survival: np.ndarray
    time_horizon: float
    times: np.ndarray
    curves: np.ndarray  # survival, shape (n_alphas, n_times)
    tail_exponent: Optional[float] = None

    @property
    def leakage(self) -> np.ndarray:
        return 1.0 - self.min_survival


class SweepError(RuntimeError):
    def __init__(self, alpha: float, cause: Exception):
        super().__init__(f"propagation failed at alpha={alpha!r}: {cause}")
        self.alpha = alpha


def tail_exponent(alphas, leakage, n_tail: int = 3) -> Optional[float]:
    """Log-log slope of ``leakage`` against ``alpha`` over the last ``n_tail`` points."""
    a = np.asarray(alphas, dtype=float)[-n_tail:]
    y = np.asarray(leakage, dtype=float)[-n_tail:]
    keep = (a > 0) & (y > 0)
    if keep.sum() < 2:
        return None
    slope, _ = np.polyfit(np.log(a[keep]), np.log(y[keep]), 1)
    return float(slope)


def zeno_sweep(model: SystemModel, alphas: Sequence[float], time_horizon: float, n_times: int = 401,
               initial_state=None, n_tail: int = 3) -> ZenoSweepResult:
    """Minimum survival of ``initial_state`` (default ``|1><1|``) under the high-temperature
    generator for each alpha, on a uniform grid over ``[0, time_horizon]``."""
    alphas = np.asarray(alphas, dtype=float)
    if alphas.ndim != 1 or alphas.size == 0:
        raise ValueError("alphas must be a non-empty list")
    if np.any(alphas < 0) or np.any(np.diff(alphas) < 0):
        raise ValueError("alphas must be nonnegative and ascending")
    if not time_horizon > 0:
        raise ValueError("time_horizon must be positive")
    if n_times < 2:
        raise ValueError("n_times must be at least 2")
    rho0 = initial_state if initial_state is not None else basis_state(0, model.dim)
    times = np.linspace(0.0, time_horizon, n_times)
    curves = np.empty((alphas.size, n_times))
    for k, alpha in enumerate(alphas):
        try:
            traj = propagate(build_high_temperature(model, float(alpha)), rho0, times)
        except Exception as exc:  # noqa: BLE001 - re-raised with the offending alpha
            raise SweepError(float(alpha), exc) from exc
        if traj.survival is None:
            raise ValueError("initial_state must be a rank-1 projector")
        curves[k] = traj.survival
    mins = curves.min(axis=1)
    return ZenoSweepResult(alphas, mins, float(time_horizon), times, curves, tail_exponent(alphas, 1.0 - mins, n_tail))
