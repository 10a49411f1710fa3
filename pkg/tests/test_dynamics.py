import numpy as np
import pytest

from thermalzeno.bath import BathModel
from thermalzeno.dynamics import (
    SweepError,
    basis_state,
    propagate,
    propagate_ode,
    pure_state,
    survival,
    tail_exponent,
    trajectory_defect,
    validate_density_matrix,
    zeno_sweep,
)
from thermalzeno.generators import Liouvillian, Variant, build_high_temperature, build_secular
from thermalzeno.operators import commutator_superop, random_density_matrix, random_hermitian
from thermalzeno.presets import three_level_model
from thermalzeno.system import SystemModel

# leakage 1 - min survival on the preset (nu = 0, 0.1, 50; Omega = 1; horizon 10, 401 points),
# from the adaptive ODE integrator at rtol 1e-11
LEAK_ALPHA_1E3 = 0.019701089907820823
LEAK_ALPHA_1E2 = 0.1726801949088258


def test_density_matrix_validation():
    validate_density_matrix(np.eye(3) / 3)
    with pytest.raises(ValueError):
        validate_density_matrix(np.eye(2))
    with pytest.raises(ValueError):
        validate_density_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        validate_density_matrix(np.array([[0.5, 0.5], [0.0, 0.5]]))


def test_survival_examples():
    r0 = basis_state(0, 3)
    assert survival(r0, r0) == 1.0
    assert survival(r0, basis_state(2, 3)) == 0.0
    assert survival(r0, np.eye(3) / 3) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        survival(np.eye(3) / 3, r0)
    with pytest.raises(ValueError):
        survival(r0, 2 * r0)  # outside [0, 1] beyond slack


def test_commutator_eigenprojector_is_stationary():
    H = random_hermitian(4, np.random.default_rng(30))
    _, V = np.linalg.eigh(H)
    rho0 = pure_state(V[:, 2])
    traj = propagate(Liouvillian(4, commutator_superop(H), Variant.EXPLICIT), rho0, np.linspace(0, 5, 11))
    np.testing.assert_allclose(traj.states, np.broadcast_to(rho0, traj.states.shape), atol=1e-12)
    np.testing.assert_allclose(traj.survival, 1.0, atol=1e-12)


def test_rabi_closed_form():
    Omega = 0.8
    m = three_level_model((0.0, 0.0, 50.0), Omega)
    times = np.linspace(0, 12, 241)
    traj = propagate(build_high_temperature(m, 0.0), basis_state(0, 3), times)
    np.testing.assert_allclose(traj.survival, np.cos(Omega * times) ** 2, atol=1e-9)


def test_decoupled_level_constant_for_any_alpha():
    m = three_level_model((0.0, 0.1, 50.0), 0.0)
    for alpha in (0.0, 1.0, 1e4):
        traj = propagate(build_high_temperature(m, alpha), basis_state(0, 3), np.linspace(0, 10, 21))
        np.testing.assert_allclose(traj.survival, 1.0, atol=1e-12)


def test_propagate_validates_inputs():
    L = build_high_temperature(three_level_model(), 1.0)
    with pytest.raises(ValueError):
        propagate(L, np.eye(3), [0.0, 1.0])
    with pytest.raises(ValueError):
        propagate(L, basis_state(0, 3), [1.0, 0.5])
    with pytest.raises(ValueError):
        propagate(L, basis_state(0, 3), [-1.0, 0.5])
    with pytest.raises(ValueError):
        propagate(L, basis_state(0, 3), [0.0, np.nan])


def test_trajectory_invariants_random():
    rng = np.random.default_rng(31)
    for _ in range(30):
        d = int(rng.integers(2, 6))
        H = np.diag(np.sort(rng.uniform(0, 5, d)))
        A = random_hermitian(d, rng)
        np.fill_diagonal(A, 0)
        m = SystemModel(H, A)
        for L in (build_secular(m, None, BathModel(0.3, rng.uniform(0.1, 3))),
                  build_high_temperature(m, rng.uniform(0, 5))):
            traj = propagate(L, random_density_matrix(d, rng), np.linspace(0, 5, 26))
            assert traj.trace_deviation().max() <= 1e-9
            assert traj.hermiticity_deviation().max() <= 1e-9
            assert traj.min_eigenvalues().min() >= -1e-8


def test_semigroup_consistency():
    rng = np.random.default_rng(32)
    L = build_high_temperature(three_level_model((0.0, 0.3, 2.0), 0.7), 1.3)
    rho0 = random_density_matrix(3, rng)
    t1, t2 = 0.37, 1.91
    mid = propagate(L, rho0, [t1]).states[-1]
    mid = 0.5 * (mid + mid.conj().T)
    two_step = propagate(L, mid / np.trace(mid), [t2]).states[-1]
    direct = propagate(L, rho0, [t1 + t2]).states[-1]
    np.testing.assert_allclose(two_step, direct, atol=1e-8)


def test_uniform_and_irregular_grids_agree():
    L = build_high_temperature(three_level_model(), 10.0)
    rho0 = basis_state(0, 3)
    uniform = propagate(L, rho0, np.linspace(0, 2, 9))
    irregular = propagate(L, rho0, [0.0, 0.25, 0.3, 1.75, 2.0])
    np.testing.assert_allclose(uniform.states[[0, 1, 7, 8]], irregular.states[[0, 1, 3, 4]], atol=1e-12)
    ode = propagate_ode(L, rho0, np.linspace(0, 2, 9))
    np.testing.assert_allclose(uniform.states, ode.states, atol=1e-9)


def test_trajectory_defect_identical():
    L = build_high_temperature(three_level_model(), 10.0)
    assert trajectory_defect(L, L, basis_state(0, 3), 1.0) == pytest.approx(0, abs=1e-15)


def test_zeno_sweep_alpha_zero_closed_form():
    Omega = 1.0
    m = three_level_model((0.0, 0.0, 50.0), Omega)
    res = zeno_sweep(m, [0.0], 10.0, n_times=401)
    t = np.linspace(0, 10, 401)
    assert res.min_survival[0] == pytest.approx(np.min(np.cos(Omega * t) ** 2), abs=1e-9)


def test_zeno_sweep_leakage_reference():
    m = three_level_model()
    res = zeno_sweep(m, [1e3], 10.0, n_times=401)
    ode = propagate_ode(build_high_temperature(m, 1e3), basis_state(0, 3), res.times)
    assert res.min_survival[0] == pytest.approx(ode.survival.min(), abs=1e-8)
    assert res.leakage[0] == pytest.approx(LEAK_ALPHA_1E3, rel=1e-8)
    # roughly 2 Omega^2 t / alpha
    assert res.leakage[0] == pytest.approx(2 * 10 / 1e3, rel=0.05)


def test_zeno_sweep_doubling_ratio():
    res = zeno_sweep(three_level_model(), [1e2, 2e2], 10.0)
    assert res.leakage[0] == pytest.approx(LEAK_ALPHA_1E2, rel=1e-8)
    ratio = res.leakage[1] / res.leakage[0]
    assert 0.4 <= ratio <= 0.7


def test_zeno_sweep_monotone_and_tail():
    alphas = [1.0, 10.0, 1e2, 1e3, 1e4]
    res = zeno_sweep(three_level_model(), alphas, 10.0)
    assert np.all(np.diff(res.min_survival) >= -1e-10)
    assert res.tail_exponent == pytest.approx(-1.0, abs=0.1)
    assert res.curves.shape == (5, 401)
    np.testing.assert_allclose(res.curves[:, 0], 1.0, atol=1e-14)


def test_zeno_sweep_errors():
    m = three_level_model()
    with pytest.raises(ValueError):
        zeno_sweep(m, [10.0, 1.0], 1.0)
    with pytest.raises(ValueError):
        zeno_sweep(m, [1.0], 0.0)
    with pytest.raises(SweepError) as err:
        zeno_sweep(m, [1.0, 1e300], 1.0)
    assert err.value.alpha == 1e300


def test_tail_exponent():
    a = np.array([1e2, 1e3, 1e4])
    assert tail_exponent(a, 3.0 / a) == pytest.approx(-1.0)
    assert tail_exponent(a, np.zeros(3)) is None
