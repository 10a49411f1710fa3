import numpy as np
import pytest

from thermalzeno.bath import BathModel
from thermalzeno.operators import ket_bra, random_hermitian
from thermalzeno.presets import three_level_bands, three_level_model
from thermalzeno.system import (
    SystemModel,
    band_partition,
    discover_bands,
    jump_operator,
    jump_operators,
    projector_from_indices,
    reconstruct_coupling,
    spectrum,
    validate_band_hypotheses,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def test_spectrum_degenerate():
    spec = spectrum(np.diag([0.0, 0.0, 5.0]), 1e-9)
    np.testing.assert_allclose(spec.energies, [0.0, 5.0])
    assert [round(np.trace(P).real) for P in spec.projectors] == [2, 1]
    np.testing.assert_allclose(spec.bohr_frequencies, [-5.0, 0.0, 5.0])


def test_spectrum_distinct_levels():
    nu = np.array([0.3, 1.1, 4.0])
    spec = spectrum(np.diag(nu))
    w = {nu[i] - nu[j] for i in range(3) for j in range(3)}
    np.testing.assert_allclose(spec.bohr_frequencies, sorted(w), atol=1e-14)
    assert len(spec.projectors) == 3


def test_spectrum_sigma_x():
    spec = spectrum(SX)
    np.testing.assert_allclose(spec.energies, [-1, 1], atol=1e-15)
    np.testing.assert_allclose(spec.bohr_frequencies, [-2, 0, 2], atol=1e-14)


def test_spectrum_rejects_non_hermitian():
    with pytest.raises(ValueError):
        spectrum(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("seed", range(200))
def test_projectors_resolve_identity(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 9))
    H = random_hermitian(d, rng)
    if seed % 3 == 0 and d > 2:  # force a degeneracy
        w, V = np.linalg.eigh(H)
        w[1] = w[0]
        H = V @ np.diag(w) @ V.conj().T
    spec = spectrum(H)
    np.testing.assert_allclose(sum(spec.projectors), np.eye(d), atol=1e-10)
    for i, P in enumerate(spec.projectors):
        np.testing.assert_allclose(P @ P, P, atol=1e-10)
        for j, Q in enumerate(spec.projectors):
            if i != j:
                np.testing.assert_allclose(P @ Q, 0, atol=1e-10)
    assert np.all(np.diff(spec.energies) > 0)
    np.testing.assert_array_equal(spec.bohr_frequencies, -spec.bohr_frequencies[::-1])
    assert 0.0 in spec.bohr_frequencies


def test_jump_operator_diagonal_coupling():
    H = np.diag([0.0, 1.0, 3.0])
    A = np.diag([0.5, -1.0, 2.0])
    spec = spectrum(H)
    np.testing.assert_allclose(jump_operator(spec, A, 0.0), A)
    for w in spec.bohr_frequencies:
        if w != 0:
            np.testing.assert_allclose(jump_operator(spec, A, w), 0)


def test_jump_operator_three_level():
    nu = (0.0, 0.1, 50.0)
    m = three_level_model(nu, 0.0)
    spec = spectrum(m.H)
    np.testing.assert_allclose(jump_operator(spec, m.A, nu[2] - nu[1]), ket_bra(1, 2, 3), atol=1e-15)
    np.testing.assert_allclose(jump_operator(spec, m.A, nu[1] - nu[2]), ket_bra(2, 1, 3), atol=1e-15)
    with pytest.raises(ValueError):
        jump_operator(spec, m.A, 17.0)


def test_reconstruct_examples():
    rng = np.random.default_rng(5)
    H, A = random_hermitian(4, rng), random_hermitian(4, rng)
    spec = spectrum(H)
    np.testing.assert_allclose(reconstruct_coupling(spec, A), A, atol=1e-12 * np.linalg.norm(A, 2))
    np.testing.assert_array_equal(reconstruct_coupling(spec, np.zeros((4, 4))), 0)


def test_jump_operator_properties_random():
    rng = np.random.default_rng(6)
    for _ in range(50):
        d = int(rng.integers(2, 7))
        H, A = random_hermitian(d, rng), random_hermitian(d, rng)
        spec = spectrum(H)
        jumps = dict(jump_operators(spec, A))
        for w, Aw in jumps.items():
            np.testing.assert_allclose(jumps[-w if w != 0 else 0.0], Aw.conj().T, atol=1e-12)
            for i, (ei, Pi) in enumerate(spec.levels):
                for j, (ej, Pj) in enumerate(spec.levels):
                    if abs((ej - ei) - w) > 1e-8:
                        np.testing.assert_allclose(Pi @ Aw @ Pj, 0, atol=1e-12)


def test_system_model_validation():
    with pytest.raises(ValueError):
        SystemModel(np.diag([0.0, 1.0]), np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        SystemModel(np.eye(2), np.eye(3))
    m = SystemModel(np.diag([0.0, 1.0]), SX, lamb_shift=np.diag([0.1, 0.0]))
    np.testing.assert_allclose(m.effective_hamiltonian, np.diag([0.1, 1.0]))


def test_band_hypotheses_three_level():
    m = three_level_model((0.0, 0.1, 50.0), 1.0)
    spec = spectrum(m.H)
    part = band_partition(spec, *three_level_bands())
    rep = validate_band_hypotheses(spec, m.A, part, 1e-10, BathModel(1e-3, 1e5))
    assert rep.intra_band_1 == pytest.approx(0, abs=1e-12)
    assert rep.intra_band_2 == pytest.approx(0, abs=1e-12)
    assert rep.inter_band == pytest.approx(1.0)
    assert rep.holds
    assert rep.validity_indicator == pytest.approx(1e-3 * 1e5 * part.delta_omega / part.omega0**2)


def test_band_hypotheses_fail_with_intraband_element():
    m = three_level_model((0.0, 0.1, 50.0), 0.0)
    A = m.A.copy()
    A[0, 0] = 0.37
    spec = spectrum(m.H)
    part = band_partition(spec, *three_level_bands())
    rep = validate_band_hypotheses(spec, A, part)
    assert not rep.holds
    assert rep.intra_band_1 == pytest.approx(0.37)


def test_two_band_geometry():
    d_, w0 = 0.05, 3.0
    H = np.diag([0.0, d_, w0, w0 + d_])
    A = np.zeros((4, 4))
    A[:2, 2:] = 1.0
    A = A + A.T
    spec = spectrum(H)
    P1, P2 = projector_from_indices([0, 1], 4), projector_from_indices([2, 3], 4)
    part = band_partition(spec, P1, P2)
    # inter-band frequencies: w0 - d, w0, w0, w0 + d
    assert part.delta_omega == pytest.approx(2 * d_)
    assert part.omega0 == pytest.approx(w0)
    assert part.max_intraband_frequency == pytest.approx(d_)
    assert validate_band_hypotheses(spec, A, part).holds
    assert w0 in [pytest.approx(w) for w in spec.coincident_frequencies]


def test_band_partition_rejects_bad_projectors():
    spec = spectrum(np.diag([0.0, 1.0, 2.0]))
    with pytest.raises(ValueError):
        band_partition(spec, projector_from_indices([0], 3), projector_from_indices([2], 3))
    # eigenspace straddling both bands
    spec = spectrum(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 5]], dtype=complex))
    with pytest.raises(ValueError):
        band_partition(spec, projector_from_indices([0], 3), projector_from_indices([1, 2], 3))


def test_weighted_band_centre_recorded():
    spec = spectrum(np.diag([0.0, 0.0, 0.2, 10.0]))
    part = band_partition(spec, projector_from_indices([0, 1, 2], 4), projector_from_indices([3], 4))
    assert part.omega0 == pytest.approx(10.0 - 0.1)
    assert part.omega0_weighted == pytest.approx(10.0 - 0.2 / 3)


def test_discover_bands():
    spec = spectrum(np.diag([0.0, 0.1, 50.0]))
    P1, P2 = discover_bands(spec)
    np.testing.assert_allclose(P1, projector_from_indices([0, 1], 3))
    np.testing.assert_allclose(P2, projector_from_indices([2], 3))
