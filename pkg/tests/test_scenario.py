import math

import numpy as np
import pytest

from wigner_bell import linalg
from wigner_bell.relativity import WignerRotation, spin_half_rep
from wigner_bell.scenario import (
    MomentumBranch,
    MomentumScenario,
    MomentumSetting,
    branch_unitary,
    make_generalized_ghz_spin,
    make_generalized_w_spin,
    make_momentum_branches,
    make_scenario,
    omega_from_speeds,
    transform_scenario,
    transform_scenario_full,
)

from conftest import random_state

PI = math.pi
SETTINGS = list(MomentumSetting)


def test_ghz_two_qubit_maximal():
    np.testing.assert_allclose(make_generalized_ghz_spin(2, PI / 4), np.array([1, 0, 0, 1]) / math.sqrt(2), atol=1e-15)


def test_ghz_separable_limit():
    psi = make_generalized_ghz_spin(3, 0.0)
    np.testing.assert_array_equal(psi, np.eye(8)[0])


def test_ghz_near_separable():
    psi = make_generalized_ghz_spin(3, PI / 128)
    assert psi[0] == math.cos(PI / 128) and psi[7] == math.sin(PI / 128)
    assert np.count_nonzero(psi) == 2


def test_ghz_rejects_other_sizes():
    with pytest.raises(ValueError):
        make_generalized_ghz_spin(4, 0.1)


def test_w_equal_weights():
    psi = make_generalized_w_spin(math.acos(1 / math.sqrt(3)), PI / 4)
    np.testing.assert_allclose(psi[[1, 2, 4]], [1 / math.sqrt(3)] * 3, atol=1e-15)
    assert abs(np.linalg.norm(psi) - 1) < 1e-12


def test_w_separable_limit():
    np.testing.assert_allclose(make_generalized_w_spin(PI / 2, 0.0), np.eye(8)[1], atol=1e-16)


def test_w_near_separable():
    psi = make_generalized_w_spin(15 * PI / 32, PI / 32)
    assert abs(np.linalg.norm(psi) - 1) < 1e-12
    assert abs(psi[1]) > 0.98


def test_branches_two_opposite():
    b1, b2 = make_momentum_branches("two-opposite", PI / 4)
    assert b1.directions == ((0, 0, 1), (0, 0, -1))
    assert b2.directions == ((0, 0, -1), (0, 0, 1))
    assert b1.amplitude == pytest.approx(1 / math.sqrt(2)) and b2.amplitude == pytest.approx(1 / math.sqrt(2))


def test_branches_three_symmetric():
    b1, b2 = make_momentum_branches(MomentumSetting.THREE_SYMMETRIC, 0.3)
    s3 = math.sqrt(3) / 2
    np.testing.assert_allclose(b1.directions, [(0, 0, 1), (0, s3, -0.5), (0, -s3, -0.5)], atol=1e-15)
    np.testing.assert_allclose(b2.directions, -np.array(b1.directions), atol=1e-15)


def test_branches_two_same_at_zero_keeps_empty_branch():
    branches = make_momentum_branches("two-same", 0.0)
    assert len(branches) == 2
    assert branches[1].amplitude == 0
    s = MomentumScenario(2, tuple(branches), make_generalized_ghz_spin(2, PI / 4))
    assert len(s.branches) == 2


def test_unknown_setting():
    with pytest.raises(ValueError, match="unknown momentum setting"):
        make_momentum_branches("four-ways", 0.1)


def test_duplicate_branches_are_merged():
    d = ((0.0, 0.0, 1.0), (0.0, 0.0, -1.0))
    s = MomentumScenario(
        2,
        (MomentumBranch(0.5, d), MomentumBranch(0.1, d), MomentumBranch(0.8 * 1j, tuple(reversed(d)))),
        make_generalized_ghz_spin(2, 0.2),
    )
    assert len(s.branches) == 2
    assert s.branches[0].amplitude == pytest.approx(0.6)


def test_scenario_validation():
    spin = make_generalized_ghz_spin(2, 0.2)
    good = make_momentum_branches("two-opposite", 0.4)
    with pytest.raises(ValueError, match="squared norm"):
        MomentumScenario(2, (good[0],), spin)
    with pytest.raises(ValueError, match="yz-plane"):
        MomentumScenario(2, (MomentumBranch(1.0, ((1.0, 0, 0), (0, 0, 1.0))),), spin)
    with pytest.raises(ValueError, match="unit vector"):
        MomentumBranch(1.0, ((0, 0, 2.0),))
    with pytest.raises(ValueError, match="dimension"):
        MomentumScenario(2, tuple(good), make_generalized_ghz_spin(3, 0.2))
    with pytest.raises(ValueError):
        MomentumScenario(4, tuple(good), spin)


def test_omega_from_speeds():
    assert omega_from_speeds(0.6, 0.8) == pytest.approx(math.atan(12 / 35), abs=1e-15)


def test_zero_angle_returns_initial_projector():
    psi = make_generalized_w_spin(0.7, 0.3)
    s = make_scenario("three-symmetric", 0.5, psi)
    np.testing.assert_allclose(transform_scenario(s, 0.0), linalg.projector(psi), atol=1e-15)


def test_single_branch_stays_pure():
    s = make_scenario("two-opposite", 0.0, make_generalized_ghz_spin(2, PI / 7))
    for omega in [0.3, 1.0, 1.5]:
        rho = transform_scenario(s, omega)
        assert linalg.purity(rho) == pytest.approx(1.0, abs=1e-12)
        u = branch_unitary(s.branches[0].directions, omega)
        np.testing.assert_allclose(rho, linalg.projector(u @ s.spin_state), atol=1e-14)


@pytest.mark.parametrize("omega", [0.0, 0.4, 1.2, 1.5690])
def test_maximal_two_opposite_matches_full_space(omega):
    s = make_scenario("two-opposite", PI / 4, make_generalized_ghz_spin(2, PI / 4))
    np.testing.assert_allclose(transform_scenario(s, omega), transform_scenario_full(s, omega), atol=1e-10)


@pytest.mark.parametrize("setting", SETTINGS)
def test_density_invariants_on_grid(setting):
    rng = np.random.default_rng(5)
    s = make_scenario(setting, 0.6, random_state(rng, 2**setting.n_qubits))
    for omega in np.linspace(0, PI / 2, 100, endpoint=False):
        rho = transform_scenario(s, omega)
        assert linalg.is_hermitian(rho)
        assert abs(np.trace(rho) - 1) < 1e-12
        assert linalg.hermitian_eigenvalues(rho)[-1] >= -1e-10


@pytest.mark.parametrize("setting", SETTINGS)
def test_opposite_branch_unitaries_are_adjoint(setting):
    b1, b2 = make_momentum_branches(setting, 0.3)
    for omega in [0.2, 0.9]:
        u1 = branch_unitary(b1.directions, omega)
        u2 = branch_unitary(b2.directions, omega)
        np.testing.assert_allclose(u2, u1.conj().T, atol=1e-15)
        assert np.abs(u1.conj().T @ u1 - np.eye(len(u1))).max() <= 1e-12


def test_two_same_unitaries_are_u_tensor_u():
    b1, b2 = make_momentum_branches("two-same", PI / 4)
    u = spin_half_rep(WignerRotation(0.8, (0.0, -1.0, 0.0)))
    np.testing.assert_allclose(branch_unitary(b1.directions, 0.8), np.kron(u, u), atol=1e-15)
    np.testing.assert_allclose(branch_unitary(b2.directions, 0.8), np.kron(u.conj().T, u.conj().T), atol=1e-15)


@pytest.mark.parametrize("setting", SETTINGS)
def test_entries_continuous_in_omega(setting):
    # Each factor's derivative has norm 1/2, so |d rho / d omega| <= n_qubits entrywise.
    s = make_scenario(setting, PI / 5, make_generalized_ghz_spin(setting.n_qubits, PI / 9))
    grid = np.linspace(0, PI / 2 * 0.999, 64)
    rhos = np.array([transform_scenario(s, om) for om in grid])
    steps = np.abs(np.diff(rhos, axis=0)).max(axis=(1, 2))
    assert np.all(steps <= setting.n_qubits * np.diff(grid))


def test_transform_rejects_out_of_range_omega():
    s = make_scenario("two-same", 0.3, make_generalized_ghz_spin(2, 0.3))
    for bad in (-0.1, PI / 2, 2.0):
        with pytest.raises(ValueError):
            transform_scenario(s, bad)
