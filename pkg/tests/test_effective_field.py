import numpy as np
import pytest

from spindrive.effective_field import (build_HJ, central_difference,
                                       compute_fields, eom_rhs,
                                       expectations_from_rho, rho_from_psi)
from spindrive.qm_core import build_N, commutator
from spindrive.raman import TimeGrid


def identity_phases(n):
    return np.zeros(n), np.eye(n)


def test_unit_amplitudes_give_zero_fields():
    grid = TimeGrid(0.0, 0.1, 101)
    amps = np.ones((101, 4), dtype=complex)
    psi0 = np.array([0.5, 0.5, 0.5, 0.5])
    fields = compute_fields(grid, amps, identity_phases(4), psi0)
    assert np.abs(fields.nu).max() == 0.0
    assert np.abs(fields.gamma).max() == 0.0


def test_fields_recover_logarithmic_derivative():
    # A_a(t) = exp(z_a t) with U = 1 must give Y_a = z_a
    grid = TimeGrid(0.0, 0.01, 401)
    z = np.array([0.3 + 0.2j, -0.1 + 0.05j])
    amps = np.exp(np.outer(grid.times, z))
    psi0 = np.array([0.6, 0.8])
    fields = compute_fields(grid, amps, identity_phases(2), psi0)
    sl = slice(1, -1)
    assert np.abs(fields.nu[sl] - z.real).max() < 1e-4
    assert np.abs(fields.gamma[sl] - z.imag).max() < 1e-4


def test_off_support_components_excluded():
    grid = TimeGrid(0.0, 0.1, 11)
    amps = np.ones((11, 3), dtype=complex)
    amps[:, 1] = 0.0  # would be 0/0 if not excluded
    psi0 = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)
    fields = compute_fields(grid, amps, identity_phases(3), psi0)
    assert not fields.support[1]
    assert np.all(fields.nu[:, 1] == 0.0)


def test_perturbation_guard_trips():
    grid = TimeGrid(0.0, 0.1, 11)
    amps = np.full((11, 2), 0.05, dtype=complex)
    psi0 = np.array([1.0, 1.0]) / np.sqrt(2)
    with pytest.raises(ValueError, match="perturbation too strong"):
        compute_fields(grid, amps, identity_phases(2), psi0)


def test_central_difference_second_order():
    t = np.linspace(0, 1, 201)
    y = np.sin(3 * t)[:, None]
    d = central_difference(y, t[1] - t[0])
    assert np.abs(d[1:-1, 0] - 3 * np.cos(3 * t[1:-1])).max() < 1e-3


def random_state(rng, n=4):
    psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return psi / np.linalg.norm(psi)


def test_build_HJ_matches_explicit_matrix():
    # H_J entries: diagonal -gamma_a, off-diagonal i P_a P_b^* (nu_a - nu_b)
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = rng.integers(2, 6)
        psi = random_state(rng, n)
        nu = rng.standard_normal(n)
        gamma = rng.standard_normal(n)
        h = build_HJ(nu, gamma, psi)
        want = np.zeros((n, n), dtype=complex)
        for a in range(n):
            want[a, a] = -gamma[a]
            for b in range(n):
                if a != b:
                    want[a, b] = 1j * psi[a] * psi[b].conj() * (nu[a] - nu[b])
        assert np.abs(h - want).max() < 1e-13


def test_build_HJ_hermitian():
    rng = np.random.default_rng(8)
    for _ in range(50):
        psi = random_state(rng)
        h = build_HJ(rng.standard_normal(4), rng.standard_normal(4), psi)
        assert np.abs(h - h.T.conj()).max() < 1e-12


def test_build_HJ_uniform_coefficients_pure_phase():
    rng = np.random.default_rng(9)
    psi = random_state(rng)
    h = build_HJ(np.full(4, 0.3), np.full(4, 0.7), psi)
    assert np.abs(h + 0.7 * np.eye(4)).max() < 1e-14


def test_build_HJ_single_component_state_is_diagonal():
    psi = np.zeros(4, dtype=complex)
    psi[2] = 1.0
    h = build_HJ(np.array([0.1, 0.2, 0.3, 0.4]), np.zeros(4), psi)
    assert np.abs(h - np.diag(np.diag(h))).max() < 1e-15


def test_eom_rhs_equals_commutator_oracle():
    # the coefficient flow must equal -i<[N, H_J + H_m]> built explicitly
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(1000):
        n = 4
        psi = random_state(rng, n)
        nu = rng.standard_normal(n)
        gamma = rng.standard_normal(n)
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h_m = (a + a.T.conj()) / 2
        rho = rho_from_psi(psi)
        drho = eom_rhs(nu, gamma, rho, h_m)
        h_tot = build_HJ(nu, gamma, psi) + h_m
        for aa in range(1, n + 1):
            for bb in range(aa, n + 1):
                for sign in ("+",) if aa == bb else ("+", "-"):
                    nop = build_N(aa, bb, sign, n)
                    want = (-1j * np.vdot(psi, commutator(nop, h_tot) @ psi)).real
                    if sign == "+":
                        got = 2 * drho[aa - 1, bb - 1].real if aa != bb else \
                            drho[aa - 1, aa - 1].real
                    else:
                        got = -2 * drho[aa - 1, bb - 1].imag
                    worst = max(worst, abs(got - want))
    assert worst < 1e-10


def test_eom_rhs_zero_fields_pure_heisenberg():
    rng = np.random.default_rng(13)
    psi = random_state(rng)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h_m = (a + a.T.conj()) / 2
    rho = rho_from_psi(psi)
    drho = eom_rhs(np.zeros(4), np.zeros(4), rho, h_m)
    assert np.abs(drho + 1j * commutator(h_m, rho)).max() < 1e-14


def test_eom_rhs_moment_along_z_stationary():
    # single populated component and [H_m, N_q] = 0: nothing moves
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1.0
    h_m = np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex)
    rho = rho_from_psi(psi)
    drho = eom_rhs(np.array([0.3, 0.1, 0.2, 0.5]),
                   np.array([0.05, 0.4, 0.1, 0.2]), rho, h_m)
    assert np.abs(drho).max() < 1e-15


def test_expectations_from_rho_roundtrip():
    rng = np.random.default_rng(14)
    psi = random_state(rng)
    exps = expectations_from_rho(rho_from_psi(psi))
    for (a, b) in [(1, 3), (2, 4)]:
        want = 2 * (psi[a - 1].conj() * psi[b - 1]).real
        assert exps[f"{a},{b},+"] == pytest.approx(want, abs=1e-14)
