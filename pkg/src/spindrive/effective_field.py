"""Time-dependent coupling coefficients nu_a, gamma_a and the effective
magnetic operator they generate.

The coefficients derive from the logarithmic time derivative of the evolved
second-order amplitude.  The ratio is taken with the initial-state
components folded in,

    Y_a = [U (A' o psi0)]_a / [U (A o psi0)]_a,

which is what makes the effective-operator picture reproduce the
Schrodinger-picture state exactly (for a uniform initial spinor this
reduces to the bare-amplitude ratio).  nu = Re Y drives amplitude
redistribution, gamma = Im Y drives phases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qm_core import build_N, commutator
from .raman import TimeGrid

DENOMINATOR_GUARD = 0.1


@dataclass
class EffectiveFields:
    grid: TimeGrid
    nu: np.ndarray      # (count, n) real
    gamma: np.ndarray   # (count, n) real
    support: np.ndarray  # (n,) bool, components carried by the initial state


def central_difference(a: np.ndarray, dt: float) -> np.ndarray:
    """Second-order derivative along axis 0 (one-sided at the ends)."""
    d = np.empty_like(a)
    d[1:-1] = (a[2:] - a[:-2]) / (2 * dt)
    d[0] = (a[1] - a[0]) / dt
    d[-1] = (a[-1] - a[-2]) / dt
    return d


def compute_fields(grid: TimeGrid, amplitudes: np.ndarray,
                   u_phases: tuple[np.ndarray, np.ndarray],
                   psi0: np.ndarray) -> EffectiveFields:
    """nu_a(t), gamma_a(t) from the amplitude spinor and the field-free
    evolution, given as the eigendecomposition (w, v) of the magnetic
    Hamiltonian (the propagator is exp(-i h t)).

    Components off the support of psi0 carry no amplitude and are excluded.
    Raises when the perturbative-regime guard |[U A]_a| > 0.1 trips.
    """
    w, v = u_phases
    t = grid.times
    support = np.abs(psi0) > 1e-12

    a_prime = central_difference(amplitudes, grid.dt)
    phases = np.exp(-1j * np.outer(t, w))

    def evolve(x):
        return (phases * (x @ v.conj())) @ v.T

    ua_bare = evolve(amplitudes)
    if np.min(np.abs(ua_bare[:, support])) < DENOMINATOR_GUARD:
        raise ValueError(
            "perturbation too strong: |[U A]_a| fell below "
            f"{DENOMINATOR_GUARD} (min {np.min(np.abs(ua_bare[:, support])):.3g})")

    num = evolve(a_prime * psi0)
    den = evolve(amplitudes * psi0)
    y = np.zeros_like(num)
    y[:, support] = num[:, support] / den[:, support]

    return EffectiveFields(grid, y.real.copy(), y.imag.copy(), support)


def fields_at(fields: EffectiveFields, index: int) -> tuple[np.ndarray, np.ndarray]:
    return fields.nu[index], fields.gamma[index]


def build_HJ(nu: np.ndarray, gamma: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Effective magnetic operator for coefficient vectors nu, gamma and the
    current normalized state psi:

        H_J = -sum_a gamma_a N_a
              + 1/2 sum_{a,b} (nu_a - nu_b) (<N_ab->N_ab+ - <N_ab+>N_ab-)

    with expectations taken in psi.
    """
    n = len(psi)
    h = np.zeros((n, n), dtype=complex)
    for a in range(1, n + 1):
        h -= gamma[a - 1] * build_N(a, a, "+", n)
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            np_ab = build_N(a, b, "+", n)
            nm_ab = build_N(a, b, "-", n)
            exp_p = np.vdot(psi, np_ab @ psi).real
            exp_m = np.vdot(psi, nm_ab @ psi).real
            h += 0.5 * (nu[a - 1] - nu[b - 1]) * (exp_m * np_ab - exp_p * nm_ab)
    return h


def rho_from_psi(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def expectations_from_rho(rho: np.ndarray) -> dict:
    """All <N_ab+> and <N_ab-> packed as {"a,b,+": value}."""
    n = rho.shape[0]
    out = {}
    for a in range(1, n + 1):
        out[f"{a},{a},+"] = rho[a - 1, a - 1].real
        for b in range(a + 1, n + 1):
            out[f"{a},{b},+"] = 2 * rho[a - 1, b - 1].real
            out[f"{a},{b},-"] = -2 * rho[a - 1, b - 1].imag
    return out


def eom_rhs(nu: np.ndarray, gamma: np.ndarray, rho: np.ndarray,
            h_m: np.ndarray) -> np.ndarray:
    """Heisenberg right-hand side for the full expectation set.

    The Hermitian matrix rho with rho_ab = P_a P_b^* carries every <N_ab+->
    through <N_ab+> = 2 Re rho_ab, <N_ab-> = -2 Im rho_ab (b > a).  The
    coefficient part of the motion is diagonal in the (a, b) pairs,

        rho_ab' = [nu_a + nu_b - 2 sum_k nu_k rho_kk + i(gamma_a - gamma_b)] rho_ab,

    and the magnetic Hamiltonian enters through the explicit commutator.
    """
    trace_drive = 2 * float(np.sum(nu * rho.diagonal().real))
    coeff = (nu[:, None] + nu[None, :] - trace_drive) + 1j * (gamma[:, None] - gamma[None, :])
    return coeff * rho - 1j * commutator(h_m, rho)
