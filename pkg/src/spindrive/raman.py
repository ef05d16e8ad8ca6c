"""Second-order Raman-amplitude engines on a uniform time grid.

Both engines evaluate nested cumulative time integrals of the pulse carrier
against virtual-state phase factors.  The inner integral is accumulated once
as a prefix sum, then the outer integral is accumulated over it, so the cost
is linear in the grid size.

Sign conventions: the second-order amplitude depletes the initial-state
amplitude (second-order perturbation theory with a Hermitian coupling), and
the virtual state propagates forward between absorption at t'' and emission
at t', i.e. the inner integrand carries the inverse excited-state
propagator.  The published forms of these integrals are loose about both
points; the conventions here are fixed by the Hermiticity of the coupling
and validated against the Schrodinger-picture oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pulse import PulseSpec, carrier_field
from .qm_core import propagator_phases

CARRIER_POINTS_MIN = 40  # grid points per carrier period, minimum
PLATEAU_RTOL = 1e-8


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_start + k*dt, k = 0..count-1."""

    t_start: float
    dt: float
    count: int

    def __post_init__(self):
        if self.dt <= 0 or self.count < 2:
            raise ValueError("need dt > 0 and at least two grid points")

    @property
    def t_end(self) -> float:
        return self.t_start + (self.count - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.count)

    @classmethod
    def spanning(cls, t_start: float, t_end: float, dt: float) -> "TimeGrid":
        count = int(np.ceil((t_end - t_start) / dt)) + 1
        return cls(t_start, dt, count)

    def check_resolves(self, spec: PulseSpec):
        period = 2 * np.pi / spec.omega0
        if self.dt > period / CARRIER_POINTS_MIN:
            raise ValueError(
                f"grid dt={self.dt:g} too coarse for carrier period {period:g} "
                f"(need dt <= period/{CARRIER_POINTS_MIN})")
        if self.t_start > spec.center - 3 * spec.width or \
           self.t_end < spec.center + 3 * spec.width:
            raise ValueError("grid must span at least +-3T around the pulse center")


@dataclass(frozen=True)
class IntermediateLevel:
    """One virtual excited sublevel: energy above the unsplit ground level,
    plus squared dipole weights from the spin-up / spin-down ground states."""

    energy: float
    weight_up: float
    weight_down: float

    def __post_init__(self):
        if self.weight_up < 0 or self.weight_down < 0:
            raise ValueError("dipole weights must be >= 0")


@dataclass
class RamanResult:
    grid: TimeGrid
    amplitudes: np.ndarray  # (count, n) complex, elements A_a(t)
    converged_tail: bool


def cumtrapz(y: np.ndarray, dt: float) -> np.ndarray:
    """Cumulative trapezoid along axis 0, first element zero."""
    out = np.zeros_like(y)
    np.cumsum((y[1:] + y[:-1]) * (dt / 2), axis=0, out=out[1:])
    return out


def _tail_converged(grid: TimeGrid, a: np.ndarray, spec: PulseSpec) -> bool:
    t = grid.times
    tail = t > spec.center + 3 * spec.width
    if not np.any(tail):
        return False
    drift = np.abs(a[tail] - a[-1]).max()
    scale = max(np.abs(a[-1]).max(), 1.0)
    return bool(drift / scale < PLATEAU_RTOL)


def single_spin_A(spec: PulseSpec, levels: list[IntermediateLevel],
                  b_field: float, grid: TimeGrid) -> RamanResult:
    """Raman amplitude spinor A(t) for a spin-1/2 ground doublet.

    ``b_field`` is the Zeeman splitting (a.u.) of the magnetic Hamiltonian
    -B Sx used for the ground-state evolution.  Level energies are measured
    from the unsplit ground level; the B-dependent ground phase is explicit.
    """
    if not levels:
        raise ValueError("need at least one intermediate level")
    grid.check_resolves(spec)
    t = grid.times
    f_t = carrier_field(spec, t)

    v_up = np.zeros(grid.count, dtype=complex)
    v_dn = np.zeros(grid.count, dtype=complex)
    for lv in levels:
        # inner: integral of exp(+i dw t'') exp(+i B t''/2) F(t'') up to t'
        inner = cumtrapz(np.exp(1j * (lv.energy + b_field / 2) * t) * f_t, grid.dt)
        g_l = np.exp(-1j * lv.energy * t) * f_t * inner
        v_up += lv.weight_up * g_l
        v_dn += lv.weight_down * g_l

    # outer operator exp(-i B Sx t') mixes the two components; work in the
    # Sx eigenbasis (1,1)/sqrt2, (1,-1)/sqrt2
    s_plus = (v_up + v_dn) / 2
    s_minus = (v_up - v_dn) / 2
    ph_plus = np.exp(-1j * (b_field / 2) * t) * s_plus
    ph_minus = np.exp(+1j * (b_field / 2) * t) * s_minus
    w_up = ph_plus + ph_minus
    w_dn = ph_plus - ph_minus

    pref = -((spec.amplitude / spec.omega0) ** 2)
    a = 1.0 + pref * cumtrapz(np.stack([w_up, w_dn], axis=1), grid.dt)
    return RamanResult(grid, a, _tail_converged(grid, a, spec))


def dipole_D() -> np.ndarray:
    """Rectangular dipole map from the J=3/2 ground space to the J=5/2
    excited space for absorption of one left-circular photon (J_z -> J_z+1).
    Basis ordering is J_z-descending in both spaces."""
    d = np.zeros((6, 4))
    d[0, 0] = -np.sqrt(2 / 3)
    d[1, 1] = -np.sqrt(1 / 5)
    d[2, 2] = -np.sqrt(1 / 10)
    d[3, 3] = -np.sqrt(1 / 30)
    d.flags.writeable = False
    return d


def antiferro_C(spec: PulseSpec, h_ground: np.ndarray, h_excited: np.ndarray,
                psi0: np.ndarray, grid: TimeGrid, d0: float = 1.0) -> np.ndarray:
    """Second-order transition spinor C(t) for one sublattice.

    ``h_ground`` is the frozen effective magnetic Hamiltonian of the ground
    J=3/2 manifold (4x4), ``h_excited`` the excited J=5/2 crystal-field
    Hamiltonian including the electronic gap (6x6).  The element-wise Raman
    amplitude follows as A_a = 1 - C_a / psi0_a on the support of psi0.
    """
    if h_ground.shape != (4, 4) or h_excited.shape != (6, 6):
        raise ValueError("ground space must be 4-dimensional, excited 6-dimensional")
    grid.check_resolves(spec)
    d_op = dipole_D()
    w1, v1 = propagator_phases(h_ground)
    we, ve = propagator_phases(h_excited)
    t = grid.times
    f_t = carrier_field(spec, t)

    d_tilde = ve.T.conj() @ d_op @ v1    # dipole map between eigenbases
    psi0_t = v1.T.conj() @ psi0

    # inner: s(t') = int^t' F U_e^-1(t'') D U1(t'') psi0 dt''
    up = (np.exp(-1j * np.outer(t, w1)) * psi0_t) @ d_tilde.T
    s = cumtrapz(f_t[:, None] * np.exp(1j * np.outer(t, we)) * up, grid.dt)

    # outer: C = E^2 |d0|^2 int F U1^-1(t') D^T U_e(t') s(t') dt'
    down = (np.exp(-1j * np.outer(t, we)) * s) @ d_tilde
    c_tilde = cumtrapz(f_t[:, None] * np.exp(1j * np.outer(t, w1)) * down, grid.dt)
    pref = (spec.amplitude * abs(d0)) ** 2
    return pref * (c_tilde @ v1.T)


def amplitude_from_C(c: np.ndarray, psi0: np.ndarray,
                     support_tol: float = 1e-12) -> tuple[np.ndarray, float]:
    """Element-wise A_a(t) = 1 - C_a(t)/psi0_a, with A_a = 0 off the support.

    Returns (amplitudes, leakage) where leakage is the largest |C_a| on
    components with psi0_a = 0 (light scattering amplitude outside the
    initial state's support, tracked as a diagnostic).
    """
    support = np.abs(psi0) > support_tol
    a = np.zeros_like(c)
    a[:, support] = 1.0 - c[:, support] / psi0[support]
    leakage = float(np.abs(c[:, ~support]).max()) if (~support).any() else 0.0
    return a, leakage
