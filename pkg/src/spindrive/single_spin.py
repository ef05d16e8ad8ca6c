"""Spin-1/2 in a static field along x, driven through a split 2p manifold.

The virtual manifold is the six-level 2p system split by spin-orbit coupling
(constant lambda) and the Zeeman interaction; its energies are the roots of
a pair of cubics and its circular-dipole weights follow from the eigenvector
components.  The ground doublet evolves under H_m = -B Sx, whose Ehrenfest
flow for the spin vector is

    Sx' =  f Sx Sz - g Sy
    Sy' =  f Sy Sz + g Sx + B Sz
    Sz' = -f (Sx^2 + Sy^2) - B Sy

with f = 2 Re(Y2 - Y1), g = Im(Y2 - Y1).  (The published form of these
equations carries an inconsistent sign on the f terms; the flow above is
the commutator flow of the effective operator and is the one that matches
the Schrodinger-picture propagation.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import units
from .effective_field import EffectiveFields, compute_fields
from .pulse import PulseSpec
from .raman import IntermediateLevel, RamanResult, TimeGrid, single_spin_A

SX = np.array([[0, 1], [1, 0]], dtype=complex) / 2
SY = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
SZ = np.array([[1, 0], [0, -1]], dtype=complex) / 2

#: spin up along +x, the field-free ground state of H_m = -B Sx
PSI0 = np.array([1.0, 1.0]) / math.sqrt(2)


@dataclass(frozen=True)
class SingleSpinSpec:
    """Scenario parameters (atomic units; use the constructors for lab units).

    ``b_field`` is the Zeeman splitting of the ground doublet, ``soc`` the
    2p spin-orbit constant, ``gap`` the unsplit 2p excitation energy; the
    carrier is resonant with the unsplit gap.
    """

    b_field: float
    soc: float
    gap: float
    pulse: PulseSpec
    mu: float = -0.5

    @classmethod
    def from_lab(cls, b_tesla: float, soc_mev: float, gap_ev: float,
                 fluence_mj_cm2: float, width_fs: float) -> "SingleSpinSpec":
        from .pulse import amplitude_from_fluence
        width = units.fs_to_au(width_fs)
        amp = amplitude_from_fluence(fluence_mj_cm2, width_fs, gap_ev)
        pulse = PulseSpec(amplitude=amp, width=width,
                          omega0=units.ev_to_hartree(gap_ev))
        return cls(b_field=units.tesla_to_au(b_tesla),
                   soc=units.mev_to_hartree(soc_mev),
                   gap=units.ev_to_hartree(gap_ev), pulse=pulse)


@dataclass
class LevelScheme:
    """Diagonalized 2p manifold: energies relative to the unsplit 2p level
    and per-state (alpha, beta, gamma) amplitudes, pair-ket normalized."""

    energies: np.ndarray   # (6,)
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def intermediate_levels(self, gap: float) -> list[IntermediateLevel]:
        return [IntermediateLevel(gap + e, a * a, b * b)
                for e, a, b in zip(self.energies, self.alpha, self.beta)]


def _weights_soc_zero(b_field: float) -> LevelScheme:
    # lambda = 0: per branch (field bb = +-B) the roots are {0, bb/2, -bb}
    # and every level couples equally to both spin channels, so no amount
    # of light can rotate the spin.
    s8 = 1 / math.sqrt(8)
    energies, alpha, beta, gamma = [], [], [], []
    for branch in (+1.0, -1.0):
        bb = branch * b_field
        energies += [0.0, bb / 2, -bb]
        alpha += [s8, -0.5, -s8]
        beta += [s8, 0.5, -s8]
        gamma += [-0.5, 0.0, -0.5]
    return LevelScheme(np.array(energies), np.array(alpha), np.array(beta),
                       np.array(gamma))


def _weights_b_zero(soc: float) -> LevelScheme:
    # B = 0: cubic degenerates to roots {soc, -soc/2, -soc/2} per branch and
    # the generic weight formulas hit 0/0; use the analytic limits.
    e = np.array([soc, -soc / 2, -soc / 2] * 2)
    s = 1 / math.sqrt(2)
    alpha = np.array([0.0, 0.5, -0.5] * 2)
    beta = np.array([1 / math.sqrt(3), -s / math.sqrt(6), -s / math.sqrt(6)] * 2)
    gamma = np.array([-1 / math.sqrt(6), -s / math.sqrt(3), -s / math.sqrt(3)] * 2)
    return LevelScheme(e, alpha, beta, gamma)


def solve_2p_levels(b_field: float, soc: float) -> LevelScheme:
    """Six 2p sublevels from the two cubic branches.

    Roots are checked real; a nearly-degenerate cubic (|B| tiny against the
    spin-orbit splitting but nonzero) is rejected because the weight
    formulas become ill-conditioned there.
    """
    if soc == 0.0:
        return _weights_soc_zero(b_field)
    if b_field == 0.0:
        return _weights_b_zero(soc)
    if soc != 0.0 and abs(b_field) < 1e-6 * abs(soc):
        raise ValueError("B too small relative to the spin-orbit splitting; "
                         "use B = 0 exactly (analytic limit)")
    lam = soc
    energies, alphas, betas, gammas = [], [], [], []
    for branch in (+1.0, -1.0):
        # the two parity branches share one cubic with the field reversed
        b = branch * b_field
        coeffs = [1.0,
                  b / 2,
                  -(3 * lam ** 2 / 4 + b * lam / 2 + b ** 2 / 2),
                  -lam ** 3 / 4 + lam * b ** 2 / 4 - 3 * lam ** 2 * b / 8]
        roots = np.roots(coeffs)
        if np.abs(roots.imag).max() > 1e-9 * max(abs(b), abs(lam)):
            raise ValueError(f"cubic produced complex roots: {roots}")
        for e in np.sort(roots.real):
            a = b * (5 * lam / 8 - 3 * e / 4) / (e + lam / 2)
            be = e + b / 4 - lam / 2
            ga = (e - 3 * lam / 2 - b / 2) / math.sqrt(2)
            # pair-ket normalization: 2(a^2 + b^2 + g^2) = 1
            norm = math.sqrt(2 * (a * a + be * be + ga * ga))
            energies.append(e)
            alphas.append(a / norm)
            betas.append(be / norm)
            gammas.append(ga / norm)
    return LevelScheme(np.array(energies), np.array(alphas),
                       np.array(betas), np.array(gammas))


def raman_amplitudes(spec: SingleSpinSpec, grid: TimeGrid) -> RamanResult:
    scheme = solve_2p_levels(spec.b_field, spec.soc)
    levels = scheme.intermediate_levels(spec.gap)
    return single_spin_A(spec.pulse, levels, spec.b_field, grid)


def effective_fields(spec: SingleSpinSpec, grid: TimeGrid,
                     result: RamanResult | None = None) -> EffectiveFields:
    if result is None:
        result = raman_amplitudes(spec, grid)
    h_m = -spec.b_field * SX
    w, v = np.linalg.eigh(h_m)
    return compute_fields(grid, result.amplitudes, (w, v), PSI0)


def spin_fgh(fields: EffectiveFields) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """f = 2 Re(Y2 - Y1), g = Im(Y2 - Y1), h = -2/3 Im(Y2 + Y1)."""
    if fields.nu.shape[1] != 2:
        raise ValueError("spin coefficient functions require a two-level system")
    f = 2 * (fields.nu[:, 1] - fields.nu[:, 0])
    g = fields.gamma[:, 1] - fields.gamma[:, 0]
    h = -(2 / 3) * (fields.gamma[:, 1] + fields.gamma[:, 0])
    return f, g, h


@dataclass
class SpinTrajectory:
    times: np.ndarray
    s: np.ndarray          # (count, 3)
    f: np.ndarray          # sampled drives on the same grid
    g: np.ndarray
    envelope: np.ndarray

    @property
    def sx(self):
        return self.s[:, 0]

    @property
    def sy(self):
        return self.s[:, 1]

    @property
    def sz(self):
        return self.s[:, 2]


def _spin_rhs(s, f, g, b):
    sx, sy, sz = s
    return np.array([
        f * sx * sz - g * sy,
        f * sy * sz + g * sx + b * sz,
        -f * (sx * sx + sy * sy) - b * sy,
    ])


def integrate_spin(grid: TimeGrid, f: np.ndarray, g: np.ndarray, b_field,
                   s0=(0.5, 0.0, 0.0), t_end: float | None = None,
                   dt_coarse: float = 2.0, sample_stride: int = 50,
                   check_step: bool = False) -> SpinTrajectory:
    """RK4 over the spin flow; dense over the driven grid, coarse afterwards.

    The dense phase steps two field samples at a time so RK4 substages land
    exactly on grid points (no interpolation of the drives).  ``b_field``
    may be a constant or a callable of time (used by the sudden-start
    baseline).  ``check_step`` reruns at half step and refuses if the
    endpoint moves by more than 1e-7.
    """
    b_of = b_field if callable(b_field) else (lambda t, b=b_field: b)
    t = grid.times
    if len(t) % 2 == 0:
        raise ValueError("dense grid needs an odd number of points (even step count)")

    def run(stride):
        dt = grid.dt * stride
        times_out = [t[0]]
        s = np.array(s0, dtype=float)
        out = [s.copy()]
        idx = np.arange(0, len(t) - stride, stride)
        for i in idx:
            tm = t[i]
            h = dt
            hm = i + stride // 2
            k1 = _spin_rhs(s, f[i], g[i], b_of(tm))
            k2 = _spin_rhs(s + h / 2 * k1, f[hm], g[hm], b_of(tm + h / 2))
            k3 = _spin_rhs(s + h / 2 * k2, f[hm], g[hm], b_of(tm + h / 2))
            k4 = _spin_rhs(s + h * k3, f[i + stride], g[i + stride], b_of(tm + h))
            s = s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            times_out.append(tm + h)
            out.append(s.copy())
        return np.array(times_out), np.array(out)

    times_dense, s_dense = run(2)
    if check_step:
        # halving the dense step requires the intermediate field samples, so
        # compare the 2-sample step against a 4-sample step instead
        _, s_coarser = run(4)
        if np.abs(s_coarser[-1] - s_dense[-1]).max() > 1e-7:
            raise ValueError("spin integration not converged at this step size")

    keep = np.arange(0, len(times_dense), sample_stride)
    if keep[-1] != len(times_dense) - 1:
        keep = np.append(keep, len(times_dense) - 1)
    times_all = [times_dense[keep]]
    s_all = [s_dense[keep]]

    if t_end is not None and t_end > times_dense[-1]:
        s = s_dense[-1].copy()
        tc = times_dense[-1]
        extra_t, extra_s = [], []
        while tc < t_end - 1e-12:
            h = min(dt_coarse, t_end - tc)
            k1 = _spin_rhs(s, 0.0, 0.0, b_of(tc))
            k2 = _spin_rhs(s + h / 2 * k1, 0.0, 0.0, b_of(tc + h / 2))
            k3 = _spin_rhs(s + h / 2 * k2, 0.0, 0.0, b_of(tc + h / 2))
            k4 = _spin_rhs(s + h * k3, 0.0, 0.0, b_of(tc + h))
            s = s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            tc += h
            extra_t.append(tc)
            extra_s.append(s.copy())
        times_all.append(np.array(extra_t))
        s_all.append(np.array(extra_s))

    times = np.concatenate(times_all)
    s_out = np.vstack(s_all)
    f_s = np.interp(times, t, f, left=0.0, right=0.0)
    g_s = np.interp(times, t, g, left=0.0, right=0.0)
    return SpinTrajectory(times, s_out, f_s, g_s, np.zeros_like(times))
