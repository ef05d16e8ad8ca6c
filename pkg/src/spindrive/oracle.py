"""Schrodinger-picture reference propagation.

The normalized state is formed directly from the Raman amplitude spinor,

    psi_g(t) = U(t) (A(t) o psi0) / ||A(t) o psi0||,

with no differential equation involved, so a trajectory of expectation
values from this module is an independent check on the entire
effective-operator pipeline (which shares only the raw amplitudes).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def propagate_psi(amplitudes: np.ndarray, u_phases: tuple[np.ndarray, np.ndarray],
                  psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Normalized state on the grid, shape (count, n).

    ``u_phases`` is the eigendecomposition (w, v) of the magnetic
    Hamiltonian; the evolution operator is exp(-i h t).
    """
    if amplitudes.shape[1] != psi0.shape[0]:
        raise ValueError("amplitude spinor and initial state disagree in dimension")
    x = amplitudes * psi0
    norms = np.linalg.norm(x, axis=1)
    if norms.min() < 1e-12:
        raise ValueError("second-order amplitude annihilated the state; "
                         "far outside the perturbative regime")
    w, v = u_phases
    phases = np.exp(-1j * np.outer(times, w))
    return (phases * (x @ v.conj())) @ v.T / norms[:, None]


def expectation_series(states: np.ndarray, op: np.ndarray) -> np.ndarray:
    """<psi(t)|op|psi(t)> for every row; real part (use Hermitian ops)."""
    return np.einsum("ti,ij,tj->t", states.conj(), op, states).real


def effective_operator(nu: np.ndarray, gamma: np.ndarray,
                       psi: np.ndarray) -> np.ndarray:
    """The effective magnetic operator for the current normalized state
    (diagonal -gamma_a, off-diagonal i P_a P_b^* (nu_a - nu_b))."""
    rho = np.outer(psi, psi.conj())
    return -np.diag(gamma).astype(complex) + 1j * (nu[:, None] - nu[None, :]) * rho


def propagate_coupled(nu: np.ndarray, gamma: np.ndarray, times_dense: np.ndarray,
                      psi0_pair: tuple[np.ndarray, np.ndarray], h_m_of,
                      t_end: float | None = None, dt_coarse: float = 2.0,
                      dense_stride: int = 2):
    """Wavefunction-level integration of the coupled pair of Schrodinger
    equations i psi' = (H_J + H_m) psi.

    ``nu``/``gamma`` are sampled on ``times_dense`` (the effective operator
    is rebuilt from the instantaneous state); ``h_m_of(psi_self, psi_other)``
    returns the magnetic Hamiltonian acting on one subsystem given both
    current states (mean-field coupling stays live).  RK4 steps
    ``dense_stride`` field samples at a time so substages land on samples.
    Returns (times, psi1, psi2) including the coarse field-free
    continuation.
    """
    if dense_stride % 2:
        raise ValueError("dense_stride must be even")
    p1 = psi0_pair[0].astype(complex)
    p2 = psi0_pair[1].astype(complex)
    n = len(p1)
    zero = np.zeros(n)

    def rhs(a, b, nu_t, gamma_t):
        da = -1j * ((effective_operator(nu_t, gamma_t, a / np.linalg.norm(a))
                     + h_m_of(a, b)) @ a)
        db = -1j * ((effective_operator(nu_t, gamma_t, b / np.linalg.norm(b))
                     + h_m_of(b, a)) @ b)
        return da, db

    def step(a, b, f0, f1, f2, h):
        k1a, k1b = rhs(a, b, *f0)
        k2a, k2b = rhs(a + h / 2 * k1a, b + h / 2 * k1b, *f1)
        k3a, k3b = rhs(a + h / 2 * k2a, b + h / 2 * k2b, *f1)
        k4a, k4b = rhs(a + h * k3a, b + h * k3b, *f2)
        a = a + h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a)
        b = b + h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b)
        # the flow is unitary up to integrator error; renormalize to keep
        # pure-state expectations comparable over long runs
        return a / np.linalg.norm(a), b / np.linalg.norm(b)

    times = [times_dense[0]]
    out1, out2 = [p1.copy()], [p2.copy()]
    h = (times_dense[1] - times_dense[0]) * dense_stride
    mid = dense_stride // 2
    for i in range(0, len(times_dense) - dense_stride, dense_stride):
        p1, p2 = step(p1, p2, (nu[i], gamma[i]), (nu[i + mid], gamma[i + mid]),
                      (nu[i + dense_stride], gamma[i + dense_stride]), h)
        times.append(times_dense[i + dense_stride])
        out1.append(p1.copy())
        out2.append(p2.copy())
    if t_end is not None and t_end > times[-1]:
        tc = times[-1]
        while tc < t_end - 1e-12:
            hh = min(dt_coarse, t_end - tc)
            p1, p2 = step(p1, p2, (zero, zero), (zero, zero), (zero, zero), hh)
            tc += hh
            times.append(tc)
            out1.append(p1.copy())
            out2.append(p2.copy())
    return np.array(times), np.array(out1), np.array(out2)


@dataclass
class OracleReport:
    """Componentwise max-norm deviations between two trajectories."""

    deviations: dict
    times_of_max: dict
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = all(d <= self.tolerance for d in self.deviations.values())

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values())

    def summary(self) -> str:
        lines = [f"oracle comparison (tolerance {self.tolerance:g}):"]
        for k in sorted(self.deviations):
            lines.append(f"  {k:8s} max|dev| = {self.deviations[k]:12.4e}"
                         f"  at t = {self.times_of_max[k]:10.1f} a.u.")
        lines.append("  => " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def oracle_compare(times: np.ndarray, heisenberg: dict, schrodinger: dict,
                   tolerance: float) -> OracleReport:
    """Compare named signal arrays sampled on one shared grid."""
    if set(heisenberg) != set(schrodinger):
        raise ValueError("trajectory component sets differ")
    devs, tmax = {}, {}
    for k, a in heisenberg.items():
        b = schrodinger[k]
        if a.shape != b.shape:
            raise ValueError(f"grid mismatch on component {k}")
        d = np.abs(a - b)
        i = int(np.argmax(d))
        devs[k] = float(d[i])
        tmax[k] = float(times[i])
    return OracleReport(devs, tmax, tolerance)
