"""Dimension-generic complex linear algebra on 2J+1 Hilbert spaces.

State vectors ("spinors") and operators are plain numpy arrays in the
|J, J_z> basis ordered J_z = J, J-1, ..., -J.  Component k (1-based in the
physics notation, 0-based in code) therefore carries J_z = J + 1 - k.
All builders return arrays with the writeable flag cleared; treat them as
immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def normalized(psi: np.ndarray) -> np.ndarray:
    """Return psi / ||psi||; rejects the zero vector."""
    n = np.linalg.norm(psi)
    if n == 0.0:
        raise ValueError("cannot normalize a zero spinor")
    return psi / n


def is_half_integer(j: float) -> bool:
    return j >= 0 and abs(2 * j - round(2 * j)) < 1e-12


@dataclass(frozen=True)
class AngularMomentumSet:
    """J_x, J_y, J_z matrices for total angular momentum J (hbar = 1)."""

    j: float
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    @property
    def dim(self) -> int:
        return round(2 * self.j) + 1


def build_angular_momentum(j: float) -> AngularMomentumSet:
    """Standard ladder-operator construction in the J_z-descending basis."""
    if not is_half_integer(j):
        raise ValueError(f"J must be a non-negative half-integer, got {j}")
    n = round(2 * j) + 1
    m = j - np.arange(n)  # J_z values, descending
    # <m|J+|m-1> on the superdiagonal in this ordering
    ladder = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jp = np.diag(ladder, 1).astype(complex)
    jm = jp.T.conj()
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(complex)
    return AngularMomentumSet(j, _frozen(jx), _frozen(jy), _frozen(jz))


def build_N(a: int, b: int, sign: str, n: int) -> np.ndarray:
    """Hermitian transition operator N_{ab+} or N_{ab-} (1-based indices).

    N_{ab+} has ones at (a,b) and (b,a); N_{ab-} has -i at (a,b) and +i at
    (b,a).  N_{aa+} is the projector on component a; N_{aa-} is not defined.
    """
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"indices out of range: a={a}, b={b}, n={n}")
    if b < a:
        raise ValueError(f"require b >= a, got a={a}, b={b}")
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    if sign == "-" and a == b:
        raise ValueError("N_{aa-} is undefined; diagonal operators are N_{aa+}")
    op = np.zeros((n, n), dtype=complex)
    if sign == "+":
        op[a - 1, b - 1] = 1.0
        op[b - 1, a - 1] = 1.0
    else:
        op[a - 1, b - 1] = -1j
        op[b - 1, a - 1] = 1j
    return _frozen(op)


def herm_deviation(op: np.ndarray) -> float:
    return float(np.max(np.abs(op - op.T.conj())))


def propagator(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h, via eigendecomposition."""
    dev = herm_deviation(h)
    if dev > HERMITICITY_TOL * max(1.0, float(np.max(np.abs(h)))):
        raise ValueError(f"propagator requires a Hermitian operator (deviation {dev:.3e})")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.T.conj()


def propagator_phases(h: np.ndarray):
    """Eigendecomposition (w, v) of Hermitian h for repeated exp(-i h t) use."""
    dev = herm_deviation(h)
    if dev > HERMITICITY_TOL * max(1.0, float(np.max(np.abs(h)))):
        raise ValueError(f"propagator requires a Hermitian operator (deviation {dev:.3e})")
    return np.linalg.eigh(h)


def apply_propagator_series(w: np.ndarray, v: np.ndarray, times: np.ndarray,
                            vec: np.ndarray, inverse: bool = False) -> np.ndarray:
    """exp(-+ i h t_k) vec for every t_k, given eigendecomposition (w, v).

    Returns an array of shape (len(times), dim).  ``inverse=True`` applies
    exp(+i h t) instead.
    """
    sgn = 1j if inverse else -1j
    coeff = v.T.conj() @ vec
    phases = np.exp(sgn * np.outer(times, w))
    return (phases * coeff) @ v.T


def expectation(psi: np.ndarray, op: np.ndarray) -> complex:
    """<psi|op|psi>; dimensions must agree."""
    if psi.shape[0] != op.shape[0] or op.shape[0] != op.shape[1]:
        raise ValueError(f"dimension mismatch: psi {psi.shape}, op {op.shape}")
    return complex(np.vdot(psi, op @ psi))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a
