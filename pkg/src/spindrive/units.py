"""Atomic-unit conversion constants.

Everything internal to this package runs in Hartree atomic units
(hbar = e = m_e = 1).  Laboratory quantities enter through the constants
below and are converted exactly once, at configuration time.

Conventions worth noting:

* one atomic unit of magnetic field is hbar/(e*a0^2); a free electron spin
  (g = 2) in a field B precesses at angular frequency B expressed in these
  units, so Larmor periods are 2*pi/B_au.
* the intensity unit is the cycle-averaged intensity of a plane wave whose
  peak electric field is one atomic unit, I = (c/8pi) E^2 in Gaussian units.
"""

import math

# CODATA 2018
HARTREE_EV = 27.211386245988        # 1 Hartree in eV
AU_TIME_S = 2.4188843265857e-17     # 1 a.u. of time in s
AU_TIME_FS = AU_TIME_S * 1e15
AU_FIELD_V_M = 5.14220674763e11     # 1 a.u. of electric field in V/m
AU_MAGNETIC_T = 2.35051756758e5     # 1 a.u. of magnetic field in Tesla
AU_INTENSITY_W_CM2 = 3.50944758e16  # cycle-averaged, peak field = 1 a.u.

# 1 a.u. of fluence (intensity unit x time unit), in J/cm^2
AU_FLUENCE_J_CM2 = AU_INTENSITY_W_CM2 * AU_TIME_S


def ev_to_hartree(e: float) -> float:
    return e / HARTREE_EV


def hartree_to_ev(e: float) -> float:
    return e * HARTREE_EV


def fs_to_au(t: float) -> float:
    return t / AU_TIME_FS


def au_to_fs(t: float) -> float:
    return t * AU_TIME_FS


def ps_to_au(t: float) -> float:
    return t * 1e3 / AU_TIME_FS


def au_to_ps(t: float) -> float:
    return t * AU_TIME_FS * 1e-3


def tesla_to_au(b: float) -> float:
    """Magnetic field in Tesla -> Zeeman angular frequency of a g=2 spin, a.u."""
    return b / AU_MAGNETIC_T


def au_to_tesla(b: float) -> float:
    return b * AU_MAGNETIC_T


def w_cm2_to_au(intensity: float) -> float:
    return intensity / AU_INTENSITY_W_CM2


def au_to_w_cm2(intensity: float) -> float:
    return intensity * AU_INTENSITY_W_CM2


def mj_cm2_to_au(fluence: float) -> float:
    """Fluence in mJ/cm^2 -> a.u. (intensity unit x time unit)."""
    return fluence * 1e-3 / AU_FLUENCE_J_CM2


def au_to_mj_cm2(fluence: float) -> float:
    return fluence * AU_FLUENCE_J_CM2 * 1e3


def mev_to_hartree(e: float) -> float:
    return e * 1e-3 / HARTREE_EV


SQRT_PI3 = math.pi ** 1.5  # Gaussian envelope normalization 1/sqrt(pi^3)
