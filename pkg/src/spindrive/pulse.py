"""Laser pulse model: Gaussian envelope, carrier, energy conversions.

The pulse is left-circularly polarized and propagates along +z.  The scalar
that multiplies every coupling matrix element in the Raman engines is

    F(t) = p((t - t0)/T) * cos(omega0 (t - t0)),
    p(x) = exp(-x^2) / sqrt(pi^3).

The 1/sqrt(pi^3) normalization is part of the envelope definition, so the
physical peak field of a pulse with amplitude E is E/sqrt(pi^3).  Intensity
and fluence conversions account for it: the cycle-averaged intensity of the
circularly polarized pulse is I(t) = I_au * (E p(t/T))^2 with I_au the
atomic intensity unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import units


@dataclass(frozen=True)
class PulseSpec:
    """Pulse parameters in atomic units.

    amplitude: field amplitude E multiplying the envelope (a.u.)
    width: envelope time constant T (a.u.); intensity FWHM is T*sqrt(2 ln 2)
    omega0: carrier angular frequency (Hartree)
    center: envelope peak time t0 (a.u.)
    """

    amplitude: float
    width: float
    omega0: float
    center: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("pulse amplitude must be >= 0")
        if self.width <= 0 or self.omega0 <= 0:
            raise ValueError("pulse width and carrier frequency must be > 0")

    @property
    def fwhm_intensity(self) -> float:
        return self.width * math.sqrt(2 * math.log(2))


def envelope(spec: PulseSpec, t) -> np.ndarray:
    """Normalized envelope p((t - t0)/T), peak value 1/sqrt(pi^3)."""
    x = (np.asarray(t, dtype=float) - spec.center) / spec.width
    return np.exp(-x * x) / units.SQRT_PI3


def carrier_field(spec: PulseSpec, t) -> np.ndarray:
    """F(t) = p((t-t0)/T) cos(omega0 (t-t0)); multiplies the Raman couplings."""
    tt = np.asarray(t, dtype=float) - spec.center
    return envelope(spec, t) * np.cos(spec.omega0 * tt)


def amplitude_from_intensity(i_peak_w_cm2: float) -> float:
    """Field amplitude (a.u.) whose cycle-averaged intensity is the given value.

    This is the bare unit conversion E = sqrt(I / I_au); it does not include
    the envelope normalization.  Scenario configuration treats a configured
    "peak intensity" as the physical peak of the enveloped pulse and divides
    by the envelope maximum, see :func:`amplitude_for_peak_intensity`.
    """
    if i_peak_w_cm2 <= 0:
        raise ValueError("intensity must be > 0")
    return math.sqrt(units.w_cm2_to_au(i_peak_w_cm2))


def amplitude_for_peak_intensity(i_peak_w_cm2: float) -> float:
    """Envelope amplitude E such that max_t I(t) equals the given intensity."""
    return amplitude_from_intensity(i_peak_w_cm2) * units.SQRT_PI3


def amplitude_from_fluence(fluence_mj_cm2: float, width_fs: float,
                           omega0_ev: float) -> float:
    """Envelope amplitude E delivering the given fluence.

    The fluence is the time integral of the cycle-averaged intensity
    I(t) = I_au (E p(t/T))^2, which evaluates analytically to
    I_au E^2 T sqrt(pi/2) / pi^3.  ``omega0_ev`` only guards validity (many
    cycles per envelope); it drops out of the integral.
    """
    if fluence_mj_cm2 <= 0 or width_fs <= 0 or omega0_ev <= 0:
        raise ValueError("fluence, width and carrier frequency must be > 0")
    t_au = units.fs_to_au(width_fs)
    if units.ev_to_hartree(omega0_ev) * t_au < 10:
        raise ValueError("pulse too short for a cycle-averaged fluence model")
    f_au = units.mj_cm2_to_au(fluence_mj_cm2)
    e_sq = f_au * math.pi ** 3 / (t_au * math.sqrt(math.pi / 2))
    return math.sqrt(e_sq)


def fluence_mj_cm2(spec: PulseSpec, t: np.ndarray) -> float:
    """Delivered fluence by quadrature of I(t) over the sampled grid (mJ/cm^2)."""
    p = envelope(spec, t)
    i_au = (spec.amplitude * p) ** 2
    return units.au_to_mj_cm2(float(np.trapezoid(i_au, t)))
