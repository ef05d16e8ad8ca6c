import math

import numpy as np
import pytest

from spindrive import units
from spindrive.pulse import (PulseSpec, amplitude_for_peak_intensity,
                             amplitude_from_fluence, amplitude_from_intensity,
                             carrier_field, envelope, fluence_mj_cm2)


@pytest.fixture
def spec():
    return PulseSpec(amplitude=3e-3, width=units.fs_to_au(100.0),
                     omega0=units.ev_to_hartree(2.0))


def test_envelope_peak_value(spec):
    peak = envelope(spec, spec.center)
    assert peak == pytest.approx(1 / math.pi ** 1.5, rel=1e-12)
    assert peak == pytest.approx(0.17958712, rel=1e-6)


def test_envelope_vanishes_far_away(spec):
    assert envelope(spec, spec.center + 50 * spec.width) == 0.0


def test_envelope_width_ratio(spec):
    ratio = envelope(spec, spec.center + spec.width) / envelope(spec, spec.center)
    assert ratio == pytest.approx(math.exp(-1), rel=1e-12)


def test_envelope_even_about_center(spec):
    t = np.linspace(0.1, 3 * spec.width, 40)
    assert np.allclose(envelope(spec, spec.center + t),
                       envelope(spec, spec.center - t))


def test_intensity_fwhm_is_117fs():
    spec = PulseSpec(amplitude=1.0, width=units.fs_to_au(100.0), omega0=0.07)
    assert units.au_to_fs(spec.fwhm_intensity) == pytest.approx(117.7, abs=0.1)


def test_carrier_at_center_equals_envelope(spec):
    assert carrier_field(spec, spec.center) == pytest.approx(
        envelope(spec, spec.center), rel=1e-14)


def test_carrier_alternates_half_periods(spec):
    half = math.pi / spec.omega0
    vals = carrier_field(spec, spec.center + half * np.arange(1, 5))
    envs = envelope(spec, spec.center + half * np.arange(1, 5))
    assert np.allclose(vals, envs * np.array([-1, 1, -1, 1]))


def test_amplitude_from_intensity_unit_definition():
    assert amplitude_from_intensity(units.AU_INTENSITY_W_CM2) == pytest.approx(1.0)


def test_amplitude_from_intensity_value():
    # sqrt(2e10 / 3.50944758e16)
    assert amplitude_from_intensity(2e10) == pytest.approx(7.5491e-4, rel=1e-4)


def test_amplitude_monotone_positive():
    vals = [amplitude_from_intensity(x) for x in (1e6, 1e8, 1e10)]
    assert vals[0] > 0 and vals[0] < vals[1] < vals[2]
    with pytest.raises(ValueError):
        amplitude_from_intensity(0.0)


def test_peak_intensity_accounts_for_envelope():
    amp = amplitude_for_peak_intensity(2e10)
    spec = PulseSpec(amplitude=amp, width=units.fs_to_au(100.0),
                     omega0=units.ev_to_hartree(2.0))
    peak_field = amp * envelope(spec, 0.0)
    assert units.au_to_w_cm2(peak_field ** 2) == pytest.approx(2e10, rel=1e-10)


def test_fluence_round_trip_by_quadrature():
    width_fs, fl = 100.0, 2.0
    amp = amplitude_from_fluence(fl, width_fs, 2.0)
    spec = PulseSpec(amplitude=amp, width=units.fs_to_au(width_fs),
                     omega0=units.ev_to_hartree(2.0))
    t = np.linspace(-8 * spec.width, 8 * spec.width, 20001)
    assert fluence_mj_cm2(spec, t) == pytest.approx(fl, rel=5e-3)


def test_fluence_requires_positive_inputs():
    for args in [(-1.0, 100.0, 2.0), (2.0, -1.0, 2.0), (2.0, 100.0, 0.0)]:
        with pytest.raises(ValueError):
            amplitude_from_fluence(*args)


def test_pulse_spec_validation():
    with pytest.raises(ValueError):
        PulseSpec(amplitude=-1.0, width=1.0, omega0=1.0)
    with pytest.raises(ValueError):
        PulseSpec(amplitude=1.0, width=0.0, omega0=1.0)


def test_unit_round_trips():
    for conv, inv, val in [
        (units.ev_to_hartree, units.hartree_to_ev, 2.0),
        (units.fs_to_au, units.au_to_fs, 117.0),
        (units.tesla_to_au, units.au_to_tesla, 7.0),
        (units.w_cm2_to_au, units.au_to_w_cm2, 2e10),
        (units.mj_cm2_to_au, units.au_to_mj_cm2, 2.0),
        (units.ps_to_au, units.au_to_ps, 5.1),
    ]:
        assert inv(conv(val)) == pytest.approx(val, rel=1e-12)
