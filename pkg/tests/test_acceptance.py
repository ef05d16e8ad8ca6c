"""Acceptance suite: one test per exit criterion, each printing a PASS/FAIL
line with the measured numbers.  Tolerances are fixed here and nowhere else.

Known honest failure: the published sudden-approximation phase offset at
20 T (47 degrees) is kinematically inconsistent with the 7 T value of the
same comparison (see notes in the decisions ledger); the corresponding
assertion is implemented as stated and fails with the measured 40.5
degrees.
"""

import math

import numpy as np
import pytest

from spindrive import antiferro as afm
from spindrive import units
from spindrive.effective_field import compute_fields
from spindrive.qm_core import build_N, commutator, propagator_phases
from spindrive.raman import TimeGrid
from spindrive.scenarios import (AFM_DEFAULTS, FIG5_CASES, SPIN_DEFAULTS,
                                 afm_fields_for, afm_oracle_report,
                                 dense_grid, measure_larmor_period,
                                 run_scenario, spin_fields_for,
                                 spin_oracle_report, sudden_phase_offset)
from spindrive.single_spin import (PSI0, SX, integrate_spin, spin_fgh,
                                   effective_fields)

AFM_CASES = list(FIG5_CASES)


def check(label: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


# criterion 1 -----------------------------------------------------------------

def test_criterion_1_larmor_periods():
    expected = {7.0: 5.06, 20.0: 1.77}
    details = []
    ok = True
    for b, want in expected.items():
        got = units.au_to_ps(measure_larmor_period(b))
        details.append(f"B={b:g}T: {got:.4f} ps (target {want} ps)")
        ok = ok and abs(got - want) / want < 0.02
    check("criterion 1: Larmor periods within 2%", ok, "; ".join(details))


# criterion 2 -----------------------------------------------------------------

def test_criterion_2_sudden_phase_7T():
    off = sudden_phase_offset(7.0, SPIN_DEFAULTS)
    check("criterion 2a: sudden-approximation offset at 7 T",
          abs(off - 14.0) <= 3.0, f"{off:.2f} deg (target 14 +- 3)")


def test_criterion_2_sudden_phase_20T():
    off = sudden_phase_offset(20.0, SPIN_DEFAULTS)
    check("criterion 2b: sudden-approximation offset at 20 T",
          abs(off - 47.0) <= 3.0,
          f"{off:.2f} deg (target 47 +- 3; see decisions ledger: the "
          "published 47 is inconsistent with the 14 at 7 T)")


# criterion 3 -----------------------------------------------------------------

def test_criterion_3_null_tests():
    # (a) no spin-orbit splitting: spin frozen
    from spindrive.single_spin import SingleSpinSpec
    spec = SingleSpinSpec.from_lab(7.0, 0.0, SPIN_DEFAULTS["gap_ev"],
                                   SPIN_DEFAULTS["fluence_mj_cm2"],
                                   SPIN_DEFAULTS["width_fs"])
    grid = dense_grid(SPIN_DEFAULTS["width_fs"], 0.1)
    f, g, _ = spin_fgh(effective_fields(spec, grid))
    traj = integrate_spin(grid, f, g, spec.b_field,
                          t_end=units.ps_to_au(1.0), sample_stride=50)
    dev_a = np.abs(traj.s - np.array([0.5, 0.0, 0.0])).max()

    # (b) B = 0 with the moment along the light propagation axis
    _, grid_p, _, f_p, g_p, _ = spin_fields_for(0.0, SPIN_DEFAULTS)
    traj_b = integrate_spin(grid_p, f_p, g_p, 0.0, s0=(0.0, 0.0, 0.5),
                            t_end=units.ps_to_au(1.0), sample_stride=50)
    dev_b = np.abs(traj_b.s - np.array([0.0, 0.0, 0.5])).max()

    # (c) no field: coefficients vanish identically
    amps = np.ones((grid.count, 2), dtype=complex)
    fields = compute_fields(grid, amps, np.linalg.eigh(-spec.b_field * SX), PSI0)
    dev_c = max(np.abs(fields.nu).max(), np.abs(fields.gamma).max())

    ok = dev_a < 1e-8 and dev_b < 1e-8 and dev_c == 0.0
    check("criterion 3: null tests", ok,
          f"soc=0 drift {dev_a:.1e}; S||z drift {dev_b:.1e}; "
          f"E=0 coefficients {dev_c:.1e}")


# criterion 4 -----------------------------------------------------------------

def test_criterion_4_equivalence_single_spin():
    devs = {}
    for b in (0.0, 7.0, 20.0):
        devs[b] = spin_oracle_report(b, SPIN_DEFAULTS).max_deviation
    ok = all(d < 1e-6 for d in devs.values())
    # refinement: deviation must drop under dt halving
    half = spin_oracle_report(20.0, SPIN_DEFAULTS, dt=SPIN_DEFAULTS["dt"] / 2)
    ok = ok and half.max_deviation < devs[20.0]
    check("criterion 4a: picture equivalence, single spin (<1e-6)", ok,
          "; ".join(f"B={b:g}T dev={d:.2e}" for b, d in devs.items())
          + f"; dt/2 dev={half.max_deviation:.2e}")


def test_criterion_4_equivalence_antiferro():
    devs = {}
    for case in AFM_CASES:
        devs[case] = afm_oracle_report(case, AFM_DEFAULTS).max_deviation
    ok = all(d < 1e-5 for d in devs.values())
    # halving the integration steps on one scenario; at the roundoff floor
    # the decrease clause is vacuous, so accept either a decrease or both
    # runs sitting under the floor
    half = afm_oracle_report("gh", AFM_DEFAULTS, step_scale=0.5).max_deviation
    base = devs["gh"]
    floor = 1e-11
    ok = ok and (half < base or (half < floor and base < floor))
    check("criterion 4b: picture equivalence, antiferro (<1e-5)", ok,
          "; ".join(f"{c}={d:.2e}" for c, d in devs.items())
          + f"; gh at dt/2: {half:.2e}")


# criterion 5 -----------------------------------------------------------------

def test_criterion_5_antiferro_invariants():
    details = []
    ok = True
    for case in AFM_CASES:
        spec, grid, af = afm_fields_for(case, AFM_DEFAULTS)
        t_end = units.ps_to_au(1.0)
        times, samples = afm.integrate_pair_full(spec, grid, af, t_end=t_end,
                                                 sample_stride=500,
                                                 dense_stride=8)
        excl = max(abs(s[k]) for s in samples for k in afm.EXCLUDED_VARS)
        msum = max(abs(s["m1"] + s["m2"] + s["m3"] + s["m4"] - 2)
                   for s in samples)
        mx = max(abs(s["m12+"] + s["m23+"] + s["m34+"]) for s in samples)
        my = max(abs(s["m12-"] + s["m23-"] + s["m34-"]) for s in samples)
        lz = max(abs(1.5 * s["l1"] + 0.5 * s["l2"] - 0.5 * s["l3"]
                     - 1.5 * s["l4"]) for s in samples)
        case_ok = (excl < 1e-10 and msum < 1e-10 and mx < 1e-8
                   and my < 1e-8 and lz < 1e-8)
        ok = ok and case_ok
        details.append(f"{case}: excl={excl:.1e} dsum={msum:.1e} "
                       f"max|Mx,My,Lz|={max(mx, my, lz):.1e}")
    check("criterion 5: antiferro invariants (32-variable diagnostic)", ok,
          "; ".join(details))


# criterion 6 -----------------------------------------------------------------

def test_criterion_6_commutator_table():
    rng = np.random.default_rng(1234)
    ops = {"Lx": (afm.J32.jx, -afm.J32.jx), "Ly": (afm.J32.jy, -afm.J32.jy),
           "Mz": (afm.J32.jz, afm.J32.jz),
           "crz": (afm.J32.jz @ afm.J32.jz, afm.J32.jz @ afm.J32.jz),
           "crx": (afm.J32.jx @ afm.J32.jx, afm.J32.jx @ afm.J32.jx)}
    worst = 0.0
    for _ in range(100):
        p1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        p2 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        p1 /= np.linalg.norm(p1)
        p2 /= np.linalg.norm(p2)
        allv = afm.variables_from_rhos(np.outer(p1, p1.conj()),
                                       np.outer(p2, p2.conj()))
        for name, row in afm.COMMUTATOR_TABLE.items():
            a, b = afm.PAIR[name.rstrip("+-")]
            wt = 1.0 if a == b else afm.P_WEIGHT[a] * afm.P_WEIGHT[b]
            nop = build_N(a, b, "-" if name.endswith("-") else "+", 4)
            sub = 1.0 if name.startswith("m") else -1.0
            rho1 = np.outer(p1, p1.conj())
            rho2 = np.outer(p2, p2.conj())
            for op, (o1, o2) in ops.items():
                lhs = -1j * (np.trace(rho1 @ commutator(wt * nop, o1))
                             + sub * np.trace(rho2 @ commutator(wt * nop, o2)))
                rhs = sum(c * allv[t] for t, c in row.get(op, {}).items())
                worst = max(worst, abs(lhs - rhs))
    check("criterion 6: commutator table vs matrix commutators", worst < 1e-10,
          f"worst cell deviation {worst:.2e} over 100 random states")


# criterion 7 -----------------------------------------------------------------

def test_criterion_7a_circular_mode_constancy():
    res = run_scenario("fig5c")
    traj = res.audit_data["traj"]
    post = traj.times > 3 * units.fs_to_au(AFM_DEFAULTS["width_fs"])
    lperp = np.hypot(traj.lx, traj.ly)[post]
    mz = traj.mz[post]
    var_l = (lperp.max() - lperp.min()) / lperp.mean()
    var_m = (mz.max() - mz.min()) / abs(mz).max()
    ok = var_l < 0.01 and var_m < 0.01
    check("criterion 7a: circular-mode constancy (1%)", ok,
          f"|L+iL| variation {var_l:.2%}, Mz variation {var_m:.2%}")


def test_criterion_7b_kick_rotation_frequency():
    spec = afm.AntiferroSpec(
        jex=0.0, axis="z", delta=units.mev_to_hartree(2.0),
        delta_e=units.mev_to_hartree(3.0),
        eps_ex=units.ev_to_hartree(2.0),
        pulse=afm_fields_for("cd", AFM_DEFAULTS)[0].pulse)
    eta = 0.01
    psi1 = np.array([eta, 1 / math.sqrt(2), 1 / math.sqrt(2), eta])
    psi1 /= np.linalg.norm(psi1)
    psi2 = np.array([eta, -1 / math.sqrt(2), 1 / math.sqrt(2), -eta])
    psi2 /= np.linalg.norm(psi2)
    allv = afm.variables_from_rhos(np.outer(psi1, psi1).astype(complex),
                                   np.outer(psi2, psi2).astype(complex))
    x = np.array([allv[k] for k in afm.VARS])
    dt, steps = 10.0, 4000
    zs = np.empty(steps, dtype=complex)
    zero = np.zeros(4)
    for k in range(steps):
        k1 = afm.antiferro_eom_rhs(x, zero, zero, spec)
        k2 = afm.antiferro_eom_rhs(x + dt / 2 * k1, zero, zero, spec)
        k3 = afm.antiferro_eom_rhs(x + dt / 2 * k2, zero, zero, spec)
        k4 = afm.antiferro_eom_rhs(x + dt * k3, zero, zero, spec)
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        zs[k] = x[afm.IDX["l12+"]] + 1j * x[afm.IDX["l12-"]]
    freq = np.polyfit(dt * np.arange(1, steps + 1), np.unwrap(np.angle(zs)), 1)[0]
    rel = abs(freq / (6 * spec.delta) - 1)
    check("criterion 7b: kicked l12 rotates at 6*Delta_z (0.5%)", rel < 5e-3,
          f"frequency {freq:.6e} vs {6 * spec.delta:.6e} (rel dev {rel:.1e})")


def test_criterion_7c_easy_axis_period():
    res = run_scenario("fig5g")
    traj = res.audit_data["traj"]
    width = units.fs_to_au(AFM_DEFAULTS["width_fs"])
    post = traj.times > 3 * width
    sig = traj.mz[post] - traj.mz[post].mean()
    t = traj.times[post]
    crossings = t[1:][np.diff(np.sign(sig)) != 0]
    period = 2 * float(np.mean(np.diff(crossings)))
    pulse_fwhm = width * math.sqrt(2 * math.log(2))
    ratio = period / pulse_fwhm
    check("criterion 7c: easy-axis precession period", 1.5 <= ratio <= 2.5,
          f"period {units.au_to_fs(period):.0f} fs = {ratio:.2f} x pulse "
          f"duration {units.au_to_fs(pulse_fwhm):.0f} fs")


# criterion 8 -----------------------------------------------------------------

def test_criterion_8_field_magnitudes():
    _, grid, _, f20, g20, _ = spin_fields_for(20.0, SPIN_DEFAULTS)
    _, _, _, f0, g0, _ = spin_fields_for(0.0, SPIN_DEFAULTS)
    ez_lo, ez_hi = units.tesla_to_au(7.0), units.tesla_to_au(20.0)
    peaks = {"f": np.abs(f20).max(), "g": np.abs(g20).max()}
    in_range = all(ez_lo / 10 <= p <= ez_hi * 10 for p in peaks.values())
    # B-dependence of the rotation strength sqrt((f/2)^2 + g^2); the raw f/g
    # quadratures rotate into each other with the Larmor phase accumulated
    # over the virtual-state memory time, which the dynamics cancels
    m0 = np.sqrt((f0 / 2) ** 2 + g0 ** 2).max()
    m20 = np.sqrt((f20 / 2) ** 2 + g20 ** 2).max()
    b_dep = abs(m20 / m0 - 1)
    ok = in_range and b_dep < 0.01
    check("criterion 8: coupling magnitudes vs Zeeman energies", ok,
          f"peak f={peaks['f']:.2e}, g={peaks['g']:.2e} vs Zeeman "
          f"[{ez_lo:.2e}, {ez_hi:.2e}]; rotation-strength change "
          f"B=0 vs 20T: {b_dep:.3%}")


# criterion 9 -----------------------------------------------------------------

def test_criterion_9_perturbative_scaling():
    small = dict(SPIN_DEFAULTS)
    small["fluence_mj_cm2"] = 0.002
    double = dict(SPIN_DEFAULTS)
    double["fluence_mj_cm2"] = 0.008  # doubled field amplitude
    spec1, grid, res1, f1, g1, _ = spin_fields_for(7.0, small)
    spec2, _, res2, f2, g2, _ = spin_fields_for(7.0, double)
    a1 = res1.amplitudes - 1
    a2 = res2.amplitudes - 1
    lin = np.abs(a2 - 4 * a1).max() / np.abs(a1).max()

    tr1 = integrate_spin(grid, f1, g1, spec1.b_field, sample_stride=10 ** 9)
    tr2 = integrate_spin(grid, f2, g2, spec2.b_field, sample_stride=10 ** 9)
    d1 = np.linalg.norm(tr1.s[-1] - np.array([0.5, 0.0, 0.0]))
    d2 = np.linalg.norm(tr2.s[-1] - np.array([0.5, 0.0, 0.0]))
    ratio = d2 / d1
    ok = lin < 1e-10 and abs(ratio - 4) / 4 < 0.05
    check("criterion 9: perturbative scaling", ok,
          f"(A-1) linearity residual {lin:.1e}; deviation ratio {ratio:.4f}")
