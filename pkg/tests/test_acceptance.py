"""Acceptance suite: one test and one summary line per criterion.

Each test gathers its sub-checks, records a single PASS/FAIL line (printed
in the terminal summary and to stdout) and then asserts that every sub-check
held at the stated tolerance.
"""

import re
import time
from functools import lru_cache

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, omega
from fibersource import modes
from fibersource.cli import main
from fibersource.efficiency import EfficiencyRequest, QuadratureSettings, efficiency, loglog_slope
from fibersource.materials import omega_to_um
from fibersource.modes import HE11, HE12, FiberGeometry, effective_index, mode_profile
from fibersource.nonlinear import per_km_watt, sfwm_coefficients, tospdc_coefficients
from fibersource.phasematching import (
    SfwmProcess,
    degenerate_tospdc_radius,
    sfwm_anchor,
    sfwm_contour_extent,
    sfwm_process,
    tospdc_process,
)
from fibersource.quadrature import PolarGrid
from fibersource.spectrum import (
    PumpConfig,
    grid_widths,
    jsi_grid_sfwm,
    jsi_slices_tospdc,
    sfwm_rotate,
    sfwm_unrotate,
    tospdc_forward,
    tospdc_inverse,
)

SFWM_GEOMETRY = FiberGeometry(0.395e-6)
REP = 1e8
POWER = 0.18


@lru_cache(maxsize=None)
def tospdc_geometry():
    return FiberGeometry(degenerate_tospdc_radius(1.596))


@lru_cache(maxsize=None)
def eta(process, sigma, length=0.01, power=POWER, nl_power=None, refined=False):
    geometry = SFWM_GEOMETRY if process == "sfwm" else tospdc_geometry()
    pump = PumpConfig.from_wavelength(0.532, sigma, power, REP)
    regime = "cw" if sigma == 0 else "pulsed"
    q = QuadratureSettings().refined() if refined else QuadratureSettings()
    return efficiency(EfficiencyRequest(process, geometry, pump, length, regime, nl_power=nl_power, quadrature=q)).eta


def within_factor(value, target, factor=2.0):
    return target / factor <= value <= target * factor


def record(number, title, checks):
    ok = all(c[-1] for c in checks)
    detail = "; ".join(f"{label} {'ok' if good else 'MISS'}" for label, good in ((c[0], c[-1]) for c in checks))
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def test_criterion_01_design_inversion(capsys):
    modes._cached_table.cache_clear()
    t0 = time.perf_counter()
    code = main(["design", "--target", "1.596um"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    r_um = float(re.search(r"core radius\s+([0-9.]+) um", out).group(1))
    checks = [
        (f"r = {r_um:.6f} um vs 0.395 +/- 2%", abs(r_um / 0.395 - 1) <= 0.02),
        (f"exit code {code}", code == 0),
        (f"runtime {elapsed:.1f} s < 60 s", elapsed < 60),
    ]
    assert record(1, "design inversion", checks)


def test_criterion_02_sfwm_phasematching():
    modes._cached_table.cache_clear()
    t0 = time.perf_counter()
    proc = sfwm_process(FiberGeometry(0.395e-6), nonlinear=False)
    ws, wi = sfwm_anchor(proc, omega(0.532))
    elapsed = time.perf_counter() - t0
    ls, li = omega_to_um(ws), omega_to_um(wi)
    checks = [
        (f"signal {ls:.4f} um vs 0.329 +/- 1%", abs(ls / 0.329 - 1) <= 0.01),
        (f"idler {li:.4f} um vs 1.398 +/- 1%", abs(li / 1.398 - 1) <= 0.01),
        (f"runtime {elapsed:.1f} s < 30 s", elapsed < 30),
    ]
    assert record(2, "SFWM phasematching", checks)


def test_criterion_03_contour_extent():
    proc = sfwm_process(SFWM_GEOMETRY, nonlinear=False)
    extent, lo, hi = sfwm_contour_extent(proc)
    nm = extent * 1e9
    checks = [(f"extent {nm:.1f} nm vs 470 +/- 15%", abs(nm / 470 - 1) <= 0.15)]
    assert record(3, "contour extent", checks)


def test_criterion_04_nonlinear_coefficients():
    wp = omega(0.532)
    ws, wi = sfwm_anchor(sfwm_process(SFWM_GEOMETRY, nonlinear=False), wp)
    g_fwm = per_km_watt(sfwm_coefficients(SFWM_GEOMETRY, wp, ws, wi).gamma_fwm)
    g_pdc = per_km_watt(tospdc_coefficients(SFWM_GEOMETRY, wp).gamma_pdc)
    ratio = g_fwm / g_pdc
    checks = [
        (f"gamma_fwm {g_fwm:.1f} vs 629 +/- 25%", abs(g_fwm / 629 - 1) <= 0.25),
        (f"gamma_pdc {g_pdc:.2f} vs 19 +/- 25%", abs(g_pdc / 19 - 1) <= 0.25),
        (f"ratio {ratio:.1f} in [20, 50]", 20 <= ratio <= 50),
    ]
    assert record(4, "nonlinear coefficients", checks)


def test_criterion_05_absolute_efficiencies():
    t0 = time.perf_counter()
    cw = eta("sfwm", 0.0)
    pulsed = eta("sfwm", 23.5e9)
    t_cw = eta("tospdc", 0.0)
    t_pulsed = eta("tospdc", 23.5e9)
    elapsed = time.perf_counter() - t0
    checks = [
        (f"SFWM cw {cw:.3e} vs 3.05e-11 x/2", within_factor(cw, 3.05e-11)),
        (f"SFWM pulsed {pulsed:.3e} vs 2.01e-9 x/2", within_factor(pulsed, 2.01e-9)),
        (f"TOSPDC cw {t_cw:.3e} vs 7.10e-19 x/2", within_factor(t_cw, 7.10e-19)),
        (f"TOSPDC pulsed {t_pulsed:.3e} vs 7.11e-19 x/2", within_factor(t_pulsed, 7.11e-19)),
        (f"runtime {elapsed:.0f} s < 600 s", elapsed < 600),
    ]
    assert record(5, "absolute efficiencies", checks)


def test_criterion_06_length_scaling():
    lengths = [0.001, 0.003, 0.01, 0.03, 0.1]
    checks = [
        (f"SFWM pulsed 10 cm {eta('sfwm', 23.5e9, 0.1):.3e} vs 2.04e-8 x/2", within_factor(eta("sfwm", 23.5e9, 0.1), 2.04e-8)),
        (f"SFWM cw 10 cm {eta('sfwm', 0.0, 0.1):.3e} vs 3.09e-10 x/2", within_factor(eta("sfwm", 0.0, 0.1), 3.09e-10)),
        (f"TOSPDC 10 cm {eta('tospdc', 0.0, 0.1):.3e} vs 7.13e-18 x/2", within_factor(eta("tospdc", 0.0, 0.1), 7.13e-18)),
    ]
    for process in ("sfwm", "tospdc"):
        for sigma, regime in ((23.5e9, "pulsed"), (0.0, "cw")):
            slope, r2 = loglog_slope(lengths, [eta(process, sigma, L) for L in lengths])
            checks.append((f"{process} {regime} slope {slope:.3f} (R2 {r2:.5f})", abs(slope - 1) <= 0.05 and r2 > 0.999))
    assert record(6, "length scaling", checks)


def test_criterion_07_scaling_laws():
    p_peak = PumpConfig.from_wavelength(0.532, 23.5e9, POWER, REP).peak_power
    lin_p = eta("sfwm", 23.5e9, power=0.36, nl_power=p_peak) / eta("sfwm", 23.5e9, nl_power=p_peak)
    sig_lo = eta("sfwm", 47e9) / eta("sfwm", 23.5e9)
    sig_hi = eta("sfwm", 117.7e9) / eta("sfwm", 58.85e9)
    t_p = eta("tospdc", 23.5e9) / eta("tospdc", 23.5e9, power=0.001)
    t_sig = [eta("tospdc", s) for s in (23.5e9, 47.1e9, 70.6e9, 94.2e9, 117.7e9)]
    t_spread = max(t_sig) / min(t_sig) - 1
    conv_sfwm = eta("sfwm", 0.1e9) / eta("sfwm", 0.0)
    conv_tospdc = eta("tospdc", 0.1e9) / eta("tospdc", 0.0)
    checks = [
        (f"SFWM eta(2p)/eta(p) {lin_p:.4f} = 2 +/- 1%", abs(lin_p / 2 - 1) <= 0.01),
        (f"SFWM eta(2s)/eta(s) {sig_lo:.4f}, {sig_hi:.4f} = 2 +/- 5%",
         abs(sig_lo / 2 - 1) <= 0.05 and abs(sig_hi / 2 - 1) <= 0.05),
        (f"TOSPDC eta(180mW)/eta(1mW) {t_p:.4f} = 1 +/- 1%", abs(t_p - 1) <= 0.01),
        (f"TOSPDC bandwidth spread {100 * t_spread:.2f}% <= 3%", t_spread <= 0.03),
        (f"SFWM pulsed(0.1 GHz)/cw {conv_sfwm:.3f} = 1 +/- 5%", abs(conv_sfwm - 1) <= 0.05),
        (f"TOSPDC pulsed(0.1 GHz)/cw {conv_tospdc:.4f} = 1 +/- 5%", abs(conv_tospdc - 1) <= 0.05),
    ]
    assert record(7, "scaling laws", checks)


def test_criterion_08_magnitude_gap():
    gap = np.log10(eta("sfwm", 117.7e9) / eta("tospdc", 117.7e9))
    checks = [(f"log10 ratio {gap:.2f} in [9, 11]", 9 <= gap <= 11)]
    assert record(8, "magnitude gap", checks)


def test_criterion_09_jsi_structure():
    pump = PumpConfig.from_wavelength(0.532, 0.118e12, POWER, REP)
    sf = grid_widths(jsi_grid_sfwm(sfwm_process(SFWM_GEOMETRY, pump.omega), pump, 0.01, n=201))
    a, b = jsi_slices_tospdc(tospdc_process(SFWM_GEOMETRY, pump.omega), pump, 0.01, n_grid=101, n_slice=801)
    wa, wb = grid_widths(a), grid_widths(b)
    r1 = sf["nu_plus"] / sf["nu_minus"]
    r2 = wb["nu_plus"] / wa["nu_A"]
    checks = [
        (f"SFWM nu+/nu- width ratio {r1:.3f} < 0.1", r1 < 0.1),
        (f"TOSPDC nu+/nu_A width ratio {r2:.4f} < 0.1", r2 < 0.1),
    ]
    assert record(9, "JSI structure", checks)


def test_criterion_10_numerical_hygiene():
    rng = np.random.default_rng(10)
    drift = max(abs(eta(p, s, refined=True) / eta(p, s) - 1) for p in ("sfwm", "tospdc") for s in (0.0, 23.5e9))
    bounds_ok = True
    for a, lam in zip(rng.uniform(0.3e-6, 1.5e-6, 12), rng.uniform(0.4, 2.0, 12)):
        g = FiberGeometry(a)
        n = effective_index(g, HE11, omega(lam))
        bounds_ok &= 1.0 < n < g.core_index(omega(lam))
    norm_err = 0.0
    for mode, lam in ((HE11, 0.532), (HE12, 0.532), (HE11, 1.596), (HE11, 0.329), (HE11, 1.398)):
        for conv in ("vector", "magnitude", "dominant"):
            p = mode_profile(SFWM_GEOMETRY, mode, omega(lam), conv)
            norm_err = max(norm_err, abs(p.norm(p.grid(n_radial=48, n_phi=128)) - 1))
    trip = 0.0
    w0 = omega(1.596)
    for _ in range(100):
        v = rng.uniform(-5e13, 5e13, 3)
        back = tospdc_forward(*tospdc_inverse(*v, w0), w0)
        trip = max(trip, max(abs(x - y) for x, y in zip(back, v)) / w0)
        s, i = sfwm_unrotate(*sfwm_rotate(v[0], v[1]))
        trip = max(trip, abs(s - v[0]) / w0, abs(i - v[1]) / w0)
    checks = [
        (f"quadrature refinement drift {100 * drift:.4f}% < 1%", drift < 0.01),
        ("n_eff inside (n_clad, n_core)", bool(bounds_ok)),
        (f"profile normalisation error {norm_err:.1e} <= 1e-6", norm_err <= 1e-6),
        (f"transform round trip {trip:.1e} <= 1e-12", trip <= 1e-12),
    ]
    assert record(10, "numerical hygiene", checks)
