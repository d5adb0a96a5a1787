import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.constants import c, hbar

from conftest import omega
from fibersource.errors import QuadratureError
from fibersource.modes import HE11, HE12, effective_index, mode_table
from fibersource.efficiency import (
    EfficiencyRequest,
    QuadratureSettings,
    efficiency,
    eta_sfwm_cw,
    eta_tospdc_cw,
    h2,
    h3,
    loglog_slope,
    sweep,
)
from fibersource.phasematching import SfwmProcess, sfwm_anchor
from fibersource.spectrum import PumpConfig

PUMP = PumpConfig.from_wavelength(0.532, 23.5e9, 0.18, 1e8)
CW = PUMP.with_(sigma=0.0)


def direct_k1(geometry, mode, w):
    h = 1e-4 * w
    beta = lambda x: effective_index(geometry, mode, x) * x / c
    return (beta(w + h) - beta(w - h)) / (2 * h)


def test_h2_spot_value(geometry, he11):
    ws, wi = omega(0.329), omega(1.398)
    hand = 1.0
    for w in (ws, wi):
        hand *= direct_k1(geometry, HE11, w) * w / effective_index(geometry, HE11, w) ** 2
    assert h2(ws, wi, he11) == pytest.approx(hand, rel=1e-6)


def test_h3_spot_value(geometry, he11):
    w = omega(1.596)
    one = direct_k1(geometry, HE11, w) * w / effective_index(geometry, HE11, w) ** 2
    assert h3(w, w, w, he11) == pytest.approx(one**3, rel=1e-6)


@given(st.floats(0.35, 1.9), st.floats(0.35, 1.9))
def test_h2_positive_symmetric(a, b):
    from fibersource.modes import FiberGeometry

    tab = mode_table(FiberGeometry(0.395e-6), HE11)
    wa, wb = omega(a), omega(b)
    assert h2(wa, wb, tab) > 0
    assert h2(wa, wb, tab) == pytest.approx(h2(wb, wa, tab), rel=1e-14)


@given(st.floats(1.4, 1.8), st.floats(1.4, 1.8), st.floats(1.4, 1.8))
def test_h3_positive_permutation_symmetric(a, b, d):
    from fibersource.modes import FiberGeometry

    tab = mode_table(FiberGeometry(0.395e-6), HE11)
    w = [omega(a), omega(b), omega(d)]
    ref = h3(*w, tab)
    assert ref > 0
    assert h3(w[2], w[0], w[1], tab) == pytest.approx(ref, rel=1e-14)
    assert h3(w[1], w[0], w[2], tab) == pytest.approx(ref, rel=1e-14)


def test_request_validation(geometry):
    with pytest.raises(ValueError):
        EfficiencyRequest("sfwm", geometry, PUMP, 0.01, "cw")
    with pytest.raises(ValueError):
        EfficiencyRequest("sfwm", geometry, CW, 0.01, "pulsed")
    with pytest.raises(ValueError):
        EfficiencyRequest("spdc", geometry, PUMP, 0.01)
    with pytest.raises(ValueError):
        EfficiencyRequest("sfwm", geometry, PUMP, 0.0)
    with pytest.raises(ValueError):
        eta_sfwm_cw(EfficiencyRequest("sfwm", geometry, PUMP, 0.01))


@pytest.fixture(scope="module")
def sfwm_cw(geometry):
    return efficiency(EfficiencyRequest("sfwm", geometry, CW, 0.01, "cw"))


@pytest.fixture(scope="module")
def sfwm_pulsed(geometry):
    return efficiency(EfficiencyRequest("sfwm", geometry, PUMP, 0.01, "pulsed"))


@pytest.fixture(scope="module")
def tospdc_cw(design_geometry):
    return efficiency(EfficiencyRequest("tospdc", design_geometry, CW, 0.01, "cw"))


def test_prefactor_audit(sfwm_cw, sfwm_pulsed, tospdc_cw):
    for r in (sfwm_cw, sfwm_pulsed, tospdc_cw):
        assert r.eta == r.prefactor * r.integral
        assert r.eta >= 0 and r.rel_error < 1e-2
        doc = json.loads(r.to_json())
        assert doc["eta"] == r.eta


def test_sfwm_cw_against_linearised_lobe(geometry, he11, sfwm_cw):
    # oracle: Δk linear across one narrow lobe, ∫sinc²(aΔω)dΔω = π/a with a = L|k_s' − k_i'|/2
    wp = CW.omega
    ws, wi = sfwm_anchor(SfwmProcess(he11, sfwm_cw.factors["gamma_self"], sfwm_cw.factors["gamma_self"]), wp, 0.18)
    L, p, g = 0.01, 0.18, sfwm_cw.gamma
    n_p = he11.n_eff(wp)
    integral = h2(ws, wi, he11) * 2 * np.pi / (L * abs(he11.k1(ws) - he11.k1(wi)))
    eta = 2**5 * hbar * c**2 * n_p**2 / np.pi * L**2 * g**2 * p / (2 * wp) * integral
    assert sfwm_cw.eta == pytest.approx(eta, rel=1e-2)


def test_tospdc_cw_against_quadratic_mismatch(design_geometry, tospdc_cw):
    # oracle: on the designed fiber Δk ≈ −k''ρ²/2 on the ν₊ = 0 plane, so the plane
    # integral is π·π/(L k''/4)/2 = 2π²/(L k'') (half lobe, root at the origin)
    tab = mode_table(design_geometry, HE11)
    pump_tab = mode_table(design_geometry, HE12)
    wp = CW.omega
    w0 = wp / 3
    L, g = 0.01, tospdc_cw.gamma
    n_p = pump_tab.n_eff(wp)
    integral = h3(w0, w0, w0, tab) * 2 * np.pi**2 / (L * tab.k2(w0)) / np.sqrt(3)
    eta = 36 * hbar**2 * c**3 * n_p**3 * g**2 * L**2 / (np.pi**2 * wp) * integral
    assert tospdc_cw.eta == pytest.approx(eta, rel=2e-2)


def test_sfwm_pulsed_to_cw_ratio(sfwm_cw, sfwm_pulsed):
    # narrow-pump limit of the two formulas: η_pulsed/η_cw = σ/(2√π R)
    ratio = sfwm_pulsed.eta / sfwm_cw.eta
    assert ratio == pytest.approx(PUMP.sigma / (2 * np.sqrt(np.pi) * PUMP.rep_rate), rel=2e-2)


def test_sfwm_linear_in_power_frozen_phase(geometry):
    base = EfficiencyRequest("sfwm", geometry, PUMP, 0.01, nl_power=PUMP.peak_power)
    a = efficiency(base).eta
    b = efficiency(base.with_(pump=PUMP.with_(power=0.36))).eta
    assert b / a == pytest.approx(2.0, rel=1e-2)


def test_sfwm_linear_in_power_live_phase(geometry, sfwm_pulsed):
    b = efficiency(EfficiencyRequest("sfwm", geometry, PUMP.with_(power=0.36), 0.01)).eta
    assert b / sfwm_pulsed.eta == pytest.approx(2.0, rel=2e-2)


def test_bare_integral_scales_inverse_length(geometry, sfwm_cw):
    r2 = efficiency(EfficiencyRequest("sfwm", geometry, CW, 0.02, "cw"))
    assert r2.integral / sfwm_cw.integral == pytest.approx(0.5, rel=5e-2)


def test_tospdc_bare_integral_scales_inverse_length(design_geometry, tospdc_cw):
    r2 = efficiency(EfficiencyRequest("tospdc", design_geometry, CW, 0.02, "cw"))
    assert r2.integral / tospdc_cw.integral == pytest.approx(0.5, rel=5e-2)


def test_refinement_sfwm(geometry, sfwm_pulsed):
    fine = efficiency(EfficiencyRequest("sfwm", geometry, PUMP, 0.01, quadrature=QuadratureSettings().refined()))
    assert fine.eta == pytest.approx(sfwm_pulsed.eta, rel=1e-2)


def test_refinement_tospdc_cw(design_geometry, tospdc_cw):
    fine = efficiency(EfficiencyRequest("tospdc", design_geometry, CW, 0.01, "cw",
                                        quadrature=QuadratureSettings().refined()))
    assert fine.eta == pytest.approx(tospdc_cw.eta, rel=1e-2)


def test_gamma_override_is_quadratic(design_geometry, tospdc_cw):
    r = eta_tospdc_cw(EfficiencyRequest("tospdc", design_geometry, CW, 0.01, "cw", gamma=2 * tospdc_cw.gamma))
    assert r.eta == pytest.approx(4 * tospdc_cw.eta, rel=1e-12)


def test_unreachable_error_target(geometry):
    with pytest.raises(QuadratureError):
        efficiency(EfficiencyRequest("sfwm", geometry, CW, 0.01, "cw",
                                     quadrature=QuadratureSettings(target=1e-12)))


def test_sweep_order_and_slope(geometry):
    rows = sweep(EfficiencyRequest("sfwm", geometry, CW, 0.01, "cw"), "length", [0.004, 0.002, 0.008])
    assert [v for v, _ in rows] == [0.004, 0.002, 0.008]
    slope, r2 = loglog_slope([v for v, _ in rows], [r.eta for _, r in rows])
    assert slope == pytest.approx(1.0, abs=0.05) and r2 > 0.999
    with pytest.raises(ValueError):
        sweep(EfficiencyRequest("sfwm", geometry, CW, 0.01, "cw"), "radius", [1.0])


def test_loglog_slope_exact():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    assert loglog_slope(x, 3 * x**1.5) == pytest.approx((1.5, 1.0))
