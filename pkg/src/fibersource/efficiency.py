"""Absolute conversion efficiencies of degenerate-pump SFWM and TOSPDC in
the pulsed and monochromatic regimes, plus parameter sweeps.

Notation: p is the average pump power, R the repetition rate, σ the pump
bandwidth in rad/s, L the fiber length.  Degenerate-pump SFWM is treated as
two pumps with p₁ = p₂ = p, ω₁ = ω₂ = ω_p and σ₁ = σ₂ = σ.  The n's in the
prefactors and in h₂, h₃ are mode effective indices; the nonlinear
coefficients come from :mod:`fibersource.nonlinear`.

SFWM integrals run around the outer phasematching branch only; the
self-phasematched region around ω_s = ω_i = ω_p and the inner branch are
excluded (Raman-contaminated and not part of the designed source).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import c, hbar
from scipy.optimize import brentq

from .errors import NoSolutionInBracket, QuadratureError
from .modes import HE11, HE12, FiberGeometry, mode_table
from .nonlinear import CHI3_DEFAULT, sfwm_coefficients, tospdc_coefficients
from .phasematching import SfwmProcess, TospdcProcess, sfwm_anchor
from .quadrature import gauss_hermite, sinc2_integral
from .spectrum import TOSPDC_MATRIX, PumpConfig, sinc, tospdc_inverse

PROCESSES = ("sfwm", "tospdc")
REGIMES = ("pulsed", "cw")


@dataclass(frozen=True)
class QuadratureSettings:
    lobes: int = 320
    n_gl: int = 10
    n_outer: int = 10
    n_inner: int = 12
    n_theta: int = 12
    target: float = 1e-2

    def refined(self, factor=2):
        return QuadratureSettings(self.lobes * factor, self.n_gl + 4, self.n_outer * factor, self.n_inner * factor,
                                  self.n_theta * factor, self.target)


@dataclass(frozen=True)
class EfficiencyRequest:
    """One efficiency evaluation.

    ``gamma`` overrides the computed four-field coefficient (1/(W m));
    ``nl_power`` overrides the power used in the nonlinear phase (set it to
    freeze Φ_NL while p varies; 0 removes it).
    """

    process: str
    geometry: FiberGeometry
    pump: PumpConfig
    length: float
    regime: str = "pulsed"
    chi3: float = CHI3_DEFAULT
    convention: str = "vector"
    gamma: float = None
    nl_power: float = None
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)

    def __post_init__(self):
        if self.process not in PROCESSES:
            raise ValueError(f"process must be one of {PROCESSES}")
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}")
        if self.regime == "cw" and self.pump.sigma != 0:
            raise ValueError("the cw regime requires sigma = 0")
        if self.regime == "pulsed" and not self.pump.sigma > 0:
            raise ValueError("the pulsed regime requires sigma > 0")
        if not self.length > 0:
            raise ValueError("fiber length must be positive")

    @property
    def phase_power(self):
        return self.pump.peak_power if self.nl_power is None else self.nl_power

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass
class EfficiencyResult:
    """η = prefactor × integral, with everything needed to audit it."""

    eta: float
    prefactor: float
    integral: float
    rel_error: float
    gamma: float
    factors: dict
    request: dict

    def to_dict(self):
        return {
            "eta": self.eta,
            "prefactor": self.prefactor,
            "integral": self.integral,
            "rel_error": self.rel_error,
            "gamma_per_W_m": self.gamma,
            "factors": self.factors,
            "request": self.request,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, sort_keys=True, default=float)


def h2(omega_s, omega_i, dispersion):
    """(k_s⁽¹⁾ω_s/n_s²)(k_i⁽¹⁾ω_i/n_i²) with effective indices."""
    ws, wi = np.asarray(omega_s), np.asarray(omega_i)
    return (dispersion.k1(ws) * ws / dispersion.n_eff(ws) ** 2) * (dispersion.k1(wi) * wi / dispersion.n_eff(wi) ** 2)


def h3(omega_r, omega_s, omega_i, dispersion):
    """Π_μ k_μ⁽¹⁾ω_μ/n_μ² over the three photons."""
    out = 1.0
    for w in (omega_r, omega_s, omega_i):
        w = np.asarray(w)
        out = out * dispersion.k1(w) * w / dispersion.n_eff(w) ** 2
    return out


def _describe(req):
    return {
        "process": req.process,
        "regime": req.regime,
        "core_radius_m": req.geometry.core_radius,
        "pump_wavelength_um": req.pump.wavelength_um,
        "sigma_rad_s": req.pump.sigma,
        "average_power_W": req.pump.power,
        "rep_rate_Hz": req.pump.rep_rate,
        "length_m": req.length,
        "chi3": req.chi3,
        "convention": req.convention,
        "phase_power_W": req.phase_power,
    }


def _result(req, prefactor, integral, error, gamma, factors):
    rel = error / abs(integral) if integral else np.inf
    if not np.isfinite(integral) or integral < 0:
        raise QuadratureError(f"efficiency integral evaluated to {integral!r}")
    if rel > req.quadrature.target:
        raise QuadratureError(f"estimated relative error {rel:.2e} exceeds the target {req.quadrature.target}")
    return EfficiencyResult(prefactor * integral, prefactor, integral, rel, gamma, factors, _describe(req))


# ---------------------------------------------------------------------------
# SFWM


def _sfwm_setup(req):
    table = mode_table(req.geometry, HE11)
    wp = req.pump.omega
    probe = SfwmProcess(table)
    ws0, wi0 = sfwm_anchor(probe, wp, 0.0)
    coeff = sfwm_coefficients(req.geometry, wp, ws0, wi0, chi3=req.chi3, convention=req.convention)
    process = SfwmProcess(table, coeff.gamma_p, coeff.gamma_p)
    gamma = coeff.gamma_fwm if req.gamma is None else req.gamma
    return table, process, gamma, coeff


def _signal_limits(table, total):
    """Signal range keeping both photons inside the table, signal above the idler."""
    lo = 0.5 * total * (1 + 1e-6)
    hi = min(table.omega_max, total - table.omega_min)
    return lo, hi


def _root_near(f, guess, lo, hi, step):
    """Bracket and refine a root of f close to ``guess`` within [lo, hi]."""
    f0 = f(guess)
    if f0 == 0:
        return guess
    for k in range(60):
        a, b = max(lo, guess - step), min(hi, guess + step)
        fa, fb = f(a), f(b)
        if np.signbit(fa) != np.signbit(f0):
            return brentq(f, a, guess, xtol=1e-12 * guess)
        if np.signbit(fb) != np.signbit(f0):
            return brentq(f, guess, b, xtol=1e-12 * guess)
        step *= 2
    raise NoSolutionInBracket("phasematching anchor lost while scanning the pump bandwidth")


def eta_sfwm_cw(req):
    """Monochromatic-pump SFWM efficiency (degenerate pumps)."""
    if req.regime != "cw":
        raise ValueError("eta_sfwm_cw needs a cw request")
    table, process, gamma, coeff = _sfwm_setup(req)
    q = req.quadrature
    wp, L, p = req.pump.omega, req.length, req.pump.power
    P = req.phase_power
    dk = lambda ws: process.delta_k_cw(ws, 2 * wp - ws, wp, wp, P, P)
    z = lambda ws: 0.5 * L * dk(ws)
    lo, hi = _signal_limits(table, 2 * wp)
    anchor = _root_near(z, sfwm_anchor(process, wp, P)[0], lo, hi, 1e-4 * wp)
    amp = lambda ws: h2(ws, 2 * wp - ws, table)
    f = lambda ws: amp(ws) * sinc(z(ws)) ** 2
    res = sinc2_integral(f, z, anchor, lo, hi, amp=amp, lobes=q.lobes, n_gl=q.n_gl)
    n_p = float(table.n_eff(wp))
    prefactor = 2**5 * hbar * c**2 * n_p**2 / np.pi * L**2 * gamma**2 * p * p / (2 * p * wp)
    factors = {"n_p": n_p, "anchor_signal_rad_s": anchor, "anchor_idler_rad_s": 2 * wp - anchor,
               "tail": res.tail, "window_rad_s": list(res.window), "gamma_self": coeff.gamma_p}
    return _result(req, prefactor, res.value, res.error, gamma, factors)


def _sfwm_inner(process, table, wp, sigma, L, P, total, anchor_guess, q):
    """∫dω_s h₂|S|² at fixed ω_s + ω_i = total, S = Σⱼwⱼφ over the pump nodes."""
    u, w = gauss_hermite(q.n_inner)
    shift = sigma * u / np.sqrt(2)
    z0 = lambda ws: 0.25 * L * process.delta_k(0.5 * total, ws, total - ws, P, P) * 2
    lo, hi = _signal_limits(table, total)
    anchor = _root_near(z0, anchor_guess, lo, hi, 1e-5 * wp)

    def S(ws):
        ws = np.asarray(ws)[..., None]
        omega = 0.5 * total + shift
        x = 0.5 * L * process.delta_k(omega, ws, total - ws, P, P)
        return np.sum(w * sinc(x) * np.exp(1j * x), axis=-1)

    amp = lambda ws: np.pi * h2(ws, total - ws, table)
    f = lambda ws: h2(ws, total - ws, table) * np.abs(S(ws)) ** 2
    return sinc2_integral(f, z0, anchor, lo, hi, amp=amp, lobes=q.lobes, n_gl=q.n_gl), anchor


def eta_sfwm_pulsed(req):
    """Pulsed degenerate-pump SFWM efficiency.

    With Σ = ω_s + ω_i = 2ω_p + σx the bare amplitude satisfies
    |f|² = (σ²/2) e^{−x²} |S|², so ∫∫h₂|f|² = (σ³/2) Σₖ Wₖ ∫dω_s h₂|S|²
    with Gauss-Hermite weights Wₖ in x.
    """
    if req.regime != "pulsed":
        raise ValueError("eta_sfwm_pulsed needs a pulsed request")
    table, process, gamma, coeff = _sfwm_setup(req)
    q = req.quadrature
    wp, L, p, sigma, R = req.pump.omega, req.length, req.pump.power, req.pump.sigma, req.pump.rep_rate
    P = req.phase_power
    x, W = gauss_hermite(q.n_outer)
    order = np.argsort(np.abs(x))
    anchors = {}
    inner = np.empty_like(x)
    errs = np.empty_like(x)
    guess = sfwm_anchor(process, wp, P)[0]
    for k in order:
        total = 2 * wp + sigma * x[k]
        res, anchor = _sfwm_inner(process, table, wp, sigma, L, P, total, guess + 0.5 * sigma * x[k], q)
        inner[k], errs[k] = res.value, res.error
        anchors[k] = anchor
    integral = 0.5 * sigma**3 * float(np.sum(W * inner))
    error = 0.5 * sigma**3 * float(np.sum(W * errs))
    n_p = float(table.n_eff(wp))
    prefactor = (2**8 * hbar * c**2 * n_p**2 / ((2 * np.pi) ** 3 * R)
                 * L**2 * gamma**2 * p * p / (sigma * sigma * 2 * wp * p))
    factors = {"n_p": n_p, "anchor_signal_rad_s": anchors[order[0]], "gamma_self": coeff.gamma_p,
               "n_outer": q.n_outer, "n_inner": q.n_inner}
    return _result(req, prefactor, integral, error, gamma, factors)


# ---------------------------------------------------------------------------
# TOSPDC


def _tospdc_setup(req):
    pump_table = mode_table(req.geometry, HE12)
    table = mode_table(req.geometry, HE11)
    wp = req.pump.omega
    coeff = tospdc_coefficients(req.geometry, wp, chi3=req.chi3, convention=req.convention)
    process = TospdcProcess(pump_table, table, coeff.gamma_p - 2 * (coeff.gamma_rp + coeff.gamma_sp + coeff.gamma_ip))
    gamma = coeff.gamma_pdc if req.gamma is None else req.gamma
    return pump_table, table, process, gamma, coeff


def _rho_limit(table, omega0, nu_plus, theta):
    """Largest ρ keeping all three photons inside the table along direction θ."""
    d = TOSPDC_MATRIX[1] * np.cos(theta) + TOSPDC_MATRIX[2] * np.sin(theta)
    base = omega0 + nu_plus * TOSPDC_MATRIX[0]
    lim = np.inf
    for b, dm in zip(base, d):
        if dm > 0:
            lim = min(lim, (table.omega_max - b) / dm)
        elif dm < 0:
            lim = min(lim, (b - table.omega_min) / -dm)
    return lim * (1 - 1e-9)


def _tospdc_plane(process, table, omega0, nu_plus, L, P, q):
    """∫∫dν_A dν_B h₃ sinc²(LΔk/2) on the plane of fixed ν₊, in polar
    coordinates about ν_A = ν_B = 0 with u = ρ² (dν_A dν_B = ½ dθ du)."""
    thetas = np.arange(q.n_theta) * (2 * np.pi / q.n_theta)
    total, err = 0.0, 0.0
    for th in thetas:
        c_, s_ = np.cos(th), np.sin(th)
        rho_max = _rho_limit(table, omega0, nu_plus, th)
        u_max = rho_max**2

        def omegas(u):
            rho = np.sqrt(np.maximum(u, 0.0))
            return tospdc_inverse(nu_plus, rho * c_, rho * s_, omega0)

        z = lambda u: 0.5 * L * process.delta_k(*omegas(u), P)
        amp = lambda u: h3(*omegas(u), table)
        f = lambda u: amp(u) * sinc(z(u)) ** 2
        z0 = float(z(np.array([0.0]))[0])
        h = 1e-6 * u_max
        slope = (float(z(np.array([h]))[0]) - z0) / h
        anchor = 0.0
        if slope != 0 and z0 * slope < 0:
            guess = -z0 / slope
            if guess < u_max:
                zs = lambda u: float(z(np.array([u]))[0])
                hi = min(u_max, 2 * guess)
                while zs(hi) * z0 > 0 and hi < u_max:
                    hi = min(u_max, 2 * hi)
                if zs(hi) * z0 <= 0:
                    anchor = brentq(zs, 0.0, hi, xtol=1e-12 * hi)
        res = sinc2_integral(f, z, anchor, 0.0, u_max, amp=amp, lobes=q.lobes, n_gl=q.n_gl)
        total += res.value
        err += res.error
    scale = 0.5 * (2 * np.pi / q.n_theta)
    return scale * total, scale * err


def _tospdc_prefactor_cw(table_p, wp, gamma, L):
    n_p = float(table_p.n_eff(wp))
    return 4 * 9 * hbar**2 * c**3 * n_p**3 * gamma**2 * L**2 / (np.pi**2 * wp), n_p


def eta_tospdc_cw(req):
    """Monochromatic-pump TOSPDC efficiency.

    The (ω_r, ω_s) integral equals ∫∫dν_A dν_B/√3 on the ν₊ = 0 plane.
    """
    if req.regime != "cw":
        raise ValueError("eta_tospdc_cw needs a cw request")
    pump_table, table, process, gamma, coeff = _tospdc_setup(req)
    wp, L = req.pump.omega, req.length
    plane, err = _tospdc_plane(process, table, wp / 3, 0.0, L, req.phase_power, req.quadrature)
    integral, error = plane / np.sqrt(3), err / np.sqrt(3)
    prefactor, n_p = _tospdc_prefactor_cw(pump_table, wp, gamma, L)
    factors = {"n_p": n_p, "nl_coefficient": process.nl_coefficient, "gamma_self_pump": coeff.gamma_p}
    return _result(req, prefactor, integral, error, gamma, factors)


def eta_tospdc_pulsed(req):
    """Pulsed TOSPDC efficiency.

    |g|² = exp(−6ν₊²/σ²)|φ|², so with ν₊ = σx/√6 the triple integral is
    (σ/√6) Σₖ Wₖ J(ν₊ₖ), J the plane integral at fixed ν₊.
    """
    if req.regime != "pulsed":
        raise ValueError("eta_tospdc_pulsed needs a pulsed request")
    pump_table, table, process, gamma, coeff = _tospdc_setup(req)
    q = req.quadrature
    wp, L, sigma = req.pump.omega, req.length, req.pump.sigma
    x, W = gauss_hermite(q.n_outer)
    vals, errs = [], []
    for xk in x:
        v, e = _tospdc_plane(process, table, wp / 3, sigma * xk / np.sqrt(6), L, req.phase_power, q)
        vals.append(v)
        errs.append(e)
    integral = sigma / np.sqrt(6) * float(np.sum(W * np.array(vals)))
    error = sigma / np.sqrt(6) * float(np.sum(W * np.array(errs)))
    n_p = float(pump_table.n_eff(wp))
    prefactor = 2**2.5 * 9 * c**3 * hbar**2 * n_p**3 / (np.pi**2.5 * wp) * L**2 * gamma**2 / sigma
    factors = {"n_p": n_p, "nl_coefficient": process.nl_coefficient, "gamma_self_pump": coeff.gamma_p,
               "n_outer": q.n_outer}
    return _result(req, prefactor, integral, error, gamma, factors)


def efficiency(req):
    """Dispatch on process and regime."""
    fn = {
        ("sfwm", "pulsed"): eta_sfwm_pulsed,
        ("sfwm", "cw"): eta_sfwm_cw,
        ("tospdc", "pulsed"): eta_tospdc_pulsed,
        ("tospdc", "cw"): eta_tospdc_cw,
    }[(req.process, req.regime)]
    return fn(req)


SWEEP_PARAMETERS = ("bandwidth", "power", "length")


def sweep(template, parameter, values):
    """Evaluate ``template`` with ``parameter`` set to each value in turn.

    ``bandwidth`` values are σ in rad/s (ignored for cw requests), ``power``
    average powers in W, ``length`` fiber lengths in m.  Returns a list of
    (value, EfficiencyResult) in the order given.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"parameter must be one of {SWEEP_PARAMETERS}")
    rows = []
    for v in values:
        v = float(v)
        if parameter == "bandwidth":
            req = template if template.regime == "cw" else template.with_(pump=template.pump.with_(sigma=v))
        elif parameter == "power":
            req = template.with_(pump=template.pump.with_(power=v))
        else:
            req = template.with_(length=v)
        rows.append((v, efficiency(req)))
    return rows


def loglog_slope(xs, ys):
    """Least-squares slope and R² of log y against log x."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    fit = A @ coef
    ss_res = float(np.sum((ly - fit) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[0]), r2
