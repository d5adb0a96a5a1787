"""Phase mismatch for degenerate-pump SFWM and TOSPDC, perfect-phasematching
contours and the core-radius design problem.

Detunings follow the contour plots: for SFWM Δ_s = ω_s − ω_p = −Δ_i, and
for TOSPDC at fixed ω_i, Δ_r = ω_r − (ω_p − ω_i)/2 = −Δ_s.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.constants import c
from scipy.optimize import brentq

from .errors import ModeCutoff, NoSolutionInBracket
from .materials import omega_to_um, um_to_omega
from .modes import HE11, HE12, FiberGeometry, effective_index, mode_profile, mode_table
from .nonlinear import CHI3_DEFAULT, effective_area_single, gamma_self, tospdc_coefficients

RESIDUAL_TOL = 1e-3  # rad/m
SCAN_POINTS = 2000


@dataclass(frozen=True)
class SfwmProcess:
    """Degenerate-pump SFWM with pumps, signal and idler all in HE₁₁.

    ``gamma1`` and ``gamma2`` are the pump self-phase coefficients entering
    Φ_NL = γ₁P₁ + γ₂P₂; they default to zero (linear phasematching).
    """

    dispersion: object
    gamma1: float = 0.0
    gamma2: float = 0.0

    kind = "sfwm"

    def phi_nl(self, P1, P2=None):
        P2 = P1 if P2 is None else P2
        return self.gamma1 * P1 + self.gamma2 * P2

    def delta_k(self, omega, omega_s, omega_i, P1=0.0, P2=None):
        k = self.dispersion.beta
        omega2 = np.asarray(omega_s) + np.asarray(omega_i) - np.asarray(omega)
        return k(omega) + k(omega2) - k(omega_s) - k(omega_i) - self.phi_nl(P1, P2)

    def delta_k_cw(self, omega_s, omega_i, omega1, omega2=None, p1=0.0, p2=None):
        omega2 = omega1 if omega2 is None else omega2
        k = self.dispersion.beta
        total = np.asarray(omega_s) + np.asarray(omega_i)
        return (k((total + omega1 - omega2) / 2) + k((total - omega1 + omega2) / 2)
                - k(omega_s) - k(omega_i) - self.phi_nl(p1, p2))


@dataclass(frozen=True)
class TospdcProcess:
    """TOSPDC with the pump in HE₁₂ and all three photons in HE₁₁.

    ``nl_coefficient`` is γ_p − 2(γ_rp + γ_sp + γ_ip), multiplied by the pump
    peak power inside the mismatch.
    """

    pump_dispersion: object
    dispersion: object
    nl_coefficient: float = 0.0

    kind = "tospdc"

    def phi_nl(self, P):
        return self.nl_coefficient * P

    def delta_k(self, omega_r, omega_s, omega_i, P=0.0):
        k = self.dispersion.beta
        omega_p = np.asarray(omega_r) + np.asarray(omega_s) + np.asarray(omega_i)
        return self.pump_dispersion.beta(omega_p) - k(omega_r) - k(omega_s) - k(omega_i) + self.phi_nl(P)

    def delta_k_cw(self, omega_r, omega_s, omega_p, p=0.0):
        omega_i = omega_p - np.asarray(omega_r) - np.asarray(omega_s)
        k = self.dispersion.beta
        return self.pump_dispersion.beta(omega_p) - k(omega_r) - k(omega_s) - k(omega_i) + self.phi_nl(p)


def sfwm_process(geometry, omega_p=None, chi3=CHI3_DEFAULT, convention="vector", nonlinear=True):
    """SFWM process on ``geometry`` with γ₁ = γ₂ evaluated at pump ``omega_p``."""
    table = mode_table(geometry, HE11)
    g = 0.0
    if nonlinear:
        if omega_p is None:
            raise ValueError("omega_p is needed to evaluate the pump self-phase coefficient")
        prof = mode_profile(geometry, HE11, omega_p, convention)
        g = gamma_self(omega_p, float(geometry.core_index(omega_p)), effective_area_single(prof), chi3)
    return SfwmProcess(table, g, g)


def tospdc_process(geometry, omega_p=None, chi3=CHI3_DEFAULT, convention="vector", nonlinear=True):
    """TOSPDC process on ``geometry``; nonlinear terms evaluated for
    frequency-degenerate triplets of a pump at ``omega_p``."""
    pump = mode_table(geometry, HE12)
    table = mode_table(geometry, HE11)
    coeff = 0.0
    if nonlinear:
        if omega_p is None:
            raise ValueError("omega_p is needed to evaluate the nonlinear coefficients")
        t = tospdc_coefficients(geometry, omega_p, chi3=chi3, convention=convention)
        coeff = t.gamma_p - 2 * (t.gamma_rp + t.gamma_sp + t.gamma_ip)
    return TospdcProcess(pump, table, coeff)


def delta_k_sfwm(omega, omega_s, omega_i, process, powers=(0.0, 0.0)):
    """k(ω) + k(ω_s+ω_i−ω) − k(ω_s) − k(ω_i) − Φ_NL (rad/m)."""
    return process.delta_k(omega, omega_s, omega_i, *powers)


def delta_k_sfwm_cw(omega_s, omega_i, process, omega1, omega2=None, powers=(0.0, 0.0)):
    """Monochromatic-pump mismatch with the pump arguments written as half sums."""
    return process.delta_k_cw(omega_s, omega_i, omega1, omega2, *powers)


def delta_k_tospdc(omega_r, omega_s, omega_i, process, power=0.0):
    """k_p(ω_r+ω_s+ω_i) − k(ω_r) − k(ω_s) − k(ω_i) + [γ_p − 2Σγ_μp]P (rad/m)."""
    return process.delta_k(omega_r, omega_s, omega_i, power)


@dataclass(frozen=True)
class ContourPoint:
    omega_p: float
    detuning: float
    branch: str
    residual: float
    omega_1: float
    omega_2: float
    omega_3: float = float("nan")

    @property
    def wavelength_p_um(self):
        return float(omega_to_um(self.omega_p))


def _roots_1d(f, lo, hi, n, tol=RESIDUAL_TOL):
    x = np.linspace(lo, hi, n)
    y = f(x)
    ok = np.isfinite(y)
    roots = []
    for j in np.nonzero(ok[:-1] & ok[1:] & (np.signbit(y[:-1]) != np.signbit(y[1:])))[0]:
        r = brentq(f, x[j], x[j + 1], xtol=1e-14 * abs(x[j + 1]) + 1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
        res = float(abs(f(r)))
        if res <= tol:
            roots.append((r, res))
    return roots


def sfwm_roots(process, omega_p, P=0.0, n_scan=SCAN_POINTS, min_detuning=None):
    """Nonnegative detunings Δ_s at which the degenerate-pump SFWM mismatch
    vanishes for pump ``omega_p`` with peak power ``P`` per pump."""
    tab = process.dispersion
    hi = min(tab.omega_max - omega_p, omega_p - tab.omega_min)
    lo = 1e-4 * omega_p if min_detuning is None else min_detuning
    if hi <= lo:
        return []
    f = lambda d: process.delta_k(omega_p, omega_p + d, omega_p - d, P, P)
    return _roots_1d(f, lo, hi, n_scan)


def sfwm_contour(process, omega_p_values, P=0.0, n_scan=SCAN_POINTS):
    """Perfect-phasematching points for each pump frequency, tagged as
    ``outer`` (largest Δ_s) or ``inner`` (smallest) when two roots exist;
    a lone root is tagged ``outer``.  Returns ``{"outer": [...], "inner": [...]}``."""
    out = {"outer": [], "inner": []}
    for wp in sorted(float(w) for w in omega_p_values):
        tab = process.dispersion
        if not (tab.omega_min < wp < tab.omega_max):
            continue
        roots = sorted(sfwm_roots(process, wp, P, n_scan))
        if not roots:
            continue
        tags = ["outer"] if len(roots) == 1 else ["inner"] + ["extra"] * (len(roots) - 2) + ["outer"]
        for (d, res), tag in zip(roots, tags):
            if tag == "extra":
                tag = "outer"
            out[tag].append(ContourPoint(wp, d, tag, res, wp + d, wp - d))
    return out


def sfwm_anchor(process, omega_p, P=0.0, branch="outer"):
    """(ω_s, ω_i) on the requested branch at pump ``omega_p``."""
    roots = sorted(sfwm_roots(process, omega_p, P))
    if not roots:
        raise NoSolutionInBracket(f"no SFWM phasematching at pump {omega_to_um(omega_p):.4f} um")
    d = roots[-1][0] if branch == "outer" else roots[0][0]
    return omega_p + d, omega_p - d


def contour_extent(points):
    """Span (m) of pump wavelengths covered by contour points."""
    if not points:
        return 0.0
    lam = [2 * np.pi * c / p.omega_p for p in points]
    return max(lam) - min(lam)


def sfwm_contour_extent(process, P=0.0, n_pump=400, n_scan=SCAN_POINTS):
    """Pump-wavelength span (m) of the SFWM contour, with its ends refined by
    bisection on whether any root exists."""
    tab = process.dispersion
    grid = np.linspace(tab.omega_min, tab.omega_max, n_pump + 2)[1:-1]
    has = np.array([bool(sfwm_roots(process, w, P, n_scan)) for w in grid])
    if not has.any():
        return 0.0, None, None
    idx = np.nonzero(has)[0]

    def edge(inside, outside):
        for _ in range(40):
            mid = 0.5 * (inside + outside)
            if sfwm_roots(process, mid, P, n_scan):
                inside = mid
            else:
                outside = mid
            if abs(inside - outside) < 1e-9 * inside:
                break
        return inside

    lo_in = grid[idx[0]]
    hi_in = grid[idx[-1]]
    lo = edge(lo_in, grid[idx[0] - 1]) if idx[0] > 0 else lo_in
    hi = edge(hi_in, grid[idx[-1] + 1]) if idx[-1] < len(grid) - 1 else hi_in
    lam_max, lam_min = 2 * np.pi * c / lo, 2 * np.pi * c / hi
    return lam_max - lam_min, lam_min, lam_max


def tospdc_roots(process, omega_p, omega_i, P=0.0, n_scan=SCAN_POINTS):
    """Detunings Δ_r ≥ 0 with Δk = 0 at pump ``omega_p`` and fixed ``omega_i``."""
    tab = process.dispersion
    centre = 0.5 * (omega_p - omega_i)
    if not (tab.omega_min < centre < tab.omega_max and tab.omega_min <= omega_i <= tab.omega_max):
        return []
    hi = min(tab.omega_max - centre, centre - tab.omega_min)
    f = lambda d: process.delta_k(centre + d, centre - d, omega_i, P)
    found = _roots_1d(f, 0.0, hi, n_scan)
    # Δ = 0 is a root only at the vertex; f is even so scanning from 0 finds it as a sign change
    # only when f(0) is exactly zero, which the vertex solver handles separately
    return [(d, res) for d, res in found if d > 0]


def tospdc_vertex(process, omega_i, P=0.0, bracket=None):
    """Pump frequency at which the fixed-ω_i contour reaches Δ_r = 0."""
    tabp = process.pump_dispersion
    lo, hi = bracket or (max(tabp.omega_min, 3 * omega_i * 0.9), min(tabp.omega_max, 3 * omega_i * 1.1))
    if not hi > lo:
        raise NoSolutionInBracket("the pump window around 3*omega_i lies outside the pump-mode table")
    f = lambda wp: process.delta_k(0.5 * (wp - omega_i), 0.5 * (wp - omega_i), omega_i, P)
    xs = np.linspace(lo, hi, 201)
    ys = np.array([f(x) for x in xs])
    idx = np.nonzero(np.signbit(ys[:-1]) != np.signbit(ys[1:]))[0]
    if idx.size == 0:
        raise NoSolutionInBracket("no degenerate TOSPDC point in the pump window")
    j = idx[np.argmin(abs(xs[idx] - 3 * omega_i))]
    return brentq(f, xs[j], xs[j + 1], xtol=1e-6, rtol=4 * np.finfo(float).eps)


def tospdc_contour(process, omega_i, omega_p_values, P=0.0, n_scan=SCAN_POINTS, include_vertex=True):
    """Open TOSPDC contour at fixed ``omega_i``: one branch, points at ±Δ_r."""
    pts = []
    for wp in sorted(float(w) for w in omega_p_values):
        tabp = process.pump_dispersion
        if not (tabp.omega_min <= wp <= tabp.omega_max):
            continue
        centre = 0.5 * (wp - omega_i)
        for d, res in tospdc_roots(process, wp, omega_i, P, n_scan):
            for s in (-1.0, 1.0):
                pts.append(ContourPoint(wp, s * d, "single", res, centre + s * d, centre - s * d, omega_i))
    if include_vertex:
        try:
            wv = tospdc_vertex(process, omega_i, P)
            centre = 0.5 * (wv - omega_i)
            res = float(abs(process.delta_k(centre, centre, omega_i, P)))
            pts.append(ContourPoint(wv, 0.0, "single", res, centre, centre, omega_i))
        except NoSolutionInBracket:
            pass
    pts.sort(key=lambda p: (p.omega_p, p.detuning))
    return pts


def contour_csv(points, process_kind, path=None):
    """CSV text (written to ``path`` when given) for a list of contour points."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if process_kind == "sfwm":
        w.writerow(["omega_p_rad_s", "lambda_p_um", "branch", "detuning_rad_s", "lambda_s_um", "lambda_i_um",
                    "residual_rad_m"])
        for p in points:
            w.writerow([f"{p.omega_p:.8e}", f"{omega_to_um(p.omega_p):.8e}", p.branch, f"{p.detuning:.8e}",
                        f"{omega_to_um(p.omega_1):.8e}", f"{omega_to_um(p.omega_2):.8e}", f"{p.residual:.8e}"])
    else:
        w.writerow(["omega_p_rad_s", "lambda_p_um", "branch", "detuning_rad_s", "lambda_r_um", "lambda_s_um",
                    "lambda_i_um", "residual_rad_m"])
        for p in points:
            w.writerow([f"{p.omega_p:.8e}", f"{omega_to_um(p.omega_p):.8e}", p.branch, f"{p.detuning:.8e}",
                        f"{omega_to_um(p.omega_1):.8e}", f"{omega_to_um(p.omega_2):.8e}",
                        f"{omega_to_um(p.omega_3):.8e}", f"{p.residual:.8e}"])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# design inversion


def degenerate_mismatch(radius, omega, material=None, cladding_index=1.0):
    """k_{HE12}(3ω) − 3k_{HE11}(ω) (rad/m) for a rod of the given radius."""
    geometry = FiberGeometry(radius, material, cladding_index) if material else FiberGeometry(radius, cladding_index=cladding_index)
    kp = effective_index(geometry, HE12, 3 * omega) * 3 * omega / c
    k = effective_index(geometry, HE11, omega) * omega / c
    return kp - 3 * k


def degenerate_tospdc_radius(wavelength_um, r_range=(0.2e-6, 1.5e-6), n_scan=41, material=None,
                             cladding_index=1.0, tol=RESIDUAL_TOL):
    """Core radius (m) that phasematches frequency-degenerate TOSPDC with
    triplets at ``wavelength_um``: k_{HE12}(3ω) = 3k_{HE11}(ω).

    The radius window is scanned for a sign change, then refined with
    Brent's method until the residual mismatch is below ``tol`` rad/m.
    """
    from .materials import fused_silica

    model = material or fused_silica()
    model.check([wavelength_um, wavelength_um / 3])
    omega = float(um_to_omega(wavelength_um))

    def f(r):
        try:
            return degenerate_mismatch(r, omega, material, cladding_index)
        except ModeCutoff:
            return np.nan

    rs = np.linspace(r_range[0], r_range[1], n_scan)
    vals = np.array([f(r) for r in rs])
    ok = np.isfinite(vals)
    idx = np.nonzero(ok[:-1] & ok[1:] & (np.signbit(vals[:-1]) != np.signbit(vals[1:])))[0]
    if idx.size == 0:
        raise NoSolutionInBracket(
            f"degenerate TOSPDC mismatch never changes sign for radii in "
            f"[{r_range[0]:.3e}, {r_range[1]:.3e}] m at {wavelength_um} um"
        )
    j = idx[0]
    r = brentq(f, rs[j], rs[j + 1], xtol=1e-18, rtol=4 * np.finfo(float).eps, maxiter=200)
    residual = abs(f(r))
    if residual > tol:
        raise NoSolutionInBracket(f"radius refinement left a residual of {residual:.3e} rad/m")
    return r
