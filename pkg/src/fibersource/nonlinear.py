"""Effective areas, nonlinear coefficients and nonlinear phase terms.

Overlap integrals accept any :class:`~fibersource.modes.TransverseProfile`.
Fields are complex 3-vectors; for an isotropic χ⁽³⁾ the scalar product
A₁A₂A₃*A₄* generalises to the fully symmetrised contraction

    T(u, v, w, x) = [(u·v)(w·x) + (u·w)(v·x) + (u·x)(v·w)] / 3

with the conjugations applied to the appropriate fields first.  Scalar
(x-polarised) profiles make every term identical, so T reduces to the plain
product and the textbook area definitions are recovered exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.constants import c, epsilon_0

from .errors import UnnormalizedProfile
from .modes import HE11, HE12, mode_profile, polar_grid_for

CHI3_DEFAULT = 2.5e-22
CHI3_VERSION = "chi3-fused-silica/2.5e-22"
NORM_TOL = 1e-4
ZERO_OVERLAP = 1e-10

SFWM_CONJUGATION = (False, False, True, True)
TOSPDC_CONJUGATION = (False, True, True, True)


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _fields(profiles, grid, check=True):
    out = []
    for p in profiles:
        E = p.field(grid.R, grid.PHI)
        if check:
            norm = grid.integrate(np.sum(np.abs(E) ** 2, axis=0))
            if abs(norm - 1.0) > NORM_TOL:
                raise UnnormalizedProfile(
                    f"profile {p.label} has norm {norm:.6g}; expected 1 within {NORM_TOL}"
                )
        out.append(E)
    return out


def _single_density(E):
    return (2 * np.sum(np.abs(E) ** 2, axis=0) ** 2 + np.abs(_dot(E, E)) ** 2) / 3


def overlap_four(p1, p2, p3, p4, conjugate=SFWM_CONJUGATION, grid=None, n_radial=24, n_phi=64):
    """∫∫ T(A₁, A₂, A₃, A₄) dx dy with ``conjugate`` flags per field.

    Returns the signed value; mode fields carry an arbitrary overall sign so
    only its modulus is physical.
    """
    profiles = (p1, p2, p3, p4)
    grid = grid or polar_grid_for(profiles, n_radial=n_radial, n_phi=n_phi)
    # identical objects share one evaluation
    cache = {}
    vecs = []
    for p, conj in zip(profiles, conjugate):
        if id(p) not in cache:
            cache[id(p)] = _fields([p], grid)[0]
        E = cache[id(p)]
        vecs.append(np.conj(E) if conj else E)
    u, v, w, x = vecs
    density = (_dot(u, v) * _dot(w, x) + _dot(u, w) * _dot(v, x) + _dot(u, x) * _dot(v, w)) / 3
    return grid.integrate(density)


def _area(overlap, scale, what):
    if abs(overlap) <= ZERO_OVERLAP * scale:
        warnings.warn(f"{what}: overlap vanishes, effective area reported as infinite", RuntimeWarning)
        return float("inf")
    return 1.0 / abs(overlap)


def _self_overlap(profile, grid):
    E = _fields([profile], grid)[0]
    return grid.integrate(_single_density(E))


def effective_area_single(profile, grid=None, n_radial=24, n_phi=64):
    """A_eff^ν = [∫∫|A_ν|⁴]⁻¹ (m²)."""
    grid = grid or polar_grid_for([profile], n_radial=n_radial, n_phi=n_phi)
    return _area(_self_overlap(profile, grid), 0.0, profile.label)


def effective_area_two_mode(p_mu, p_nu, grid=None, n_radial=24, n_phi=64):
    """A_eff^{μν} = [∫∫|A_μ|²|A_ν|²]⁻¹ (m²), symmetric in its arguments."""
    grid = grid or polar_grid_for([p_mu, p_nu], n_radial=n_radial, n_phi=n_phi)
    Em, En = _fields([p_mu, p_nu], grid)
    im = np.sum(np.abs(Em) ** 2, axis=0)
    inn = np.sum(np.abs(En) ** 2, axis=0)
    density = (im * inn + np.abs(_dot(Em, En)) ** 2 + np.abs(_dot(np.conj(Em), En)) ** 2) / 3
    value = grid.integrate(density)
    scale = np.sqrt(grid.integrate(_single_density(Em)) * grid.integrate(_single_density(En)))
    return _area(value, scale, f"{p_mu.label} x {p_nu.label}")


def effective_area_four(p1, p2, p3, p4, conjugate=SFWM_CONJUGATION, grid=None, n_radial=24, n_phi=64):
    """Four-field interaction area [∫∫ A₁A₂A₃*A₄*]⁻¹ (m²).

    ``conjugate`` defaults to the SFWM pattern; pass
    :data:`TOSPDC_CONJUGATION` for the pump/triplet overlap A_pA_r*A_s*A_i*.
    """
    profiles = (p1, p2, p3, p4)
    grid = grid or polar_grid_for(profiles, n_radial=n_radial, n_phi=n_phi)
    value = overlap_four(*profiles, conjugate=conjugate, grid=grid)
    scale = float(np.prod([_self_overlap(p, grid) for p in profiles]) ** 0.25)
    return _area(value, scale, " x ".join(p.label for p in profiles))


def _check_positive(**kw):
    for name, value in kw.items():
        if not np.all(np.asarray(value) > 0):
            raise ValueError(f"{name} must be positive, got {value!r}")


def gamma_self(omega, n, area, chi3=CHI3_DEFAULT):
    """Self-phase coefficient 3χ⁽³⁾ω/(4ε₀c²n²A) in 1/(W m)."""
    _check_positive(omega=omega, n=n, area=area, chi3=chi3)
    return 3 * chi3 * omega / (4 * epsilon_0 * c**2 * n**2 * area)


def gamma_cross(omega_mu, n_mu, n_nu, area, chi3=CHI3_DEFAULT):
    """Cross-phase coefficient 3χ⁽³⁾ω_μ/(4ε₀c²n_μn_νA^{μν}) in 1/(W m)."""
    _check_positive(omega=omega_mu, n_mu=n_mu, n_nu=n_nu, area=area, chi3=chi3)
    return 3 * chi3 * omega_mu / (4 * epsilon_0 * c**2 * n_mu * n_nu * area)


def gamma_fwm(omega1, omega2, n1, n2, area, chi3=CHI3_DEFAULT):
    """Four-field SFWM coefficient 3χ⁽³⁾√(ω₁ω₂)/(4ε₀c²n₁n₂A) in 1/(W m)."""
    _check_positive(omega1=omega1, omega2=omega2, n1=n1, n2=n2, area=area, chi3=chi3)
    return 3 * chi3 * np.sqrt(omega1 * omega2) / (4 * epsilon_0 * c**2 * n1 * n2 * area)


def gamma_pdc(omega_p, n_p, area, chi3=CHI3_DEFAULT):
    """TOSPDC coefficient 3χ⁽³⁾ω_p/(4ε₀c²n_p²A) in 1/(W m)."""
    return gamma_self(omega_p, n_p, area, chi3)


def per_km_watt(gamma):
    """Convert 1/(W m) to 1/(km W)."""
    return 1000.0 * gamma


def phi_nl_sfwm(gamma1, gamma2, P1, P2):
    """Nonlinear phase γ₁P₁ + γ₂P₂ (rad/m) subtracted from the SFWM mismatch."""
    return gamma1 * P1 + gamma2 * P2


def phi_nl_sfwm_full(g1, g2, g21, g12, gs1, gi1, gs2, gi2, P1, P2):
    """Nonlinear phase from the complete set of self and cross terms.

    Each field's propagation constant shifts by its SPM and XPM terms; the
    net shift of k₁ + k₂ − k_s − k_i is

        (γ₁ + 2γ₂₁ − 2γ_s1 − 2γ_i1)P₁ + (γ₂ + 2γ₁₂ − 2γ_s2 − 2γ_i2)P₂.

    The returned value is the negative of that shift, so it enters the
    mismatch with the same sign as :func:`phi_nl_sfwm`, to which it reduces
    when all coefficients of one pump are equal.
    """
    shift = (g1 + 2 * g21 - 2 * gs1 - 2 * gi1) * P1 + (g2 + 2 * g12 - 2 * gs2 - 2 * gi2) * P2
    return -shift


def phi_nl_tospdc(gamma_p, gamma_rp, gamma_sp, gamma_ip, P):
    """[γ_p − 2(γ_rp + γ_sp + γ_ip)]P (rad/m), added to the TOSPDC mismatch."""
    return (gamma_p - 2 * (gamma_rp + gamma_sp + gamma_ip)) * P


# ---------------------------------------------------------------------------
# coefficient bundles for the two processes


@dataclass(frozen=True)
class SfwmCoefficients:
    """All coefficients of degenerate-pump SFWM (pumps 1 = 2), SI units."""

    omega_p: float
    omega_s: float
    omega_i: float
    n_p: float
    n_s: float
    n_i: float
    area_p: float
    area_sp: float
    area_ip: float
    area_fwm: float
    gamma_p: float
    gamma_pp: float
    gamma_sp: float
    gamma_ip: float
    gamma_fwm: float
    chi3: float
    convention: str

    def phi_nl(self, P1, P2=None, full=False):
        P2 = P1 if P2 is None else P2
        if full:
            g = self.gamma_p
            return phi_nl_sfwm_full(g, g, self.gamma_pp, self.gamma_pp, self.gamma_sp, self.gamma_ip,
                                    self.gamma_sp, self.gamma_ip, P1, P2)
        return phi_nl_sfwm(self.gamma_p, self.gamma_p, P1, P2)

    def to_dict(self):
        d = asdict(self)
        for k in ("gamma_p", "gamma_pp", "gamma_sp", "gamma_ip", "gamma_fwm"):
            d[k + "_per_km_W"] = per_km_watt(d[k])
        for k in ("area_p", "area_sp", "area_ip", "area_fwm"):
            d[k + "_um2"] = d[k] * 1e12
        return d


@dataclass(frozen=True)
class TospdcCoefficients:
    """All coefficients of TOSPDC with an HE₁₂ pump and HE₁₁ triplets, SI units."""

    omega_p: float
    omega_r: float
    omega_s: float
    omega_i: float
    n_p: float
    n_r: float
    n_s: float
    n_i: float
    area_p: float
    area_rp: float
    area_sp: float
    area_ip: float
    area_pdc: float
    gamma_p: float
    gamma_rp: float
    gamma_sp: float
    gamma_ip: float
    gamma_pdc: float
    chi3: float
    convention: str

    def phi_nl(self, P):
        return phi_nl_tospdc(self.gamma_p, self.gamma_rp, self.gamma_sp, self.gamma_ip, P)

    def to_dict(self):
        d = asdict(self)
        for k in ("gamma_p", "gamma_rp", "gamma_sp", "gamma_ip", "gamma_pdc"):
            d[k + "_per_km_W"] = per_km_watt(d[k])
        for k in ("area_p", "area_rp", "area_sp", "area_ip", "area_pdc"):
            d[k + "_um2"] = d[k] * 1e12
        return d


def _index(geometry, omega, index):
    if index == "material":
        return float(geometry.core_index(omega))
    if index == "effective":
        return None
    raise ValueError(f"index must be 'material' or 'effective', got {index!r}")


def sfwm_coefficients(geometry, omega_p, omega_s, omega_i, chi3=CHI3_DEFAULT, convention="vector",
                      index="material", n_radial=24, n_phi=64):
    """Areas and γ's for degenerate-pump SFWM with every field in HE₁₁.

    ``index='material'`` uses the bulk core index at each carrier for n_μ;
    ``'effective'`` uses the mode effective index instead.
    """
    pp = mode_profile(geometry, HE11, omega_p, convention)
    ps = mode_profile(geometry, HE11, omega_s, convention)
    pi = mode_profile(geometry, HE11, omega_i, convention)
    grid = polar_grid_for([pp, ps, pi], n_radial=n_radial, n_phi=n_phi)
    n = {}
    for key, w, prof in (("p", omega_p, pp), ("s", omega_s, ps), ("i", omega_i, pi)):
        n[key] = _index(geometry, w, index) or prof.n_eff
    a_p = effective_area_single(pp, grid)
    a_sp = effective_area_two_mode(ps, pp, grid)
    a_ip = effective_area_two_mode(pi, pp, grid)
    a_fwm = effective_area_four(pp, pp, ps, pi, SFWM_CONJUGATION, grid)
    return SfwmCoefficients(
        omega_p=omega_p, omega_s=omega_s, omega_i=omega_i,
        n_p=n["p"], n_s=n["s"], n_i=n["i"],
        area_p=a_p, area_sp=a_sp, area_ip=a_ip, area_fwm=a_fwm,
        gamma_p=gamma_self(omega_p, n["p"], a_p, chi3),
        gamma_pp=gamma_cross(omega_p, n["p"], n["p"], a_p, chi3),
        gamma_sp=gamma_cross(omega_s, n["s"], n["p"], a_sp, chi3),
        gamma_ip=gamma_cross(omega_i, n["i"], n["p"], a_ip, chi3),
        gamma_fwm=gamma_fwm(omega_p, omega_p, n["p"], n["p"], a_fwm, chi3),
        chi3=chi3, convention=convention,
    )


def tospdc_coefficients(geometry, omega_p, omega_r=None, omega_s=None, omega_i=None, chi3=CHI3_DEFAULT,
                        convention="vector", index="material", n_radial=24, n_phi=64):
    """Areas and γ's for TOSPDC: HE₁₂ pump, HE₁₁ triplets (degenerate by default)."""
    third = omega_p / 3
    omega_r = third if omega_r is None else omega_r
    omega_s = third if omega_s is None else omega_s
    omega_i = omega_p - omega_r - omega_s if omega_i is None else omega_i
    pp = mode_profile(geometry, HE12, omega_p, convention)
    pr = mode_profile(geometry, HE11, omega_r, convention)
    ps = mode_profile(geometry, HE11, omega_s, convention)
    pi = mode_profile(geometry, HE11, omega_i, convention)
    grid = polar_grid_for([pp, pr, ps, pi], n_radial=n_radial, n_phi=n_phi)
    n = {}
    for key, w, prof in (("p", omega_p, pp), ("r", omega_r, pr), ("s", omega_s, ps), ("i", omega_i, pi)):
        n[key] = _index(geometry, w, index) or prof.n_eff
    a_p = effective_area_single(pp, grid)
    a_rp = effective_area_two_mode(pr, pp, grid)
    a_sp = effective_area_two_mode(ps, pp, grid)
    a_ip = effective_area_two_mode(pi, pp, grid)
    a_pdc = effective_area_four(pp, pr, ps, pi, TOSPDC_CONJUGATION, grid)
    return TospdcCoefficients(
        omega_p=omega_p, omega_r=omega_r, omega_s=omega_s, omega_i=omega_i,
        n_p=n["p"], n_r=n["r"], n_s=n["s"], n_i=n["i"],
        area_p=a_p, area_rp=a_rp, area_sp=a_sp, area_ip=a_ip, area_pdc=a_pdc,
        gamma_p=gamma_self(omega_p, n["p"], a_p, chi3),
        gamma_rp=gamma_cross(omega_r, n["r"], n["p"], a_rp, chi3),
        gamma_sp=gamma_cross(omega_s, n["s"], n["p"], a_sp, chi3),
        gamma_ip=gamma_cross(omega_i, n["i"], n["p"], a_ip, chi3),
        gamma_pdc=gamma_pdc(omega_p, n["p"], a_pdc, chi3),
        chi3=chi3, convention=convention,
    )
