"""Pump envelopes, joint spectral amplitudes and JSI grids.

Amplitudes keep the propagation phase factor exp(iLΔk/2) next to the sinc,
so exported complex data carry the phase of a crystal centred at z = L/2
measured from the fiber input; intensities are unaffected by that choice.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c

from .errors import QuadratureError
from .materials import omega_to_um, um_to_omega
from .quadrature import gauss_hermite

FWHM_FACTOR = 2 * np.sqrt(2 * np.log(2))
SQRT3 = np.sqrt(3.0)
_S = 1 / SQRT3

# rows: ν₊, ν_A, ν_B as combinations of (ω_r, ω_s, ω_i) detunings from ω₀
TOSPDC_MATRIX = np.array([
    [_S, _S, _S],
    [(1 - _S) / 2, (-1 - _S) / 2, _S],
    [(1 + _S) / 2, (-1 + _S) / 2, -_S],
])
SFWM_MATRIX = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)


@dataclass(frozen=True)
class PumpConfig:
    """Gaussian pump: carrier ω° (rad/s), bandwidth σ (rad/s, amplitude
    envelope exp[−(ω−ω°)²/σ²]), average power p (W), repetition rate R (Hz).
    σ = 0 selects the monochromatic regime."""

    omega: float
    sigma: float
    power: float
    rep_rate: float = 1e8

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("pump carrier must be positive")
        if self.sigma < 0:
            raise ValueError("pump bandwidth must be nonnegative")
        if not self.power > 0 or not self.rep_rate > 0:
            raise ValueError("pump power and repetition rate must be positive")

    @classmethod
    def from_wavelength(cls, wavelength_um, sigma, power, rep_rate=1e8):
        return cls(float(um_to_omega(wavelength_um)), sigma, power, rep_rate)

    @property
    def wavelength_um(self):
        return float(omega_to_um(self.omega))

    @property
    def cw(self):
        return self.sigma == 0

    @property
    def duration_fwhm(self):
        """Intensity FWHM (s) of the transform-limited pulse."""
        return duration_from_sigma(self.sigma)

    @property
    def peak_power(self):
        """p/(R·T_eff) with T_eff = ∫I dt / I_peak = √(2π)/σ; p itself for cw."""
        if self.cw:
            return self.power
        return self.power * self.sigma / (self.rep_rate * np.sqrt(2 * np.pi))

    def with_(self, **kw):
        d = dict(omega=self.omega, sigma=self.sigma, power=self.power, rep_rate=self.rep_rate)
        d.update(kw)
        return PumpConfig(**d)


def duration_from_sigma(sigma):
    """Intensity FWHM of the pulse whose spectral amplitude is exp[−Δω²/σ²]."""
    return FWHM_FACTOR / sigma


def sigma_from_duration(duration):
    return FWHM_FACTOR / duration


def pump_envelope(omega, pump):
    """α(ω) = 2^{1/4}/(π^{1/4}√σ) exp[−(ω−ω°)²/σ²], unit ∫|α|²dω."""
    if pump.sigma <= 0:
        raise ValueError("pump_envelope needs sigma > 0; use the monochromatic formulas for cw pumps")
    s = pump.sigma
    return 2**0.25 / (np.pi**0.25 * np.sqrt(s)) * np.exp(-((np.asarray(omega) - pump.omega) ** 2) / s**2)


def sinc(x):
    """sin(x)/x."""
    return np.sinc(np.asarray(x) / np.pi)


def pm_function(dk, L):
    """sinc(LΔk/2)·exp(iLΔk/2)."""
    x = 0.5 * L * np.asarray(dk)
    return sinc(x) * np.exp(1j * x)


# ---------------------------------------------------------------------------
# SFWM


def _sfwm_sum(omega_s, omega_i, process, pump, L, power, n):
    """(1/√π)Σⱼwⱼφ(Σ/2 + σuⱼ/√2) at each point; the pump Gaussian is left out."""
    u, w = gauss_hermite(n)
    ws = np.asarray(omega_s, dtype=float)[..., None]
    wi = np.asarray(omega_i, dtype=float)[..., None]
    omega = 0.5 * (ws + wi) + pump.sigma * u / np.sqrt(2)
    dk = process.delta_k(omega, ws, wi, power, power)
    return np.sum(w * pm_function(dk, L), axis=-1) / np.sqrt(np.pi)


def _sfwm_adaptive(omega_s, omega_i, process, pump, L, power, n_nodes, tol):
    if n_nodes is not None:
        return _sfwm_sum(omega_s, omega_i, process, pump, L, power, n_nodes)
    n = 16
    prev = _sfwm_sum(omega_s, omega_i, process, pump, L, power, n)
    while n < 512:
        n *= 2
        cur = _sfwm_sum(omega_s, omega_i, process, pump, L, power, n)
        scale = max(float(np.max(np.abs(cur))), 1e-300)
        if np.max(np.abs(cur - prev)) <= tol * scale:
            return cur
        prev = cur
    raise QuadratureError("SFWM pump convolution did not converge with 512 Gauss-Hermite nodes")


def jsa_sfwm(omega_s, omega_i, process, pump, L, power=None, n_nodes=None, tol=1e-4):
    """F(ω_s, ω_i) = ∫dω α(ω)α(ω_s+ω_i−ω) sinc(LΔk/2) e^{iLΔk/2} for
    degenerate pumps.

    The product of the two Gaussians is a Gaussian in ω centred on
    (ω_s+ω_i)/2, so the convolution is done with Gauss-Hermite nodes, doubled
    until the amplitude changes by less than ``tol`` of its largest value.
    ``power`` is the peak power of each pump in Φ_NL (default: the pump's).
    """
    if pump.sigma <= 0:
        raise ValueError("jsa_sfwm needs a pulsed pump")
    P = pump.peak_power if power is None else power
    total = np.asarray(omega_s) + np.asarray(omega_i)
    gauss = np.exp(-((total - 2 * pump.omega) ** 2) / (2 * pump.sigma**2))
    return gauss * _sfwm_adaptive(omega_s, omega_i, process, pump, L, P, n_nodes, tol)


def bare_jsa_sfwm(omega_s, omega_i, process, pump, L, power=None, n_nodes=None, tol=1e-4):
    """f = (πσ₁σ₂/2)^{1/2} F, the amplitude without its normalisation prefactors."""
    return np.sqrt(np.pi / 2) * pump.sigma * jsa_sfwm(omega_s, omega_i, process, pump, L, power, n_nodes, tol)


# ---------------------------------------------------------------------------
# TOSPDC


def jsa_tospdc(omega_r, omega_s, omega_i, process, pump, L, power=None):
    """G = α(ω_r+ω_s+ω_i)·sinc(LΔk/2)·e^{iLΔk/2}."""
    P = pump.peak_power if power is None else power
    total = np.asarray(omega_r) + np.asarray(omega_s) + np.asarray(omega_i)
    dk = process.delta_k(omega_r, omega_s, omega_i, P)
    return pump_envelope(total, pump) * pm_function(dk, L)


def bare_jsa_tospdc(omega_r, omega_s, omega_i, process, pump, L, power=None):
    """g = (πσ²/2)^{1/4} G."""
    return (np.pi * pump.sigma**2 / 2) ** 0.25 * jsa_tospdc(omega_r, omega_s, omega_i, process, pump, L, power)


# ---------------------------------------------------------------------------
# rotated coordinates


def sfwm_rotate(nu_s, nu_i):
    """(ν_s, ν_i) → (ν₊, ν₋) = ((ν_s+ν_i)/√2, (ν_s−ν_i)/√2)."""
    nu_s, nu_i = np.asarray(nu_s), np.asarray(nu_i)
    return (nu_s + nu_i) / np.sqrt(2), (nu_s - nu_i) / np.sqrt(2)


def sfwm_unrotate(nu_plus, nu_minus):
    nu_plus, nu_minus = np.asarray(nu_plus), np.asarray(nu_minus)
    return (nu_plus + nu_minus) / np.sqrt(2), (nu_plus - nu_minus) / np.sqrt(2)


def tospdc_forward(omega_r, omega_s, omega_i, omega0):
    """(ω_r, ω_s, ω_i) → (ν₊, ν_A, ν_B) about ω₀ = ω_p/3."""
    d = np.stack(np.broadcast_arrays(np.asarray(omega_r, float) - omega0,
                                     np.asarray(omega_s, float) - omega0,
                                     np.asarray(omega_i, float) - omega0))
    out = np.tensordot(TOSPDC_MATRIX, d, axes=1)
    return out[0], out[1], out[2]


def tospdc_inverse(nu_plus, nu_a, nu_b, omega0):
    """(ν₊, ν_A, ν_B) → (ω_r, ω_s, ω_i); the matrix is orthogonal."""
    v = np.stack(np.broadcast_arrays(np.asarray(nu_plus, float), np.asarray(nu_a, float),
                                     np.asarray(nu_b, float)))
    out = np.tensordot(TOSPDC_MATRIX.T, v, axes=1) + omega0
    return out[0], out[1], out[2]


# ---------------------------------------------------------------------------
# grids


@dataclass
class JointSpectrumGrid:
    """Sampled JSI with axis metadata.

    ``axes`` maps axis names to 1-D sample arrays (rad/s); ``intensity`` has
    one dimension per axis in the same order.  ``transform`` records the
    linear map from detunings to the plotted variables and ``origin`` the
    frequencies the detunings are measured from.
    """

    kind: str
    axes: dict
    intensity: np.ndarray
    transform: list
    origin: dict
    length: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.intensity = np.asarray(self.intensity, dtype=float)
        if np.any(self.intensity < 0) or not np.all(np.isfinite(self.intensity)):
            raise ValueError("intensities must be finite and nonnegative")

    @property
    def peak(self):
        return float(self.intensity.max())

    def normalized(self):
        peak = self.peak
        scale = 1.0 / peak if peak > 0 else 1.0
        meta = dict(self.metadata, normalized=True)
        return JointSpectrumGrid(self.kind, dict(self.axes), self.intensity * scale, self.transform,
                                 dict(self.origin), self.length, meta)

    def argmax(self):
        idx = np.unravel_index(int(np.argmax(self.intensity)), self.intensity.shape)
        return {name: float(vals[i]) for (name, vals), i in zip(self.axes.items(), idx)}

    def to_csv(self, path=None):
        names = list(self.axes)
        mesh = np.meshgrid(*[self.axes[n] for n in names], indexing="ij")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"{n}_rad_s" for n in names] + ["intensity"])
        cols = [m.ravel() for m in mesh] + [self.intensity.ravel()]
        for row in zip(*cols):
            w.writerow([f"{v:.8e}" for v in row])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text

    def header(self):
        return {
            "kind": self.kind,
            "axes": {n: {"min": float(v[0]), "max": float(v[-1]), "n": int(len(v)), "unit": "rad/s"}
                     for n, v in self.axes.items()},
            "transform": self.transform,
            "origin": self.origin,
            "length_m": self.length,
            "metadata": self.metadata,
        }

    def to_json(self, path=None, include_data=True):
        doc = self.header()
        if include_data:
            doc["axis_values"] = {n: [float(f"{x:.8e}") for x in v] for n, v in self.axes.items()}
            doc["intensity"] = np.vectorize(lambda x: float(f"{x:.8e}"))(self.intensity).tolist()
        text = json.dumps(doc, indent=1, sort_keys=True)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text


def first_sinc_zero(dk_along, L, step_guess, max_steps=200000):
    """Smallest t > 0 with |LΔk(t) − LΔk(0)|/2 = π along a direction.

    ``dk_along(t)`` evaluates Δk a distance t from the anchor.  Steps grow
    geometrically from ``step_guess`` until the phase has advanced by π,
    then the crossing is bracketed and bisected.
    """
    from scipy.optimize import brentq

    base = float(dk_along(0.0))
    f = lambda t: 0.5 * L * abs(float(dk_along(t)) - base) - np.pi
    lo, t = 0.0, float(step_guess)
    for _ in range(max_steps):
        if f(t) >= 0:
            return brentq(f, lo, t, xtol=1e-9 * t)
        lo, t = t, t * 1.5
    raise QuadratureError("no sinc zero found along the requested direction")


def sfwm_auto_window(process, pump, L, anchor, power):
    """Half-ranges (ν₊, ν₋): four pump bandwidths, four first sinc zeros."""
    ws0, wi0 = anchor
    wp = pump.omega

    def along_minus(t):
        ns, ni = sfwm_unrotate(0.0, t)
        return process.delta_k(wp, ws0 + ns, wi0 + ni, power, power)

    zero = first_sinc_zero(along_minus, L, 1e-6 * wp)
    return 4 * pump.sigma, 4 * zero


def jsi_grid_sfwm(process, pump, L, anchor=None, nu_plus_range=None, nu_minus_range=None, n=256, power=None,
                  branch="outer"):
    """|F|² on a square grid in (ν₊, ν₋) about the phasematched (ω_s⁰, ω_i⁰)."""
    from .phasematching import sfwm_anchor

    P = pump.peak_power if power is None else power
    if anchor is None:
        anchor = sfwm_anchor(process, pump.omega, P, branch)
    ws0, wi0 = anchor
    if nu_plus_range is None or nu_minus_range is None:
        hp, hm = sfwm_auto_window(process, pump, L, anchor, P)
        nu_plus_range = nu_plus_range or (-hp, hp)
        nu_minus_range = nu_minus_range or (-hm, hm)
    npl = np.linspace(*nu_plus_range, n)
    nmi = np.linspace(*nu_minus_range, n)
    NP, NM = np.meshgrid(npl, nmi, indexing="ij")
    ns, ni = sfwm_unrotate(NP, NM)
    F = jsa_sfwm(ws0 + ns, wi0 + ni, process, pump, L, power=P)
    return JointSpectrumGrid(
        kind="sfwm",
        axes={"nu_plus": npl, "nu_minus": nmi},
        intensity=np.abs(F) ** 2,
        transform=SFWM_MATRIX.tolist(),
        origin={"omega_s0": ws0, "omega_i0": wi0, "omega_p": pump.omega},
        length=L,
        metadata={"sigma_rad_s": pump.sigma, "peak_power_W": P},
    )


def tospdc_auto_window(process, pump, L, power):
    """Half-ranges (ν₊, ν_A = ν_B): four pump bandwidths, four first sinc zeros."""
    omega0 = pump.omega / 3

    def along_a(t):
        wr, ws, wi = tospdc_inverse(0.0, t, 0.0, omega0)
        return process.delta_k(wr, ws, wi, power)

    zero = first_sinc_zero(along_a, L, 1e-6 * omega0)
    return 4 * pump.sigma, 4 * zero


def jsi_slices_tospdc(process, pump, L, nu_plus_range=None, nu_ab_range=None, n_grid=256, n_slice=1024,
                      power=None):
    """(a) |G|² over (ν_A, ν_B) at ν₊ = 0; (b) |G|² over ν₊ at ν_A = ν_B = 0."""
    P = pump.peak_power if power is None else power
    omega0 = pump.omega / 3
    if nu_plus_range is None or nu_ab_range is None:
        hp, ha = tospdc_auto_window(process, pump, L, P)
        nu_plus_range = nu_plus_range or (-hp, hp)
        nu_ab_range = nu_ab_range or (-ha, ha)
    na = np.linspace(*nu_ab_range, n_grid)
    A, B = np.meshgrid(na, na, indexing="ij")
    wr, ws, wi = tospdc_inverse(0.0, A, B, omega0)
    Ga = jsa_tospdc(wr, ws, wi, process, pump, L, power=P)
    npl = np.linspace(*nu_plus_range, n_slice)
    wr, ws, wi = tospdc_inverse(npl, 0.0, 0.0, omega0)
    Gb = jsa_tospdc(wr, ws, wi, process, pump, L, power=P)
    common = dict(transform=TOSPDC_MATRIX.tolist(), origin={"omega0": omega0, "omega_p": pump.omega}, length=L)
    meta = {"sigma_rad_s": pump.sigma, "peak_power_W": P}
    slice_a = JointSpectrumGrid("tospdc", {"nu_A": na, "nu_B": na.copy()}, np.abs(Ga) ** 2,
                                metadata=dict(meta, slice="nu_plus=0"), **common)
    slice_b = JointSpectrumGrid("tospdc", {"nu_plus": npl}, np.abs(Gb) ** 2,
                                metadata=dict(meta, slice="nu_A=nu_B=0"), **common)
    return slice_a, slice_b


def fwhm(x, y):
    """Full width at half maximum of a sampled single-peaked profile, with
    linear interpolation of the two half-maximum crossings."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    k = int(np.argmax(y))
    half = 0.5 * y[k]
    i = k
    while i > 0 and y[i - 1] > half:
        i -= 1
    j = k
    while j < len(y) - 1 and y[j + 1] > half:
        j += 1
    if i == 0 or j == len(y) - 1:
        raise ValueError("profile does not fall to half maximum inside the sampled range")
    left = x[i - 1] + (half - y[i - 1]) * (x[i] - x[i - 1]) / (y[i] - y[i - 1])
    right = x[j] + (half - y[j]) * (x[j + 1] - x[j]) / (y[j + 1] - y[j])
    return right - left


def grid_widths(grid):
    """FWHM along each axis through the grid maximum."""
    idx = np.unravel_index(int(np.argmax(grid.intensity)), grid.intensity.shape)
    out = {}
    for d, (name, vals) in enumerate(grid.axes.items()):
        sl = list(idx)
        sl[d] = slice(None)
        out[name] = fwhm(vals, grid.intensity[tuple(sl)])
    return out
