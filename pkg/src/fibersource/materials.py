"""Bulk refractive index from a three-term Sellmeier fit.

Wavelengths at this boundary are vacuum wavelengths in micrometres; every
other module works in angular frequency (rad/s) and converts through
:meth:`SellmeierModel.index_at_omega`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.constants import c

from .errors import OutOfValidityRange

__all__ = ["SellmeierModel", "fused_silica", "refractive_index", "omega_to_um", "um_to_omega"]


def um_to_omega(wavelength_um):
    return 2 * np.pi * c / (np.asarray(wavelength_um, dtype=float) * 1e-6)


def omega_to_um(omega):
    return 2 * np.pi * c / np.asarray(omega, dtype=float) * 1e6


@dataclass(frozen=True)
class SellmeierModel:
    """n(λ)² = 1 + Σ Bᵢλ²/(λ² − Cᵢ), λ in µm, Cᵢ in µm²."""

    name: str
    B: tuple
    C: tuple
    wavelength_min: float
    wavelength_max: float
    version: str = "unversioned"

    def __post_init__(self):
        if len(self.B) != len(self.C):
            raise ValueError("B and C must have the same number of terms")
        if not 0 < self.wavelength_min < self.wavelength_max:
            raise ValueError("invalid validity window")
        object.__setattr__(self, "B", tuple(float(b) for b in self.B))
        object.__setattr__(self, "C", tuple(float(x) for x in self.C))

    @property
    def window(self):
        return (self.wavelength_min, self.wavelength_max)

    @property
    def omega_min(self):
        return float(um_to_omega(self.wavelength_max))

    @property
    def omega_max(self):
        return float(um_to_omega(self.wavelength_min))

    def check(self, wavelength_um):
        lam = np.asarray(wavelength_um, dtype=float)
        # relative slack so that round trips through omega do not trip the check
        lo = self.wavelength_min * (1 - 1e-12)
        hi = self.wavelength_max * (1 + 1e-12)
        bad = ~((lam >= lo) & (lam <= hi))
        if np.any(bad):
            raise OutOfValidityRange(float(lam[bad].flat[0]), self.window)

    def index(self, wavelength_um):
        self.check(wavelength_um)
        lam2 = np.asarray(wavelength_um, dtype=float) ** 2
        n2 = 1.0
        for b, cc in zip(self.B, self.C):
            n2 = n2 + b * lam2 / (lam2 - cc)
        n = np.sqrt(n2)
        return float(n) if np.ndim(n) == 0 else n

    def index_at_omega(self, omega):
        return self.index(omega_to_um(omega))

    def group_index(self, wavelength_um, h=1e-4):
        """n − λ dn/dλ by central differences."""
        lam = np.asarray(wavelength_um, dtype=float)
        dn = (self.index(lam + h) - self.index(lam - h)) / (2 * h)
        return self.index(lam) - lam * dn

    def to_dict(self):
        return {
            "name": self.name,
            "version": self.version,
            "B": list(self.B),
            "C": list(self.C),
            "wavelength_min_um": self.wavelength_min,
            "wavelength_max_um": self.wavelength_max,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            name=data["name"],
            B=tuple(data["B"]),
            C=tuple(data["C"]),
            wavelength_min=float(data["wavelength_min_um"]),
            wavelength_max=float(data["wavelength_max_um"]),
            version=str(data.get("version", "unversioned")),
        )

    @classmethod
    def from_file(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@lru_cache(maxsize=None)
def fused_silica():
    text = resources.files("fibersource.data").joinpath("fused_silica.json").read_text(encoding="utf-8")
    return SellmeierModel.from_dict(json.loads(text))


def refractive_index(wavelength_um, model=None):
    return (model or fused_silica()).index(wavelength_um)
