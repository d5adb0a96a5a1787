"""Simulation of fiber photon-pair (SFWM) and photon-triplet (TOSPDC) sources."""

__version__ = "0.1.0"
