"""Stabilizer, coding and rotated-Hamiltonian toolkit with brute-force verification."""

__version__ = "0.1.0"
