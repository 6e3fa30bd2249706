"""Coupled parent Hamiltonians for thermofield-double state preparation."""

__version__ = "0.1.0"
