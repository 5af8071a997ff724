"""Shift radix systems: the map tau_r, SRS tiles, tiling certificates, CNS and beta-expansion bridges."""

__version__ = "0.1.0"
