"""Prym groups, Prym volumes, Ihara zeta functions and the Abel-Prym map of free double covers of graphs."""

__version__ = "0.1.0"
