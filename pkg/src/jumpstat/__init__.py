"""Transition rates and multi-jump statistics for dipole-dipole interacting atoms."""

__version__ = "0.1.0"
