# core/__init__.py
"""Geometry of single-photon quanton states: parameters, which-way duality and Bures distances."""

__version__ = "0.1.0"
