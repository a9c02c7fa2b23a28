"""Numerical simulator for entanglement accumulation, retrieval, and
concentration in two remote cavities, with teleportation built on top."""

__version__ = "0.1.0"
