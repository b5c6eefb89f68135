"""Cauchy-invariant maps, Brownian exit laws and Boole/Newton orbits."""
__version__ = "0.1.0"
