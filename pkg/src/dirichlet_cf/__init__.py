"""Cycle-index moments of Dirichlet distributions, Humbert series, ladder
operators on parameter lattices, Polya counting and Dirichlet-Ferguson
simulation."""
from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
