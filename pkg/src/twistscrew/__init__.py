"""Radial eigenproblem and observables for a charged particle in a twisted screw
background with a uniform axial field and an Aharonov-Bohm flux line.

Working units: lengths in nm, eigenvalues in nm^-2, energies in meV, fields in T.
"""

from .units import Material, ELECTRON_GAAS
from .model import Geometry, Fields, Mode
from .solver import Grid, RadialProblem, Spectrum, solve_lowest, benchmark_problem

__all__ = [
    "Material",
    "ELECTRON_GAAS",
    "Geometry",
    "Fields",
    "Mode",
    "Grid",
    "RadialProblem",
    "Spectrum",
    "solve_lowest",
    "benchmark_problem",
]

__version__ = "0.1.0"
