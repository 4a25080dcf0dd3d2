"""Bernstein operational-matrix solver for the 2D space-time fractional heat
equation, with the Lie-symmetry and Erdelyi-Kober tools of its reduction."""

from .bernstein import BernsteinBasis
from .erdelyi_kober import EKParams, ek_K, ek_P, similarity_vars
from .fractional import FracOrder, PolySum3
from .lie import LieElement, adjoint, classify, commutator
from .solver import ProblemSpec, SpectralSolution, evaluate, solve

__version__ = "0.1.0"

__all__ = [
    "BernsteinBasis",
    "EKParams",
    "FracOrder",
    "LieElement",
    "PolySum3",
    "ProblemSpec",
    "SpectralSolution",
    "adjoint",
    "classify",
    "commutator",
    "ek_K",
    "ek_P",
    "evaluate",
    "similarity_vars",
    "solve",
]
