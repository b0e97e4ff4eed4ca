"""Exact integer tools for Bredon homology, equivariant spectral sequence pages
and cokernel recipes for K0 of Hecke algebras, on finite user-supplied models.
"""
from .errors import HeckeKError
from .exactla import AbHom, FgAbGroup, IntMatrix, cokernel, is_isomorphic, smith_normal_form
from .fincat import CoeffSystem, FinCategory, colimit
from .bredon import CellOrbitComplex, bredon_homology, simplicial_complex
from .recipe import RecipeInstance, CentralExtInstance, k0_central, k0_general

__all__ = [
    "HeckeKError",
    "AbHom",
    "FgAbGroup",
    "IntMatrix",
    "cokernel",
    "is_isomorphic",
    "smith_normal_form",
    "CoeffSystem",
    "FinCategory",
    "colimit",
    "CellOrbitComplex",
    "bredon_homology",
    "simplicial_complex",
    "RecipeInstance",
    "CentralExtInstance",
    "k0_central",
    "k0_general",
]

__version__ = "0.1.0"
