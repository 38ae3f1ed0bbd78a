"""Exact-category backends."""

from .base import (AdmissibleFactorization, Backend, BackendMismatch, Classification, Equation,
                   ExactCatError, Morphism, NotAdmissible, NotEpi, Obj)
from .modules import DualMod, FinVect
from .split import SplitExact
from .vectp1 import VectP1
from .vectnodal import VectNodal

__all__ = [
    "AdmissibleFactorization", "Backend", "BackendMismatch", "Classification", "DualMod",
    "Equation", "ExactCatError", "FinVect", "Morphism", "NotAdmissible", "NotEpi", "Obj",
    "SplitExact", "VectNodal", "VectP1",
]
