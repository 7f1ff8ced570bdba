"""Finite computations with internal categories in simplicial sets."""
from .categories import FinCat
from .icat import ICatMap, InternalCat, nerve, validate_icat
from .simplicial import FinSSet, SMap, Simplex, standard_simplex, validate
from .sspace import SSMap, SimpSpace

__all__ = ["FinCat", "FinSSet", "ICatMap", "InternalCat", "SMap", "SSMap", "SimpSpace", "Simplex",
           "nerve", "standard_simplex", "validate", "validate_icat"]
__version__ = "0.1.0"
