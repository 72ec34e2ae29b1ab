"""Exact character computations for characteristic-p category O.

Characters are lazy expressions over the completed group ring of the weight
lattice and are evaluated exactly on finite windows.
"""

from .charexpr import (Add, Basis, CharExpr, DBChar, Evaluator, FamilySum, Finite, FiniteCharacter, Frob,
                       InfProduct, Scale, Star, Verma, Window, equal_on, evaluate, family_sum, leq_on)
from .database import CharDatabase, load_fixture, sl2_database
from .errors import CertificateError, CharopError, DomainError, MissingEntryError, ResourceError
from .partition import kostant_partition
from .rootdata import RootSystem, WeylElement, build_root_system, dominance_leq, dot_action, enumerate_weyl

__version__ = "0.1.0"

__all__ = [
    "Add", "Basis", "CharExpr", "DBChar", "Evaluator", "FamilySum", "Finite", "FiniteCharacter", "Frob",
    "InfProduct", "Scale", "Star", "Verma", "Window", "equal_on", "evaluate", "family_sum", "leq_on",
    "CharDatabase", "load_fixture", "sl2_database", "CertificateError", "CharopError", "DomainError",
    "MissingEntryError", "ResourceError", "kostant_partition", "RootSystem", "WeylElement",
    "build_root_system", "dominance_leq", "dot_action", "enumerate_weyl",
]
