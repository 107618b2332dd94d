"""Adiabatic quantum computation with hard-core (unfixed-number) particles."""
from .algebra import SparseOperator, StateVector
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["SparseOperator", "StateVector", "BACKEND", "__version__"]
