"""Exact polynomial calculus for deformation quantization near a coisotropic subspace."""
from .hochschild import Cochain
from .multivector import MultiVector
from .polycore import CoisoContext, Poly

__all__ = ["Cochain", "CoisoContext", "MultiVector", "Poly"]
