"""Exact Nakajima operator calculus on a finite model of the Chow ring of Hilb^n of a K3 surface."""

from ._kernels import BACKEND
from .bv_ring import MultiPointClass
from .fock import FockVector, apply_word, fock_basis, state, unit_class, vacuum
from .lie_wedge import WedgeElement, parse_wedge, rho, wedge_bracket
from .operators import ConcreteOperator, HilbDivisor, OperatorExpr, instantiate
from .parser import parse_class, parse_expr, to_text
from .surface import Mode, SurfaceModel

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConcreteOperator", "FockVector", "HilbDivisor", "Mode", "MultiPointClass", "OperatorExpr",
    "SurfaceModel", "WedgeElement", "apply_word", "fock_basis", "instantiate", "parse_class", "parse_expr",
    "parse_wedge", "rho", "state", "to_text", "unit_class", "vacuum", "wedge_bracket",
]
