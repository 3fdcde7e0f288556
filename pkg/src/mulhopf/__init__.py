"""Exact verification engine for multiplier Hopf algebras over the rationals."""
from .algebra import FiniteAlgebra
from .coproduct import Coproduct, canonical_map, classify
from .derive import derive_antipode, derive_counit_left, derive_counit_right
from .report import run_check

__all__ = [
    "FiniteAlgebra",
    "Coproduct",
    "canonical_map",
    "classify",
    "derive_counit_left",
    "derive_counit_right",
    "derive_antipode",
    "run_check",
]
__version__ = "0.1.0"
