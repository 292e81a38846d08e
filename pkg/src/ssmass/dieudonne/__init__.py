"""Desk-scale superspecial modules over truncated Witt rings.

Public surface: ring construction, the standard module and its scrambles,
the adapted-basis search with its verifier, and the automorphism-shape
propagation.
"""

from .wittring import TruncWittRing, WittElem, build_witt_ring
from .modules import (
    GoodBasis,
    GradedSemilinearModule,
    XorShift,
    scramble,
    standard_module,
)
from .basis import (
    ShapeReport,
    automorphism_shape,
    format_report,
    good_basis,
    hermitian_gram,
    verify_good_basis,
)

__all__ = [
    "TruncWittRing",
    "WittElem",
    "build_witt_ring",
    "GradedSemilinearModule",
    "GoodBasis",
    "XorShift",
    "standard_module",
    "scramble",
    "good_basis",
    "verify_good_basis",
    "automorphism_shape",
    "ShapeReport",
    "hermitian_gram",
    "format_report",
]
