"""Khovanov homology with integer coefficients, torsion tables and the
thinness classification of knots and links."""

from .diagram import (LinkDiagram, LinkMetadata, PDError, bundled_census, parse_pd,
                      read_census)
from .complex import GeneratorCapExceeded, KhovanovComplex
from .linalg import AbelianGroup, SparseIntMatrix, smith_normal_form
from .homology import HomologyTable, compute_homology
from .invariants import (ThinnessReport, classify, determinant, graded_euler,
                         jones_reduced, knight_move_decompose)
from .poly import BigradedPoly, LaurentPoly, TorsionPoly

__version__ = "0.1.0"

__all__ = [
    "LinkDiagram", "LinkMetadata", "PDError", "parse_pd", "read_census", "bundled_census",
    "KhovanovComplex", "GeneratorCapExceeded",
    "AbelianGroup", "SparseIntMatrix", "smith_normal_form",
    "HomologyTable", "compute_homology",
    "ThinnessReport", "classify", "determinant", "graded_euler", "jones_reduced",
    "knight_move_decompose",
    "LaurentPoly", "BigradedPoly", "TorsionPoly",
]
