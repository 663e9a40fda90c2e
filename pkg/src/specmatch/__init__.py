"""Fractional matchings, signless Laplacian spectra and the bounds that
connect them, checked exactly over graph corpora."""

from .graph import Graph, complement, from_graph6, join, to_graph6
from .matching import fractional_matching_number, has_fractional_perfect_matching
from .spectral import EigenEnclosure, eigenvalue, q1
from .theorems import Outcome, TheoremReport, run_checker

__all__ = [
    "EigenEnclosure", "Graph", "Outcome", "TheoremReport", "complement", "eigenvalue",
    "fractional_matching_number", "from_graph6", "has_fractional_perfect_matching", "join",
    "q1", "run_checker", "to_graph6",
]
__version__ = "0.1.0"
