"""Candidate spine kernel: glued-tetrahedron complexes, loops, strips."""

from .complex import SpineComplex
from .homology import first_homology
from .loops import Loop, find_loops
from .moves import InapplicableMove, disc_replacement, mp_move
from .skeleton import Skeleton, StripError, is_minimality_candidate
from .skeleton import strip_length1

__all__ = [
    "InapplicableMove",
    "Loop",
    "Skeleton",
    "SpineComplex",
    "StripError",
    "disc_replacement",
    "find_loops",
    "first_homology",
    "is_minimality_candidate",
    "mp_move",
    "strip_length1",
]
