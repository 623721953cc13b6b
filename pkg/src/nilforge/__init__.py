"""Hierarchical square complexes, their colorings, and a nil semigroup presented by their paths."""

from .coloring import Coloring, alphabet
from .complex import CapacityError, Complex, build, distances, dump, level_max
from .dol import dol_iterate, edge_levels, find_square_fast, has_adjacent_repeat
from .paths import Path, encode, embeddings, enumerate_words
from .presentation import DeterminismError, Presentation, build_presentation, determinism_check
from .rewrite import Irreducible, Unknown, Zero, closure, reduces_to_zero, replay

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "Coloring", "Complex", "DeterminismError", "Irreducible", "Path", "Presentation",
    "Unknown", "Zero", "alphabet", "build", "build_presentation", "closure", "determinism_check",
    "distances", "dol_iterate", "dump", "edge_levels", "embeddings", "encode", "enumerate_words",
    "find_square_fast", "has_adjacent_repeat", "level_max", "reduces_to_zero", "replay",
]
