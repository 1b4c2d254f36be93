"""Atiyah classes of SH Lie pairs with exact rational arithmetic."""
from .atiyah import atiyah_cocycle, atiyah_operator_oracle, class_vanishes
from .definitions import dumps, load, parse
from .shlie import AModule, LInftyAlgebra, SHLiePair

__version__ = "0.1.0"

__all__ = [
    "AModule", "LInftyAlgebra", "SHLiePair", "atiyah_cocycle", "atiyah_operator_oracle",
    "class_vanishes", "dumps", "load", "parse",
]
