"""Exact computations with valuations on finite spaces and barycentric algebras."""

from .errors import BaryvalError, BoundExceeded, PreconditionError, SpaceMismatch, UnsupportedInstance
from .exactnum import GRID, INF, format_rat, format_xrat, parse_xrat, way_below, xr_add, xr_mul
from .finspace import Crescent, FinPoset, OpenSet, crescent_partition, generate_lattice, saturate
from .valuation import (SimpleValuation, TransportMatrix, constrict, edalat_to_prob, edalat_to_sub,
                        evaluate, image_valuation, integrate, masses_from_table,
                        schroder_simpson_split, second_split, stochastic_le)

__version__ = "0.1.0"

__all__ = [
    "BaryvalError", "BoundExceeded", "PreconditionError", "SpaceMismatch", "UnsupportedInstance",
    "GRID", "INF", "format_rat", "format_xrat", "parse_xrat", "way_below", "xr_add", "xr_mul",
    "Crescent", "FinPoset", "OpenSet", "crescent_partition", "generate_lattice", "saturate",
    "SimpleValuation", "TransportMatrix", "constrict", "edalat_to_prob", "edalat_to_sub",
    "evaluate", "image_valuation", "integrate", "masses_from_table", "schroder_simpson_split",
    "second_split", "stochastic_le",
]
