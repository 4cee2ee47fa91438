"""Normalization of SMT-LIB scripts under shuffling and renaming."""

from .normalizer import AntisymTable, NormalizeOptions, normalize
from .oracle import Graph, OracleLimits, exact_normalize, graph_to_formulas, iso_equivalent
from .scrambler import Op, ScrambleOptions, scramble
from .smtlib import Script, SmtError, parse_script, print_script

__version__ = "0.1.0"

__all__ = [
    "AntisymTable",
    "Graph",
    "NormalizeOptions",
    "Op",
    "OracleLimits",
    "ScrambleOptions",
    "Script",
    "SmtError",
    "exact_normalize",
    "graph_to_formulas",
    "iso_equivalent",
    "normalize",
    "parse_script",
    "print_script",
    "scramble",
]
