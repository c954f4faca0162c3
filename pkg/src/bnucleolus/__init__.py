"""Exact cooperative b-matching games: values, core, least core and nucleolus."""

from .bmatching import RefusalError, max_matching, nonsimple2_value_fast, value
from .game import Allocation, Coalition, Game, core_check, excess, excess_vector, lex_compare
from .graph import GameGraph, load_graph, parse_graph
from .nucleolus import (CoalitionFamily, PreconditionError, SchemeError, dual_core_allocation,
                        is_nucleolus, kopelowitz, nucleolus_bruteforce, nucleolus_charset_i,
                        nucleolus_charset_ii)

__version__ = "0.1.0"

__all__ = [
    "RefusalError", "max_matching", "nonsimple2_value_fast", "value", "Allocation",
    "Coalition", "Game", "core_check", "excess", "excess_vector", "lex_compare", "GameGraph",
    "load_graph", "parse_graph", "CoalitionFamily", "PreconditionError", "SchemeError",
    "dual_core_allocation", "is_nucleolus", "kopelowitz", "nucleolus_bruteforce",
    "nucleolus_charset_i", "nucleolus_charset_ii",
]
