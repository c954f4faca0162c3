"""Generators and verifiers for the hardness gadgets."""

from .detect import (DETECT_EDGE_CAP, SubgraphWitness, classify_subgraph, delta_parameter, detect_2fc,
                     detect_cubic)
from .nucleolus_gadget import (GadgetGraph, StructuralError, TableCheck, TableRow,
                               build_nucleolus_gadget, compare_table, excess_table,
                               make_xdelta, make_xstar, original_excess, reference_rows)
from .structure import StructureReport, structural_check
from .x3c import (X3CFormatError, X3CInstance, build_x3c_graph, cover_to_cubic, dump_x3c,
                  expected_size, load_x3c, parse_x3c, x3c_bruteforce)

__all__ = [
    "DETECT_EDGE_CAP", "SubgraphWitness", "classify_subgraph", "delta_parameter", "detect_2fc", "detect_cubic",
    "GadgetGraph", "StructuralError", "TableCheck", "TableRow", "build_nucleolus_gadget",
    "compare_table", "excess_table", "make_xdelta", "make_xstar", "original_excess",
    "reference_rows", "StructureReport", "structural_check", "X3CFormatError",
    "X3CInstance", "build_x3c_graph", "cover_to_cubic", "dump_x3c", "expected_size",
    "load_x3c", "parse_x3c", "x3c_bruteforce",
]
