"""Distinct palindromic substrings of edge-labelled trees."""
from __future__ import annotations

from .convolution import IntSet, set_difference
from .dtree import DTree, DTreeFamily, InvariantError, build_psi, centroid, decompose_family
from .generators import gen_comb, gen_path, gen_random
from .oracle import OracleLimitError, PalSet, oracle_all, oracle_longest, oracle_test, oracle_through
from .pipeline import PalindromeIndex, ReportSet, find_longest, palindrome_test, report_all
from .tree import (ExpandedTree, LabeledTree, PalTriple, TreeFormatError, expand_even,
                   parse_tree, read_tree)

__version__ = "0.1.0"

__all__ = [
    "DTree", "DTreeFamily", "ExpandedTree", "IntSet", "InvariantError", "LabeledTree",
    "OracleLimitError", "PalSet", "PalTriple", "PalindromeIndex", "ReportSet",
    "TreeFormatError", "build_psi", "centroid", "decompose_family", "expand_even",
    "find_longest", "gen_comb", "gen_path", "gen_random", "oracle_all", "oracle_longest",
    "oracle_test", "oracle_through", "palindrome_test", "parse_tree", "read_tree",
    "report_all", "set_difference",
]
