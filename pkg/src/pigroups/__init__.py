"""Computational toolkit for pi-groups, graphs of groups and test sequences."""
from .errors import InputError, PreconditionError, Unsupported
from .words import (
    Alphabet, Word, IDENTITY, INFINITE, SubgroupBasis, parse_word, reduce,
    cyclically_reduce, max_common_piece, check_small_cancellation, axis_overlap,
    conjugacy, subgroup_membership,
)

__version__ = "0.1.0"
