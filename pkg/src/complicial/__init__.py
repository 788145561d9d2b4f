"""Finite truncated stratified simplicial sets and complicial combinatorics.

Submodules: :mod:`delta_ops` (simplicial operators), :mod:`strata` (sets,
maps, subsets), :mod:`zoo` (named constructions), :mod:`tensors` (joins and
Gray-style products), :mod:`lifting` (map search and lifting verdicts),
:mod:`certifier` (cell-complex certificates) and :mod:`cli`.
"""

from . import certifier, delta_ops, lifting, serialize, strata, tensors, zoo

__all__ = ["certifier", "delta_ops", "lifting", "serialize", "strata", "tensors", "zoo"]
__version__ = "0.1.0"
