"""Finite combinatorics of higher operads.

Submodules: ``ordmaps`` (finite ordinals and maps), ``trees`` (pruned and
unpruned n-trees), ``omegan`` (the tree category), ``symops`` (finite
symmetric operads), ``nops`` (finite n-operads), ``hcat`` (the categories
h^n_k and H^oo_k), ``itmon`` (iterated monoid expressions) and ``cli``.
"""
from . import hcat, itmon, nops, omegan, ordmaps, symops, trees
from .ordmaps import OrdMap, Perm, compose, factorize, gamma
from .trees import M, NTree, U, enumerate_trees, format_tree, parse_tree
from .omegan import TreeMorphism

__version__ = "0.1.0"

__all__ = ["hcat", "itmon", "nops", "omegan", "ordmaps", "symops", "trees",
           "OrdMap", "Perm", "compose", "factorize", "gamma",
           "M", "NTree", "U", "enumerate_trees", "format_tree", "parse_tree",
           "TreeMorphism"]
