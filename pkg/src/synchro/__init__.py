"""Synchronization of automata and permutation groups: reset words,
invariant graphs, and the hierarchy of synchronizing-type group properties."""

from .perm import Permutation, PermGroup, parse_permutation
from .transform import Automaton, Transformation, cerny_automaton, shortest_reset_word
from .graphs import Graph
from .classify import Verdict, classify_group

__all__ = [
    "Automaton",
    "Graph",
    "PermGroup",
    "Permutation",
    "Transformation",
    "Verdict",
    "cerny_automaton",
    "classify_group",
    "parse_permutation",
    "shortest_reset_word",
]
