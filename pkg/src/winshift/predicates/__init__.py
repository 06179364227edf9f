"""First-order predicates over automatic words, compiled to automata."""

from .compiler import Context, PredicateAutomaton
from .formula import parse_formula, parse_program
from .library import (
    coding_dimension,
    ext_rs,
    factor_eq,
    is_rs,
    psi_automaton,
    rs_closure,
    standard_context,
    winning_shift_automaton,
)

__all__ = [
    "Context",
    "PredicateAutomaton",
    "coding_dimension",
    "ext_rs",
    "factor_eq",
    "is_rs",
    "parse_formula",
    "parse_program",
    "psi_automaton",
    "rs_closure",
    "standard_context",
    "winning_shift_automaton",
]
