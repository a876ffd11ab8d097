"""Finite automata computing the abelian complexity and balance function of Parry words."""

from .dfao import Dfao, eval_digits, eval_n, minimize
from .estimator import ParryAutomaton, build_automaton
from .numeration import Numeration, greedy_urep, urep_value
from .substitution import FIBONACCI, TRIBONACCI, ParrySubstitution, parse_spec, validate

__all__ = [
    "Dfao",
    "FIBONACCI",
    "Numeration",
    "ParryAutomaton",
    "ParrySubstitution",
    "TRIBONACCI",
    "build_automaton",
    "eval_digits",
    "eval_n",
    "greedy_urep",
    "minimize",
    "parse_spec",
    "urep_value",
    "validate",
]

__version__ = "0.1.0"
