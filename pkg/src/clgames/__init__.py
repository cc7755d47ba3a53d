"""Game-semantics engine for clarithmetic formulas.

Parses formulas of arithmetic extended with choice operators, plays
them as two-player games between the machine and its environment,
checks derivations built from choice/composition/induction rules,
extracts runnable winning strategies from them, and instruments the
time, space, and amplitude complexity of play.
"""

from .engine import (
    IllegalMoveError,
    Move,
    Player,
    Position,
    Verdict,
    apply_move,
    evaluate_elementary,
    evaluate_run,
    initial_position,
    legal_moves,
    winner,
)
from .parser import ParseError, parse_formula, parse_term
from .syntax import (
    Formula,
    Term,
    alpha_eq,
    free_vars,
    print_formula,
    print_term,
    substitute,
    to_nnf,
)

__version__ = "0.1.0"
