"""Test-side oracle: play formulas directly, without negation normal
form.

Polarity is tracked through negations and implication antecedents, so
a choice node's owner is its operator's owner flipped by context, and
the winner recursion inverts at each negation.  This is a deliberately
separate implementation from the engine (which compiles to NNF first);
agreement between the two on every run is what the NNF-soundness tests
check.

Blind quantifiers are evaluated by sweeping 0..SWEEP, which is exact
for the test families: their matrices only compare the bound variable
against constants <= 2, so truth is constant beyond that.
"""

from __future__ import annotations

from clgames.engine import Move, Player
from clgames.syntax import (
    And,
    BlindAll,
    BlindExists,
    ChAll,
    ChAnd,
    ChExists,
    ChOr,
    Eq,
    Formula,
    Implies,
    Len,
    Leq,
    Not,
    Num,
    Or,
    Plus,
    Succ,
    Term,
    Times,
    Var,
    subst_formula,
)

SWEEP = 4


def term_value(t: Term, env: dict[str, int]) -> int:
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Succ):
        return term_value(t.arg, env) + 1
    if isinstance(t, Plus):
        return term_value(t.left, env) + term_value(t.right, env)
    if isinstance(t, Times):
        return term_value(t.left, env) * term_value(t.right, env)
    if isinstance(t, Len):
        v = term_value(t.arg, env)
        for _ in range(t.depth):
            v = max(1, v.bit_length())
        return v
    raise TypeError(t)


def classical_truth(f: Formula, env: dict[str, int]) -> bool:
    if isinstance(f, Eq):
        return term_value(f.left, env) == term_value(f.right, env)
    if isinstance(f, Leq):
        return term_value(f.left, env) <= term_value(f.right, env)
    if isinstance(f, Not):
        return not classical_truth(f.arg, env)
    if isinstance(f, And):
        return classical_truth(f.left, env) and classical_truth(f.right, env)
    if isinstance(f, Or):
        return classical_truth(f.left, env) or classical_truth(f.right, env)
    if isinstance(f, Implies):
        return (not classical_truth(f.left, env)) or classical_truth(f.right, env)
    if isinstance(f, BlindAll):
        return all(classical_truth(f.body, {**env, f.var: w}) for w in range(SWEEP + 1))
    if isinstance(f, BlindExists):
        return any(classical_truth(f.body, {**env, f.var: w}) for w in range(SWEEP + 1))
    raise TypeError(f)


CHOICE = (ChAnd, ChOr, ChAll, ChExists)


def direct_legal_moves(f: Formula, who: Player) -> list[tuple[tuple[str, ...], Formula, bool]]:
    """(address, node, flipped) of each accessible choice node owned by
    ``who`` under polarity tracking."""
    out = []

    def walk(g: Formula, prefix: tuple[str, ...], flipped: bool) -> None:
        if isinstance(g, CHOICE):
            base = Player.BOT if isinstance(g, (ChAnd, ChAll)) else Player.TOP
            owner = base.opposite if flipped else base
            if owner is who:
                out.append((prefix, g, flipped))
            return
        if isinstance(g, Not):
            walk(g.arg, prefix, not flipped)
        elif isinstance(g, Implies):
            walk(g.left, prefix + ("L",), not flipped)
            walk(g.right, prefix + ("R",), flipped)
        elif isinstance(g, (And, Or)):
            walk(g.left, prefix + ("L",), flipped)
            walk(g.right, prefix + ("R",), flipped)
        elif isinstance(g, (BlindAll, BlindExists)):
            walk(g.body, prefix, flipped)

    walk(f, (), False)
    return out


class DirectIllegal(Exception):
    pass


def direct_apply(f: Formula, move: Move) -> Formula:
    def go(g: Formula, tokens: tuple[str, ...], flipped: bool) -> Formula:
        if isinstance(g, CHOICE):
            if tokens:
                raise DirectIllegal("hidden")
            base = Player.BOT if isinstance(g, (ChAnd, ChAll)) else Player.TOP
            owner = base.opposite if flipped else base
            if owner is not move.by:
                raise DirectIllegal("polarity")
            if isinstance(g, (ChAnd, ChOr)):
                if move.payload not in ("L", "R"):
                    raise DirectIllegal("payload")
                return g.left if move.payload == "L" else g.right
            if not isinstance(move.payload, int):
                raise DirectIllegal("payload")
            return subst_formula(g.body, {g.var: Num(move.payload)})
        if isinstance(g, Not):
            return Not(go(g.arg, tokens, not flipped))
        if isinstance(g, (And, Or, Implies)):
            if not tokens:
                raise DirectIllegal("stops at a parallel node")
            head, rest = tokens[0], tokens[1:]
            lf = (not flipped) if isinstance(g, Implies) else flipped
            if head == "L":
                return type(g)(go(g.left, rest, lf), g.right)
            return type(g)(g.left, go(g.right, rest, flipped))
        if isinstance(g, (BlindAll, BlindExists)):
            return type(g)(g.var, go(g.body, tokens, flipped))
        raise DirectIllegal("no choice here")

    return go(f, move.address, False)


def direct_winner(f: Formula) -> bool:
    """True when the machine wins the (final) position ``f``."""
    if isinstance(f, (ChAnd, ChAll)):
        return True
    if isinstance(f, (ChOr, ChExists)):
        return False
    if isinstance(f, Not):
        return not direct_winner(f.arg)
    if isinstance(f, And):
        return direct_winner(f.left) and direct_winner(f.right)
    if isinstance(f, Or):
        return direct_winner(f.left) or direct_winner(f.right)
    if isinstance(f, Implies):
        return (not direct_winner(f.left)) or direct_winner(f.right)
    if isinstance(f, BlindAll):
        return all(direct_winner(subst_formula(f.body, {f.var: Num(w)}))
                   for w in range(SWEEP + 1))
    if isinstance(f, BlindExists):
        return any(direct_winner(subst_formula(f.body, {f.var: Num(w)}))
                   for w in range(SWEEP + 1))
    if isinstance(f, (Eq, Leq)):
        return classical_truth(f, {})
    raise TypeError(f)


def direct_evaluate_run(f: Formula, run) -> Player:
    """Replay a run on the raw formula; an illegal move loses for its
    mover; the final position's winner otherwise."""
    g = f
    for m in run:
        try:
            g = direct_apply(g, m)
        except DirectIllegal:
            return m.by.opposite
    return Player.TOP if direct_winner(g) else Player.BOT
