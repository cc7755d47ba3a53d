"""Deterministic formula families for property testing.

The enumeration family is small by design: all-out enumeration to
depth 2 over two closed atoms and the six connectives, a seeded random
sample of depth-3 formulas, and quantified wrappers whose matrices
compare the bound variable against small constants.  Every generator
here is deterministic given its arguments.
"""

from __future__ import annotations

import random
from itertools import product

from .engine import (
    Move,
    Player,
    Position,
    apply_move,
    initial_position,
    legal_moves,
    target_kind,
    winner,
)
from .rawgame import RawGame
from .syntax import (
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
    Leq,
    Not,
    Num,
    Or,
    Var,
    rename_apart,
)

TRUE_ATOM = Eq(Num(0), Num(0))
FALSE_ATOM = Eq(Num(0), Num(1))

BINARY_OPS = (And, Or, Implies, ChAnd, ChOr)
CHOICE_BINARY = (ChAnd, ChOr)


def closed_family(depth: int) -> list[Formula]:
    """All formulas over the two closed atoms with Not and the five
    binary connectives, nesting depth at most ``depth``."""
    level: list[Formula] = [TRUE_ATOM, FALSE_ATOM]
    seen = set(level)
    for _ in range(depth):
        new: list[Formula] = []
        for f in level:
            cand = Not(f)
            if cand not in seen:
                seen.add(cand)
                new.append(cand)
        for op, (f, g) in product(BINARY_OPS, product(level, repeat=2)):
            cand = op(f, g)
            if cand not in seen:
                seen.add(cand)
                new.append(cand)
        level = level + new
    return level


def _var_atoms(v: str) -> list[Formula]:
    return [Eq(Var(v), Num(1)), Leq(Var(v), Num(1)), TRUE_ATOM, FALSE_ATOM]


def quantified_family(seed: int = 11, count: int = 60) -> list[Formula]:
    """Quantified formulas whose matrices compare the bound variable
    with constants <= 2, so truth under any instantiation stabilizes
    beyond small values."""
    rng = random.Random(seed)
    out: list[Formula] = []
    quants = (ChAll, ChExists, BlindAll, BlindExists)
    while len(out) < count:
        v = "z"
        body = _random_open(rng, 2, _var_atoms(v))
        q = quants[rng.randrange(len(quants))]
        out.append(rename_apart(q(v, body)))
    return out


def _random_open(rng: random.Random, depth: int, atoms: list[Formula]) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        return atoms[rng.randrange(len(atoms))]
    k = rng.randrange(6)
    if k == 0:
        return Not(_random_open(rng, depth - 1, atoms))
    op = BINARY_OPS[k - 1]
    return op(_random_open(rng, depth - 1, atoms), _random_open(rng, depth - 1, atoms))


def sampled_family(depth: int = 3, seed: int = 7, count: int = 250) -> list[Formula]:
    rng = random.Random(seed)
    return [_random_open(rng, depth, [TRUE_ATOM, FALSE_ATOM]) for _ in range(count)]


def enumeration_family() -> list[Formula]:
    """The standing test family: exhaustive to depth 2, sampled at
    depth 3, plus quantified wrappers."""
    return closed_family(2) + sampled_family(3) + quantified_family()


def choice_only_family(seed: int = 23, count: int = 120) -> list[Formula]:
    """Formulas with no parallel connectives: choice operators over
    decidable leaves only."""
    rng = random.Random(seed)
    out: list[Formula] = []

    def gen(depth: int, atoms: list[Formula]) -> Formula:
        if depth == 0 or rng.random() < 0.25:
            return atoms[rng.randrange(len(atoms))]
        k = rng.randrange(4)
        if k == 0:
            return ChAnd(gen(depth - 1, atoms), gen(depth - 1, atoms))
        if k == 1:
            return ChOr(gen(depth - 1, atoms), gen(depth - 1, atoms))
        v = "z"
        body_atoms = _var_atoms(v)
        q = ChAll if k == 2 else ChExists
        return q(v, gen(depth - 1, body_atoms))

    while len(out) < count:
        f = gen(3, [TRUE_ATOM, FALSE_ATOM])
        out.append(rename_apart(f))
    return out


# ---------------------------------------------------------------------------
# Run enumeration and explicit expansion
# ---------------------------------------------------------------------------

def _payload_options(pos: Position, m: Move, payload_cap: int):
    if target_kind(pos, m.address) == "binary":
        return ("L", "R")
    return tuple(range(payload_cap + 1))


def all_complete_runs(f: Formula, payload_cap: int = 3,
                      valuation: dict[str, int] | None = None) -> list[tuple[Move, ...]]:
    """Every maximal legal run, with quantifier payloads truncated to
    ``payload_cap``.  Move interleavings count as distinct runs."""
    runs: list[tuple[Move, ...]] = []

    def rec(pos: Position) -> None:
        options = legal_moves(pos, Player.BOT) + legal_moves(pos, Player.TOP)
        if not options:
            runs.append(pos.moves)
            return
        for m in options:
            for payload in _payload_options(pos, m, payload_cap):
                rec(apply_move(pos, Move(m.by, m.address, payload)))

    rec(initial_position(f, valuation))
    return runs


def move_name(m: Move) -> str:
    addr = "/".join(m.address) if m.address else "-"
    return f"{m.by.value}{addr}:{m.payload}"


def name_to_move(name: str) -> Move:
    by = Player.TOP if name[0] == "T" else Player.BOT
    addr_s, payload_s = name[1:].split(":")
    address = () if addr_s == "-" else tuple(addr_s.split("/"))
    payload = payload_s if payload_s in ("L", "R") else int(payload_s)
    return Move(by, address, payload)


def expand_to_raw(f: Formula, payload_cap: int = 3, budget: int = 4096,
                  valuation: dict[str, int] | None = None) -> RawGame:
    """Explicit labeled tree of the formula game, with quantifier
    branching truncated to payloads <= payload_cap.  Every node label
    must be decidable at the given budget."""

    def build(pos: Position) -> RawGame:
        v = winner(pos, budget)
        if v.winner is None:
            raise ValueError("expansion hit an undecidable position")
        children = []
        for m in legal_moves(pos, Player.BOT) + legal_moves(pos, Player.TOP):
            for payload in _payload_options(pos, m, payload_cap):
                mv = Move(m.by, m.address, payload)
                children.append((move_name(mv), build(apply_move(pos, mv))))
        return RawGame(v.winner, tuple(children))

    return build(initial_position(f, valuation))


# ---------------------------------------------------------------------------
# Random guarded formulas for the classifier
# ---------------------------------------------------------------------------

def random_poly_bound_term(rng: random.Random, vars_: list[str], depth: int = 2):
    """Random bound term in the polynomial discipline: length-barred
    variables, numerals, successor, +, *."""
    from .syntax import Len, Plus, Succ, Term, Times

    def gen(d: int) -> Term:
        if d == 0 or rng.random() < 0.4:
            k = rng.randrange(3)
            if k == 0 or not vars_:
                return Num(rng.randrange(3))
            v = vars_[rng.randrange(len(vars_))]
            return Len(Var(v), 1 if k == 1 else 2)
        k = rng.randrange(3)
        if k == 0:
            return Succ(gen(d - 1))
        op = Plus if k == 1 else Times
        return op(gen(d - 1), gen(d - 1))

    return gen(depth)


def random_guarded_formula(rng: random.Random, outer_vars: list[str] | None = None,
                           depth: int = 2) -> Formula:
    """Polynomially-bounded-by-construction formula: every choice
    quantifier guarded with a poly-grammar bound term."""
    from .syntax import Len

    outer_vars = list(outer_vars or ["u"])
    fresh = iter(f"g{i}" for i in range(100))

    def gen(d: int, scope: list[str]) -> Formula:
        if d == 0 or rng.random() < 0.3:
            v = scope[rng.randrange(len(scope))]
            return Eq(Var(v), Num(rng.randrange(3))) if rng.random() < 0.5 \
                else Leq(Var(v), Num(rng.randrange(3)))
        k = rng.randrange(4)
        if k == 0:
            return And(gen(d - 1, scope), gen(d - 1, scope))
        if k == 1:
            return Or(gen(d - 1, scope), gen(d - 1, scope))
        z = next(fresh)
        t = random_poly_bound_term(rng, scope)
        guard = Leq(Len(Var(z), 1), t)
        if k == 2:
            return ChAll(z, Implies(guard, gen(d - 1, scope + [z])))
        return ChExists(z, And(guard, gen(d - 1, scope + [z])))

    return gen(depth, outer_vars)
