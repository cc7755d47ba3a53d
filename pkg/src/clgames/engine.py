"""Game semantics for formulas: positions, moves, runs, winners.

A position is the root formula in negation normal form together with
the moves made so far.  Each move resolves one *accessible* choice
node: choice subgames stay hidden until an enclosing choice is
resolved, while both components of a parallel connective are live at
once.  A move's address is the path of L/R steps through parallel
connectives from the root to the choice node; blind quantifiers and
negation are transparent.  Resolving a quantifier substitutes the
chosen numeral into the subgame, so on any parallel path at most one
choice node is up for grabs at a time and the address scheme stays
stable as the game shrinks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import semantics
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
    Leq,
    Not,
    Num,
    Or,
    free_vars,
    is_elementary,
    print_formula,
    rename_apart,
    subst_formula,
    to_nnf,
)


class Player(enum.Enum):
    TOP = "T"   # the machine
    BOT = "B"   # the environment

    @property
    def opposite(self) -> "Player":
        return Player.BOT if self is Player.TOP else Player.TOP

    def __str__(self) -> str:
        return self.value


Payload = int | str | None  # int for quantifiers, "L"/"R" for binary, None = schematic
Address = tuple[str, ...]


@dataclass(frozen=True)
class Move:
    by: Player
    address: Address
    payload: Payload

    def __str__(self) -> str:
        addr = "/".join(self.address) if self.address else "-"
        payload = "*" if self.payload is None else str(self.payload)
        return f"{self.by} {addr} {payload}"


Run = tuple[Move, ...]


@dataclass(frozen=True)
class Verdict:
    winner: Player | None
    reason: str = ""
    budget: int | None = None

    @property
    def is_top(self) -> bool:
        return self.winner is Player.TOP

    @property
    def is_bot(self) -> bool:
        return self.winner is Player.BOT

    @property
    def is_unknown(self) -> bool:
        return self.winner is None

    def __str__(self) -> str:
        if self.is_top:
            return "TopWins"
        if self.is_bot:
            return "BotWins"
        return f"Unknown({self.reason})"


def top_wins(reason: str = "") -> Verdict:
    return Verdict(Player.TOP, reason)


def bot_wins(reason: str = "") -> Verdict:
    return Verdict(Player.BOT, reason)


def unknown(reason: str, budget: int | None = None) -> Verdict:
    return Verdict(None, reason, budget)


class IllegalMoveError(ValueError):
    def __init__(self, reason: str, move: Move | None = None):
        self.reason = reason
        self.move = move
        super().__init__(f"illegal move{f' {move}' if move else ''}: {reason}")


_ENV_CHOICES = (ChAnd, ChAll)
_MACHINE_CHOICES = (ChOr, ChExists)


def choice_owner(f: Formula) -> Player:
    if isinstance(f, _ENV_CHOICES):
        return Player.BOT
    if isinstance(f, _MACHINE_CHOICES):
        return Player.TOP
    raise TypeError(f"not a choice node: {f!r}")


@dataclass(frozen=True, eq=False)
class Position:
    """Immutable game state: NNF root, valuation, applied moves, and the
    current formula view with valuation and resolutions substituted."""

    root: Formula
    valuation: dict[str, int]
    moves: Run
    current: Formula

    @property
    def resolutions(self) -> dict[str, Payload]:
        """Resolved choice occurrences, keyed by address plus the move's
        ordinal among moves at the same address (nested choices on one
        parallel path resolve outermost-first)."""
        out: dict[str, Payload] = {}
        seen: dict[Address, int] = {}
        for m in self.moves:
            k = seen.get(m.address, 0)
            seen[m.address] = k + 1
            addr = "/".join(m.address) if m.address else "-"
            out[f"{addr}#{k}"] = m.payload
        return out

    def size(self) -> int:
        return len(print_formula(self.current))


def initial_position(f: Formula, valuation: dict[str, int] | None = None) -> Position:
    valuation = dict(valuation or {})
    missing = free_vars(f) - set(valuation)
    if missing:
        raise ValueError(f"valuation does not cover free variables: {sorted(missing)}")
    root = to_nnf(rename_apart(f))
    current = subst_formula(root, {x: Num(n) for x, n in valuation.items()})
    return Position(root=root, valuation=valuation, moves=(), current=current)


def legal_moves(p: Position, who: Player) -> list[Move]:
    """All accessible unresolved choice nodes of ``who``'s polarity.
    Quantifier and binary targets alike are reported once, with a
    schematic payload (None)."""
    out: list[Move] = []

    def walk(g: Formula, prefix: Address) -> None:
        if isinstance(g, (And, Or)):
            walk(g.left, prefix + ("L",))
            walk(g.right, prefix + ("R",))
        elif isinstance(g, (BlindAll, BlindExists)):
            walk(g.body, prefix)
        elif isinstance(g, (ChAnd, ChOr, ChAll, ChExists)):
            if choice_owner(g) is who:
                out.append(Move(who, prefix, None))
            # subgames of an unresolved choice are inaccessible
        # atoms and Not: nothing below

    walk(p.current, ())
    return out


def target_kind(p: Position, address: Address) -> str:
    """'binary' or 'numeral', for rendering move inputs."""
    node = _target_node(p.current, address)
    return "binary" if isinstance(node, (ChAnd, ChOr)) else "numeral"


def _target_node(g: Formula, tokens: Address) -> Formula:
    if isinstance(g, (And, Or)):
        if not tokens:
            raise IllegalMoveError("address stops at a parallel connective")
        head, rest = tokens[0], tokens[1:]
        if head == "L":
            return _target_node(g.left, rest)
        if head == "R":
            return _target_node(g.right, rest)
        raise IllegalMoveError(f"bad address token {head!r}")
    if isinstance(g, (BlindAll, BlindExists)):
        return _target_node(g.body, tokens)
    if isinstance(g, (ChAnd, ChOr, ChAll, ChExists)):
        if tokens:
            raise IllegalMoveError("target hidden behind an unresolved choice")
        return g
    raise IllegalMoveError("no choice node at this address")


def _resolve(g: Formula, tokens: Address, move: Move) -> Formula:
    if isinstance(g, (And, Or)):
        if not tokens:
            raise IllegalMoveError("address stops at a parallel connective", move)
        head, rest = tokens[0], tokens[1:]
        if head == "L":
            return type(g)(_resolve(g.left, rest, move), g.right)
        if head == "R":
            return type(g)(g.left, _resolve(g.right, rest, move))
        raise IllegalMoveError(f"bad address token {head!r}", move)
    if isinstance(g, (BlindAll, BlindExists)):
        return type(g)(g.var, _resolve(g.body, tokens, move))
    if isinstance(g, (ChAnd, ChOr, ChAll, ChExists)):
        if tokens:
            raise IllegalMoveError("target hidden behind an unresolved choice", move)
        owner = choice_owner(g)
        if move.by is not owner:
            raise IllegalMoveError(
                f"wrong polarity: this choice belongs to {owner}", move)
        if isinstance(g, (ChAnd, ChOr)):
            if move.payload not in ("L", "R"):
                raise IllegalMoveError("binary choice needs payload L or R", move)
            return g.left if move.payload == "L" else g.right
        if not isinstance(move.payload, int) or move.payload < 0:
            raise IllegalMoveError("quantifier choice needs a natural-number payload", move)
        return subst_formula(g.body, {g.var: Num(move.payload)})
    raise IllegalMoveError("no choice node at this address", move)


def apply_move(p: Position, m: Move) -> Position:
    new_current = _resolve(p.current, m.address, m)
    return Position(root=p.root, valuation=p.valuation,
                    moves=p.moves + (m,), current=new_current)


# ---------------------------------------------------------------------------
# Winner determination
# ---------------------------------------------------------------------------

def _winner_tri(g: Formula, budget: int) -> semantics.Tri:
    """Who wins if play stops here: True for the machine, False for the
    environment, None for undecided-within-budget."""
    if isinstance(g, (ChAnd, ChAll)):
        return True    # the environment failed to choose
    if isinstance(g, (ChOr, ChExists)):
        return False   # the machine failed to choose
    if isinstance(g, (Eq, Leq, Not)):
        return semantics.eval_formula(g, {}, budget)
    if isinstance(g, And):
        return semantics._tri_and(_winner_tri(g.left, budget), _winner_tri(g.right, budget))
    if isinstance(g, Or):
        return semantics._tri_or(_winner_tri(g.left, budget), _winner_tri(g.right, budget))
    if isinstance(g, (BlindAll, BlindExists)):
        if is_elementary(g):
            return semantics.eval_formula(g, {}, budget)
        universal = isinstance(g, BlindAll)
        if g.var not in free_vars(g.body):
            return _winner_tri(g.body, budget)
        for w in range(0, budget + 1):
            r = _winner_tri(subst_formula(g.body, {g.var: Num(w)}), budget)
            if r is (not universal):
                return not universal
        return None
    raise TypeError(f"not a position formula: {g!r}")


def _tri_to_verdict(r: semantics.Tri, budget: int) -> Verdict:
    if r is True:
        return top_wins()
    if r is False:
        return bot_wins()
    return unknown("undecided within budget", budget)


def winner(p: Position, budget: int) -> Verdict:
    """Verdict of ``p`` regarded as the final position of a run."""
    return _tri_to_verdict(_winner_tri(p.current, budget), budget)


def evaluate_elementary(f: Formula, budget: int,
                        env: dict[str, int] | None = None) -> Verdict:
    """Exact or budget-limited truth of a choice-free formula, as a game
    verdict (a true elementary game is won by the machine)."""
    return _tri_to_verdict(semantics.evaluate_elementary_tri(f, budget, env), budget)


def evaluate_run(f: Formula, run: Run | list[Move], valuation: dict[str, int] | None = None,
                 budget: int = 65536) -> Verdict:
    """Replay ``run`` from the initial position of ``f``.  An illegal
    move loses immediately for its mover; otherwise the verdict is the
    winner of the final position."""
    p = initial_position(f, valuation)
    for i, m in enumerate(run):
        try:
            p = apply_move(p, m)
        except IllegalMoveError as e:
            w = m.by.opposite
            reason = f"illegal move at index {i} by {m.by}: {e.reason}"
            return Verdict(w, reason)
    return winner(p, budget)


# ---------------------------------------------------------------------------
# Run transcript format
# ---------------------------------------------------------------------------

def format_address(address: Address) -> str:
    return "/".join(address) if address else "-"


def format_move(m: Move) -> str:
    payload = m.payload if isinstance(m.payload, str) else str(m.payload)
    return f"{m.by.value} {format_address(m.address)} {payload}"


def format_run(run: Run | list[Move]) -> str:
    return "\n".join(format_move(m) for m in run)


def parse_address(text: str) -> Address:
    if text == "-":
        return ()
    tokens = tuple(text.split("/"))
    for tok in tokens:
        if tok not in ("L", "R"):
            raise ValueError(f"bad address token {tok!r}")
    return tokens


def parse_move(line: str) -> Move:
    parts = line.split()
    if len(parts) != 3:
        raise ValueError(f"bad move line {line!r} (want: T|B address payload)")
    who, addr, payload = parts
    if who not in ("T", "B"):
        raise ValueError(f"bad player {who!r}")
    by = Player.TOP if who == "T" else Player.BOT
    pl: Payload
    if payload in ("L", "R"):
        pl = payload
    else:
        try:
            pl = int(payload)
        except ValueError:
            raise ValueError(f"bad payload {payload!r}") from None
        if pl < 0:
            raise ValueError("payloads are naturals")
    return Move(by, parse_address(addr), pl)


def parse_run(text: str) -> list[Move]:
    moves = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        moves.append(parse_move(line))
    return moves
