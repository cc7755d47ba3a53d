"""The shipped corpus: example formulas, their strategies, and the
derivations the extractor is exercised on.

Entries live in ``corpus_data/`` as JSON plus raw-game text files; a
``--corpus`` directory with the same layout can replace them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .engine import Move, Player, Position, Run, legal_moves
from .parser import parse_formula
from .rawgame import RawGame, parse_rawgame
from .strategies import (
    FnStrategy,
    Strategy,
    StrategyFamily,
    builtin,
    io_strategy,
    relay_step,
    trial_division_factor,
)
from .syntax import Formula


def _data_dir() -> Path:
    return Path(str(resources.files("clgames").joinpath("corpus_data")))


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    formula_text: str
    description: str
    strategy_kind: str | None  # builtin | registry | derivation | None
    strategy_ref: str | None

    @property
    def formula(self) -> Formula:
        return parse_formula(self.formula_text)


class Corpus:
    def __init__(self, directory: Path | None = None):
        self.directory = Path(directory) if directory else _data_dir()
        index = json.loads((self.directory / "corpus.json").read_text())
        self.entries: dict[str, CorpusEntry] = {}
        for e in index["entries"]:
            self.entries[e["id"]] = CorpusEntry(
                id=e["id"],
                formula_text=e["formula"],
                description=e.get("description", ""),
                strategy_kind=e.get("strategy_kind"),
                strategy_ref=e.get("strategy_ref"),
            )

    def __iter__(self):
        return iter(self.entries.values())

    def __getitem__(self, key: str) -> CorpusEntry:
        return self.entries[key]

    def derivation_doc(self, filename: str) -> dict:
        return json.loads((self.directory / filename).read_text())

    def rawgame(self, filename: str) -> RawGame:
        return parse_rawgame((self.directory / filename).read_text())

    def strategy(self, entry_id: str) -> Strategy:
        from .derivation import default_registry, extract, load_derivation

        entry = self.entries[entry_id]
        if entry.strategy_kind == "builtin":
            return builtin(entry.strategy_ref)
        if entry.strategy_kind == "registry":
            return step_registry()[entry.strategy_ref].closed()
        if entry.strategy_kind == "derivation":
            d = load_derivation(self.derivation_doc(entry.strategy_ref))
            return extract(d, default_registry())
        raise KeyError(f"corpus entry {entry_id!r} has no strategy")


def load_corpus(directory: Path | str | None = None) -> Corpus:
    return Corpus(Path(directory) if directory else None)


# ---------------------------------------------------------------------------
# Step strategies referenced by corpus derivations
# ---------------------------------------------------------------------------

GUARDED_DOUBLING = "!x ?y (|y| <= |x|' /\\ y = 2*x)"

_EVEN_STEP = ("?y (|y| <= |x|' /\\ y = 2*x) -> "
              "?y (|y| <= |2*x|' /\\ y = 2*(2*x))")
_ODD_STEP = ("?y (|y| <= |x|' /\\ y = 2*x) -> "
             "?y (|y| <= |(2*x)'|' /\\ y = 2*(2*x)')")
_SUCC_STEP = ("?y (|y| <= |x|' /\\ y = 2*x) -> "
              "?y (|y| <= |x'|' /\\ y = 2*x')")

QUADRUPLING = "!x ?y (y = 4*x)"
_D2Q = "!x ?y (y = 2*x) -> !x ?y (y = 4*x)"

PARITY_MAP = "!x ?y (Ew (x = 2*w) <-> Ev (y = 2*v))"

_EVEN_DECIDE = "!x (Ew (x = 2*w) ++ ~Ew (x = 2*w))"
PARITY_ORACLE = f"{_EVEN_DECIDE} -> {_EVEN_DECIDE}"

FACTORING = ("!x ( Ey>1 Ez>1 (x = y*z) -> "
             "?y (2 <= y /\\ ?z (2 <= z /\\ x = y*z)) )")


def _pipe_strategy(name: str, formula_text: str, answer) -> FnStrategy:
    """For closed implications between choice-prefixed games: forward
    the environment's demand in the consequent as a query into the
    (negated) antecedent, then turn the resource's reply into the
    answer.  ``answer(demand, reply)`` computes the final payload."""
    formula = parse_formula(formula_text)

    def propose(pos: Position, run: Run):
        demands = [m for m in run if m.by is Player.BOT and m.address[:1] == ("R",)]
        queries = [m for m in run if m.by is Player.TOP and m.address[:1] == ("L",)]
        replies = [m for m in run if m.by is Player.BOT and m.address[:1] == ("L",)]
        answers = [m for m in run if m.by is Player.TOP and m.address[:1] == ("R",)]
        if demands and not queries:
            return Move(Player.TOP, ("L",), demands[0].payload)
        if replies and not answers:
            return Move(Player.TOP, ("R",), answer(demands[0].payload, replies[0].payload))
        return None

    return FnStrategy(name, formula, propose)


def _factoring_strategy() -> FnStrategy:
    formula = parse_formula(FACTORING)

    def propose(pos: Position, run: Run):
        inputs = [m.payload for m in run if m.by is Player.BOT and isinstance(m.payload, int)]
        if not inputs:
            return None
        pair = trial_division_factor(inputs[0])
        if pair is None:
            return None  # no nontrivial factors: the antecedent is false
        made = sum(1 for m in run if m.by is Player.TOP)
        if made >= 2:
            return None
        options = legal_moves(pos, Player.TOP)
        if not options:
            return None
        return Move(Player.TOP, options[0].address, pair[made])

    return FnStrategy("factoring", formula, propose)


def step_registry() -> dict[str, StrategyFamily]:
    """Named strategies usable as derivation premises."""
    families = [
        relay_step("guarded_double_even", _EVEN_STEP, lambda v: 2 * v),
        relay_step("guarded_double_odd", _ODD_STEP, lambda v: 2 * v + 2),
        relay_step("guarded_double_succ", _SUCC_STEP, lambda v: v + 2),
    ]
    reg = {fam.name: fam for fam in families}

    def closed_family(s: Strategy) -> StrategyFamily:
        return StrategyFamily(s.name, s.formula, lambda _f, _s=s: _s)

    reg["double_to_quadruple"] = closed_family(
        _pipe_strategy("double_to_quadruple", _D2Q, lambda n, v: 2 * v))
    reg["parity_echo"] = closed_family(
        io_strategy("parity_echo", PARITY_MAP, 1, lambda x: x))
    reg["parity_oracle_relay"] = closed_family(
        _pipe_strategy("parity_oracle_relay", PARITY_ORACLE, lambda n, c: c))
    reg["factoring"] = closed_family(_factoring_strategy())
    return reg
