"""Explicit game trees with labeled nodes and player-prefixed moves.

These are the raw, drawn-as-a-picture games: every node carries the
player who would win if play stopped there, and every edge carries a
move name prefixed by the player allowed to make it.  The text format
is indentation-based, two spaces per level::

    B
      Ta
        T
      Bb
        B

A node line is a bare ``T`` or ``B``; an edge line is the prefixed
move name (``Ta``, ``Bg``, ...) and is followed by the child subtree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Player


@dataclass(frozen=True)
class RawGame:
    label: Player
    children: tuple[tuple[str, "RawGame"], ...] = ()

    def __post_init__(self):
        names = [name for name, _ in self.children]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate move names at a node: {names}")
        for name in names:
            if len(name) < 2 or name[0] not in "TB":
                raise ValueError(f"bad move name {name!r} (want prefix T/B + name)")

    def child(self, name: str) -> "RawGame | None":
        for n, g in self.children:
            if n == name:
                return g
        return None


def tree_winner(g: RawGame, run: list[str] | tuple[str, ...]) -> Player:
    """Label of the node reached by ``run``; a move with no matching
    edge loses immediately for its mover."""
    node = g
    for name in run:
        if len(name) < 2 or name[0] not in "TB":
            raise ValueError(f"bad move name {name!r}")
        nxt = node.child(name)
        if nxt is None:
            mover = Player.TOP if name[0] == "T" else Player.BOT
            return mover.opposite
        node = nxt
    return node.label


def negate(g: RawGame) -> RawGame:
    """Role switch: flip every node label and every move prefix."""
    flipped = tuple(
        (("B" if name[0] == "T" else "T") + name[1:], negate(child))
        for name, child in g.children)
    return RawGame(label=g.label.opposite, children=flipped)


def flip_prefixes(run: list[str]) -> list[str]:
    return [("B" if name[0] == "T" else "T") + name[1:] for name in run]


def all_paths(g: RawGame) -> list[tuple[str, ...]]:
    """Every legal run: all root-down move sequences, complete or not."""
    out: list[tuple[str, ...]] = [()]
    for name, child in g.children:
        out.extend((name,) + p for p in all_paths(child))
    return out


def complete_paths(g: RawGame) -> list[tuple[str, ...]]:
    if not g.children:
        return [()]
    out = []
    for name, child in g.children:
        out.extend((name,) + p for p in complete_paths(child))
    return out


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def parse_rawgame(text: str) -> RawGame:
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        stripped = raw.lstrip(" ")
        indent = len(raw) - len(stripped)
        if indent % 2 != 0:
            raise ValueError(f"line {lineno}: odd indentation")
        rows.append((indent // 2, stripped.rstrip()))
    if not rows:
        raise ValueError("empty game text")

    pos = 0

    def node(level: int) -> RawGame:
        nonlocal pos
        depth, text_ = rows[pos]
        if depth != level or text_ not in ("T", "B"):
            raise ValueError(f"expected node label T/B at level {level}, got {text_!r}")
        pos += 1
        label = Player.TOP if text_ == "T" else Player.BOT
        children: list[tuple[str, RawGame]] = []
        while pos < len(rows) and rows[pos][0] == level + 1:
            edge_depth, edge = rows[pos]
            if len(edge) < 2 or edge[0] not in "TB":
                raise ValueError(f"expected edge name at level {level + 1}, got {edge!r}")
            pos += 1
            children.append((edge, node(level + 2)))
        return RawGame(label, tuple(children))

    g = node(0)
    if pos != len(rows):
        raise ValueError(f"trailing content at line {rows[pos]}")
    return g


def print_rawgame(g: RawGame, level: int = 0) -> str:
    lines = ["  " * level + g.label.value]
    for name, child in g.children:
        lines.append("  " * (level + 1) + name)
        lines.append(print_rawgame(child, level + 2))
    return "\n".join(lines)
