"""Syntactic boundedness disciplines for choice quantifiers.

A choice quantifier is *guarded* when it occurs as

    !z (|z| <= t -> E)        or        ?z (|z| <= t /\\ E)

with ``t`` a term not mentioning ``z``.  The disciplines differ in
what ``t`` may look like:

  * exponentially bounded: 0/successor/+/* over variables, bare or
    under length bars;
  * polynomially bounded: the same, but every variable of ``t`` must
    sit under at least one length bar;
  * a three-grammar instance (time/space/amplitude term grammars):
    ``t`` must belong to the time grammar, the one that also bounds
    induction.

Bar depth on guard-term variables is capped at 2 (enough for
``||x||``-style space grammars); deeper nesting is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

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
    print_term,
    term_vars,
)


@dataclass(frozen=True)
class TermGrammar:
    """Admissible bound terms: operators from ``ops`` (a subset of
    {0,',+,*}) over variables wrapped in exactly ``var_form`` bars."""

    ops: frozenset[str]
    var_form: int

    def __post_init__(self):
        bad = self.ops - {"0", "'", "+", "*"}
        if bad:
            raise ValueError(f"unknown bound-term operators {sorted(bad)}")
        if not 0 <= self.var_form <= 2:
            raise ValueError("var_form must be 0, 1 or 2")


@dataclass(frozen=True)
class Exponential:
    pass


@dataclass(frozen=True)
class Polynomial:
    pass


@dataclass(frozen=True)
class Cla11:
    time: TermGrammar
    space: TermGrammar
    amplitude: TermGrammar


Discipline = Exponential | Polynomial | Cla11

ALL_OPS = frozenset({"0", "'", "+", "*"})

# the polynomial-time / polylog-space / linear-amplitude instance
CLA11_PTIME = Cla11(
    time=TermGrammar(ALL_OPS, 1),
    space=TermGrammar(ALL_OPS, 2),
    amplitude=TermGrammar(frozenset({"0", "'", "+"}), 1),
)


def check_bound_term(t: Term, g: TermGrammar) -> bool:
    """Membership of ``t`` in the grammar: every leaf is 0 (or a numeral,
    when successor is admitted) or a variable under exactly the required
    bars, every operator admitted."""
    if isinstance(t, Num):
        if t.value == 0:
            return "0" in g.ops
        return "0" in g.ops and "'" in g.ops
    if isinstance(t, Var):
        return g.var_form == 0
    if isinstance(t, Len):
        if isinstance(t.arg, Num):
            # a barred numeral is a closed constant (bars of a numeral
            # are never 0, so it needs successor like any numeral)
            return "0" in g.ops and "'" in g.ops
        return isinstance(t.arg, Var) and t.depth == g.var_form
    if isinstance(t, Succ):
        return "'" in g.ops and check_bound_term(t.arg, g)
    if isinstance(t, Plus):
        return "+" in g.ops and check_bound_term(t.left, g) and check_bound_term(t.right, g)
    if isinstance(t, Times):
        return "*" in g.ops and check_bound_term(t.left, g) and check_bound_term(t.right, g)
    raise TypeError(f"not a term: {t!r}")


@dataclass(frozen=True)
class Violation:
    path: str
    reason: str


@dataclass(frozen=True)
class ClassificationReport:
    violations: tuple[Violation, ...]

    @property
    def conforming(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "Conforming" if self.conforming else "Violating"

    def render(self) -> str:
        lines = [self.verdict]
        for v in self.violations:
            lines.append(f"  at {v.path}: {v.reason}")
        return "\n".join(lines)


def _guard_term_issue(t: Term, d: Discipline) -> str | None:
    if isinstance(d, Cla11):
        if not check_bound_term(t, d.time):
            return f"bound term {print_term(t)} not in the time grammar"
        return None
    if isinstance(t, Num):
        return None
    if isinstance(t, Var):
        if isinstance(d, Polynomial):
            return f"bare variable {t.name} in a polynomial bound (needs length bars)"
        return None
    if isinstance(t, Len):
        if isinstance(t.arg, Num):
            return None  # a barred numeral is a closed constant
        if not isinstance(t.arg, Var):
            return f"length bars over a compound term in bound {print_term(t)}"
        if t.depth > 2:
            return f"bars nested deeper than 2 in bound {print_term(t)}"
        return None
    if isinstance(t, Succ):
        return _guard_term_issue(t.arg, d)
    if isinstance(t, (Plus, Times)):
        return _guard_term_issue(t.left, d) or _guard_term_issue(t.right, d)
    raise TypeError(f"not a term: {t!r}")


def _match_guard(f: Formula) -> tuple[Term, Formula] | None:
    """Return (bound term, body) when the choice quantifier at ``f`` has
    the guarded shape, else None.  Accepts the implication shape for !z
    (and its negation-normal rendering) and the conjunction shape for ?z."""
    if isinstance(f, ChAll):
        b = f.body
        guard = None
        if isinstance(b, Implies):
            guard, rest = b.left, b.right
        elif isinstance(b, Or) and isinstance(b.left, Not):
            guard, rest = b.left.arg, b.right
        else:
            return None
    elif isinstance(f, ChExists):
        b = f.body
        if not isinstance(b, And):
            return None
        guard, rest = b.left, b.right
    else:
        raise TypeError("not a choice quantifier")
    if not isinstance(guard, Leq):
        return None
    lhs = guard.left
    if not (isinstance(lhs, Len) and lhs.depth == 1 and isinstance(lhs.arg, Var)
            and lhs.arg.name == f.var):
        return None
    return guard.right, rest


def classify_bounded(f: Formula, d: Discipline) -> ClassificationReport:
    violations: list[Violation] = []

    def bad(path: list[str], reason: str) -> None:
        violations.append(Violation("/".join(path) if path else "-", reason))

    def walk(g: Formula, path: list[str]) -> None:
        if isinstance(g, (Eq, Leq)):
            return
        if isinstance(g, Not):
            walk(g.arg, path + ["~"])
            return
        if isinstance(g, (And, Or, Implies, ChAnd, ChOr)):
            walk(g.left, path + ["L"])
            walk(g.right, path + ["R"])
            return
        if isinstance(g, (BlindAll, BlindExists)):
            walk(g.body, path + [f"{'A' if isinstance(g, BlindAll) else 'E'}{g.var}"])
            return
        if isinstance(g, (ChAll, ChExists)):
            marker = f"{'!' if isinstance(g, ChAll) else '?'}{g.var}"
            m = _match_guard(g)
            if m is None:
                shape = "!z (|z| <= t -> E)" if isinstance(g, ChAll) else "?z (|z| <= t /\\ E)"
                bad(path + [marker], f"choice quantifier not in the guarded form {shape}")
                walk(g.body, path + [marker])
                return
            t, rest = m
            if g.var in term_vars(t):
                bad(path + [marker], f"bound term {print_term(t)} mentions the bound variable")
            issue = _guard_term_issue(t, d)
            if issue:
                bad(path + [marker], issue)
            walk(rest, path + [marker])
            return
        raise TypeError(f"not a formula: {g!r}")

    walk(f, [])
    return ClassificationReport(tuple(violations))
