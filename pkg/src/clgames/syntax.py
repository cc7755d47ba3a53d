"""Term and formula ASTs for the clarithmetic game language.

Terms are built from numerals, variables, successor, addition,
multiplication and the binary-length pseudoterm ``|t|`` (with nesting
depth, so ``||x||`` is one node of depth 2).  Formulas layer the
classical connectives and blind quantifiers over equality/comparison
atoms, plus the choice connectives and choice quantifiers that carry
the game content.

All values are immutable; operations are pure functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


VAR_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


class SyntaxError_(ValueError):
    """Malformed term/formula construction (bad variable name, bad depth)."""


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Num(Term):
    """Numeral: n nested successors applied to zero, stored compactly."""

    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise SyntaxError_(f"numerals are naturals, got {self.value}")


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str

    def __post_init__(self) -> None:
        if not VAR_RE.match(self.name):
            raise SyntaxError_(f"bad variable name {self.name!r}")


@dataclass(frozen=True, slots=True)
class Succ(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Plus(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Times(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Len(Term):
    """depth nested length bars around arg: Len(x, 2) is ||x||."""

    arg: Term
    depth: int = 1

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise SyntaxError_("length bars need depth >= 1")


ZERO = Num(0)


def num(n: int) -> Term:
    return Num(n)


def succ(t: Term) -> Term:
    """Successor; collapses onto numerals so Succ(Num(k)) never exists."""
    if isinstance(t, Num):
        return Num(t.value + 1)
    return Succ(t)


def length(t: Term, depth: int = 1) -> Term:
    """Length bars; nested bars collapse into a single node."""
    if isinstance(t, Len):
        return Len(t.arg, t.depth + depth)
    return Len(t, depth)


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

class Formula:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Leq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class BlindAll(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class BlindExists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class ChAnd(Formula):
    """Choice conjunction: the environment picks the component."""

    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class ChOr(Formula):
    """Choice disjunction: the machine picks the component."""

    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class ChAll(Formula):
    """Choice universal quantifier: the environment supplies the value."""

    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class ChExists(Formula):
    """Choice existential quantifier: the machine supplies the value."""

    var: str
    body: Formula


BINARY = (And, Or, Implies, ChAnd, ChOr)
QUANT = (BlindAll, BlindExists, ChAll, ChExists)
ATOMS = (Eq, Leq)
CHOICE_OPS = (ChAnd, ChOr, ChAll, ChExists)


def is_atom(f: Formula) -> bool:
    return isinstance(f, ATOMS)


def is_elementary(f: Formula) -> bool:
    """No choice operators anywhere: a classical (move-free) game."""
    if isinstance(f, CHOICE_OPS):
        return False
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, Not):
        return is_elementary(f.arg)
    if isinstance(f, BINARY):
        return is_elementary(f.left) and is_elementary(f.right)
    if isinstance(f, QUANT):
        return is_elementary(f.body)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Variables
# ---------------------------------------------------------------------------

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Num):
        return set()
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Succ):
        return term_vars(t.arg)
    if isinstance(t, (Plus, Times)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Len):
        return term_vars(t.arg)
    raise TypeError(f"not a term: {t!r}")


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, ATOMS):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANT):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def bound_vars(f: Formula) -> list[str]:
    """All binder names, in preorder, duplicates preserved."""
    if isinstance(f, ATOMS):
        return []
    if isinstance(f, Not):
        return bound_vars(f.arg)
    if isinstance(f, BINARY):
        return bound_vars(f.left) + bound_vars(f.right)
    if isinstance(f, QUANT):
        return [f.var] + bound_vars(f.body)
    raise TypeError(f"not a formula: {f!r}")


def _with_body(f: Formula, var: str, body: Formula) -> Formula:
    return type(f)(var, body)


def _with_children(f: Formula, left: Formula, right: Formula) -> Formula:
    return type(f)(left, right)


def rename_apart(f: Formula) -> Formula:
    """Rename binders so all bound variables are mutually distinct and
    distinct from every free variable (Barendregt convention)."""
    used = set(free_vars(f))

    def fresh(name: str) -> str:
        if name not in used:
            used.add(name)
            return name
        i = 1
        while f"{name}_{i}" in used:
            i += 1
        used.add(f"{name}_{i}")
        return f"{name}_{i}"

    def go(g: Formula, ren: dict[str, str]) -> Formula:
        if isinstance(g, ATOMS):
            return type(g)(_rename_term(g.left, ren), _rename_term(g.right, ren))
        if isinstance(g, Not):
            return Not(go(g.arg, ren))
        if isinstance(g, BINARY):
            return _with_children(g, go(g.left, ren), go(g.right, ren))
        if isinstance(g, QUANT):
            new = fresh(g.var)
            inner = dict(ren)
            inner[g.var] = new
            return _with_body(g, new, go(g.body, inner))
        raise TypeError(f"not a formula: {g!r}")

    return go(f, {})


def _rename_term(t: Term, ren: dict[str, str]) -> Term:
    if isinstance(t, Num):
        return t
    if isinstance(t, Var):
        return Var(ren.get(t.name, t.name))
    if isinstance(t, Succ):
        return succ(_rename_term(t.arg, ren))
    if isinstance(t, Plus):
        return Plus(_rename_term(t.left, ren), _rename_term(t.right, ren))
    if isinstance(t, Times):
        return Times(_rename_term(t.left, ren), _rename_term(t.right, ren))
    if isinstance(t, Len):
        return Len(_rename_term(t.arg, ren), t.depth)
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------

def subst_term(t: Term, mapping: dict[str, Term]) -> Term:
    if isinstance(t, Num):
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Succ):
        return succ(subst_term(t.arg, mapping))
    if isinstance(t, Plus):
        return Plus(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, Times):
        return Times(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, Len):
        return Len(subst_term(t.arg, mapping), t.depth)
    raise TypeError(f"not a term: {t!r}")


def subst_formula(f: Formula, mapping: dict[str, Term]) -> Formula:
    """Substitute terms for free variables.

    Assumes the Barendregt convention (binders distinct from free
    variables), so no capture check is performed beyond dropping
    shadowed entries.
    """
    if not mapping:
        return f
    if isinstance(f, ATOMS):
        return type(f)(subst_term(f.left, mapping), subst_term(f.right, mapping))
    if isinstance(f, Not):
        return Not(subst_formula(f.arg, mapping))
    if isinstance(f, BINARY):
        return _with_children(f, subst_formula(f.left, mapping), subst_formula(f.right, mapping))
    if isinstance(f, QUANT):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return _with_body(f, f.var, subst_formula(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


def substitute(f: Formula, var: str, n: int) -> Formula:
    """Replace every free occurrence of ``var`` by the numeral for ``n``.

    Raises ValueError if ``var`` is not free in ``f`` (a caller that
    substitutes for an absent variable almost always has a bug).
    """
    if var not in free_vars(f):
        raise ValueError(f"variable {var!r} is not free in the formula")
    return subst_formula(f, {var: Num(n)})


# ---------------------------------------------------------------------------
# Negation normal form
# ---------------------------------------------------------------------------

def to_nnf(f: Formula) -> Formula:
    """Push negation onto atoms and unfold implication as ~A \\/ B.

    The result contains Not only directly over Eq/Leq and never
    contains Implies.  Choice operators dualize under negation
    (role switching), as do the blind quantifiers and the parallel
    connectives.
    """
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Implies):
        return Or(to_nnf(Not(f.left)), to_nnf(f.right))
    if isinstance(f, BINARY):
        return _with_children(f, to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, QUANT):
        return _with_body(f, f.var, to_nnf(f.body))
    if isinstance(f, Not):
        g = f.arg
        if isinstance(g, ATOMS):
            return f
        if isinstance(g, Not):
            return to_nnf(g.arg)
        if isinstance(g, And):
            return Or(to_nnf(Not(g.left)), to_nnf(Not(g.right)))
        if isinstance(g, Or):
            return And(to_nnf(Not(g.left)), to_nnf(Not(g.right)))
        if isinstance(g, Implies):
            return And(to_nnf(g.left), to_nnf(Not(g.right)))
        if isinstance(g, ChAnd):
            return ChOr(to_nnf(Not(g.left)), to_nnf(Not(g.right)))
        if isinstance(g, ChOr):
            return ChAnd(to_nnf(Not(g.left)), to_nnf(Not(g.right)))
        if isinstance(g, BlindAll):
            return BlindExists(g.var, to_nnf(Not(g.body)))
        if isinstance(g, BlindExists):
            return BlindAll(g.var, to_nnf(Not(g.body)))
        if isinstance(g, ChAll):
            return ChExists(g.var, to_nnf(Not(g.body)))
        if isinstance(g, ChExists):
            return ChAll(g.var, to_nnf(Not(g.body)))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, Not):
        return is_atom(f.arg)
    if isinstance(f, Implies):
        return False
    if isinstance(f, BINARY):
        return is_nnf(f.left) and is_nnf(f.right)
    if isinstance(f, QUANT):
        return is_nnf(f.body)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Alpha equivalence
# ---------------------------------------------------------------------------

def alpha_eq(f: Formula, g: Formula) -> bool:
    """Structural equality up to consistent renaming of bound variables."""

    def go(a: Formula, b: Formula, ra: dict[str, str], rb: dict[str, str]) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, ATOMS):
            return _term_alpha(a.left, b.left, ra, rb) and _term_alpha(a.right, b.right, ra, rb)
        if isinstance(a, Not):
            return go(a.arg, b.arg, ra, rb)
        if isinstance(a, BINARY):
            return go(a.left, b.left, ra, rb) and go(a.right, b.right, ra, rb)
        if isinstance(a, QUANT):
            mark = f"#{len(ra)}"
            ra2 = dict(ra)
            rb2 = dict(rb)
            ra2[a.var] = mark
            rb2[b.var] = mark
            return go(a.body, b.body, ra2, rb2)
        raise TypeError(f"not a formula: {a!r}")

    def _term_alpha(s: Term, t: Term, ra: dict[str, str], rb: dict[str, str]) -> bool:
        if type(s) is not type(t):
            return False
        if isinstance(s, Num):
            return s.value == t.value
        if isinstance(s, Var):
            return ra.get(s.name, s.name) == rb.get(t.name, t.name)
        if isinstance(s, Succ):
            return _term_alpha(s.arg, t.arg, ra, rb)
        if isinstance(s, (Plus, Times)):
            return _term_alpha(s.left, t.left, ra, rb) and _term_alpha(s.right, t.right, ra, rb)
        if isinstance(s, Len):
            return s.depth == t.depth and _term_alpha(s.arg, t.arg, ra, rb)
        raise TypeError(f"not a term: {s!r}")

    return go(f, g, {}, {})


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_TERM_ATOM = 3   # numerals, variables, lengths, parenthesized
_TERM_TIMES = 2
_TERM_PLUS = 1


def print_term(t: Term) -> str:
    return _pt(t, 0)


def _pt(t: Term, ctx: int) -> str:
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Len):
        return "|" * t.depth + _pt(t.arg, 0) + "|" * t.depth
    if isinstance(t, Succ):
        inner = _pt(t.arg, _TERM_ATOM)
        return inner + "'"
    if isinstance(t, Times):
        s = _pt(t.left, _TERM_TIMES) + "*" + _pt(t.right, _TERM_ATOM)
        return f"({s})" if ctx > _TERM_TIMES else s
    if isinstance(t, Plus):
        s = _pt(t.left, _TERM_PLUS) + " + " + _pt(t.right, _TERM_TIMES)
        return f"({s})" if ctx > _TERM_PLUS else s
    raise TypeError(f"not a term: {t!r}")


_PREC_IMPLIES = 1
_PREC_OR = 2      # \/  ++  &  share one level, left-associative
_PREC_AND = 3     # /\
_PREC_UNARY = 4


def print_formula(f: Formula) -> str:
    return _pf(f, 0)


def _pf(f: Formula, ctx: int) -> str:
    if isinstance(f, Eq):
        s = f"{print_term(f.left)} = {print_term(f.right)}"
    elif isinstance(f, Leq):
        s = f"{print_term(f.left)} <= {print_term(f.right)}"
    elif isinstance(f, Not):
        s = "~" + _unary_operand(f.arg)
        return s
    elif isinstance(f, QUANT):
        marker = {BlindAll: "A", BlindExists: "E", ChAll: "!", ChExists: "?"}[type(f)]
        s = f"{marker}{f.var} {_quant_body(f.body)}"
        return s if ctx <= _PREC_UNARY else f"({s})"
    elif isinstance(f, Implies):
        s = f"{_pf(f.left, _PREC_IMPLIES + 1)} -> {_pf(f.right, _PREC_IMPLIES)}"
        return f"({s})" if ctx > _PREC_IMPLIES else s
    elif isinstance(f, And):
        s = f"{_pf(f.left, _PREC_AND)} /\\ {_pf(f.right, _PREC_AND + 1)}"
        return f"({s})" if ctx > _PREC_AND else s
    elif isinstance(f, (Or, ChOr, ChAnd)):
        op = {Or: "\\/", ChOr: "++", ChAnd: "&"}[type(f)]
        left = f.left
        # left operand stays bare only when it is the same operator
        lctx = _PREC_OR if type(left) is type(f) else _PREC_OR + 1
        s = f"{_pf(f.left, lctx)} {op} {_pf(f.right, _PREC_OR + 1)}"
        return f"({s})" if ctx > _PREC_OR else s
    else:
        raise TypeError(f"not a formula: {f!r}")
    return s


def _unary_operand(f: Formula) -> str:
    if isinstance(f, Not):
        return "~" + _unary_operand(f.arg)
    if isinstance(f, QUANT):
        return _pf(f, _PREC_UNARY)
    return f"({_pf(f, 0)})"


def _quant_body(f: Formula) -> str:
    if isinstance(f, QUANT):
        return _pf(f, _PREC_UNARY)
    if isinstance(f, Not):
        return "~" + _unary_operand(f.arg)
    return f"({_pf(f, 0)})"


def formula_size(f: Formula) -> int:
    """Symbol count of the canonical rendering (space measure)."""
    return len(print_formula(f))
