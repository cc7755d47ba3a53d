"""Surface syntax for formulas and terms.

ASCII rendering of the game language::

    0  x  t'  s + t  s*t  |t|  ||t||        terms
    s = t   s <= t   s < t                  atoms (< is sugar for s' <= t)
    ~F   F /\\ G   F \\/ G   F -> G          classical connectives
    Ax F   Ex F                             blind quantifiers
    F & G   F ++ G                          choice conjunction / disjunction
    !x F   ?x F                             choice quantifiers
    Ex>1 F                                  sugar for Ex (1 < x /\\ F)
    F <-> G                                 sugar for (F -> G) /\\ (G -> F)

Precedence, tightest first: ``~`` and quantifier prefixes, ``/\\``,
then ``\\/``/``++``/``&`` (one level, left-associative), then ``->``
(right-associative).  A quantifier's body is a unary-level formula:
an atom, a parenthesized formula, or another prefix.  Decimal numerals
abbreviate iterated successor applied to 0.

Parsed formulas have their binders renamed apart, so bound variables
are distinct from one another and from all free variables.
"""

from __future__ import annotations

import re
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
    Leq,
    Not,
    Num,
    Or,
    Plus,
    Term,
    Times,
    Var,
    length,
    rename_apart,
    succ,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: set[str] | None = None):
        self.line = line
        self.col = col
        self.expected = set(expected or ())
        hint = ""
        if self.expected:
            hint = " (expected " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(f"{line}:{col}: {message}{hint}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>[0-9]+)
  | (?P<var>[a-z][a-z0-9_]*)
  | (?P<op><->|->|<=|\+\+|/\\|\\/|[<>=+*'~&!?()|AE])
    """,
    re.VERBOSE,
)

_OP_KINDS = {
    "<->": "IFF",
    "->": "IMPLIES",
    "<=": "LEQ",
    "<": "LT",
    ">": "GT",
    "=": "EQ",
    "++": "CHOR",
    "+": "PLUS",
    "*": "TIMES",
    "'": "SUCC",
    "~": "NOT",
    "/\\": "AND",
    "\\/": "OR",
    "&": "CHAND",
    "!": "CHALL",
    "?": "CHEXISTS",
    "(": "LPAREN",
    ")": "RPAREN",
    "|": "BAR",
    "A": "BLINDALL",
    "E": "BLINDEXISTS",
}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        chunk = m.group(0)
        if m.lastgroup == "num":
            tokens.append(Token("NUM", chunk, line, col))
        elif m.lastgroup == "var":
            tokens.append(Token("VAR", chunk, line, col))
        elif m.lastgroup == "op":
            tokens.append(Token(_OP_KINDS[chunk], chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rindex("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col))
    return tokens


_QUANT_MAKERS = {
    "BLINDALL": BlindAll,
    "BLINDEXISTS": BlindExists,
    "CHALL": ChAll,
    "CHEXISTS": ChExists,
}

_LEVEL2 = {"OR": Or, "CHOR": ChOr, "CHAND": ChAnd}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def match(self, kind: str) -> Token | None:
        if self.peek().kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"found {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
                tok.line,
                tok.col,
                expected={what},
            )
        return self.advance()

    def fail(self, expected: set[str]) -> ParseError:
        tok = self.peek()
        msg = f"found {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input"
        return ParseError(msg, tok.line, tok.col, expected=expected)

    # formulas ------------------------------------------------------------

    def formula(self) -> Formula:
        left = self.level2()
        if self.match("IMPLIES"):
            return Implies(left, self.formula())
        if self.match("IFF"):
            right = self.level2()
            return And(Implies(left, right), Implies(right, left))
        return left

    def level2(self) -> Formula:
        f = self.level3()
        while self.peek().kind in _LEVEL2:
            op = _LEVEL2[self.advance().kind]
            f = op(f, self.level3())
        return f

    def level3(self) -> Formula:
        f = self.unary()
        while self.match("AND"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "NOT":
            self.advance()
            return Not(self.unary())
        if tok.kind in _QUANT_MAKERS:
            self.advance()
            maker = _QUANT_MAKERS[tok.kind]
            var = self.expect("VAR", "variable").text
            if self.peek().kind == "GT":
                if maker not in (BlindAll, BlindExists):
                    raise self.fail({"formula (no >-bound on choice quantifiers)"})
                self.advance()
                low = self.expect("NUM", "numeral").text
                guard = Leq(Num(int(low) + 1), Var(var))
                body = self.unary()
                if maker is BlindExists:
                    return BlindExists(var, And(guard, body))
                return BlindAll(var, Implies(guard, body))
            return maker(var, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        if self.peek().kind == "LPAREN":
            mark = self.i
            self.advance()
            try:
                f = self.formula()
                self.expect("RPAREN", "')'")
                return f
            except ParseError:
                # "(x + y)' = z" style: parens opened a term, not a formula
                self.i = mark
        left = self.term()
        tok = self.peek()
        if tok.kind == "EQ":
            self.advance()
            return Eq(left, self.term())
        if tok.kind == "LEQ":
            self.advance()
            return Leq(left, self.term())
        if tok.kind == "LT":
            self.advance()
            return Leq(succ(left), self.term())
        raise self.fail({"'='", "'<='", "'<'"})

    # terms ---------------------------------------------------------------

    def term(self) -> Term:
        t = self.term_mul()
        while self.match("PLUS"):
            t = Plus(t, self.term_mul())
        return t

    def term_mul(self) -> Term:
        t = self.term_postfix()
        while self.match("TIMES"):
            t = Times(t, self.term_postfix())
        return t

    def term_postfix(self) -> Term:
        t = self.term_primary()
        while self.match("SUCC"):
            t = succ(t)
        return t

    def term_primary(self) -> Term:
        tok = self.peek()
        if tok.kind == "NUM":
            self.advance()
            return Num(int(tok.text))
        if tok.kind == "VAR":
            self.advance()
            return Var(tok.text)
        if tok.kind == "LPAREN":
            self.advance()
            t = self.term()
            self.expect("RPAREN", "')'")
            return t
        if tok.kind == "BAR":
            self.advance()
            t = self.term()
            self.expect("BAR", "'|'")
            return length(t, 1)
        raise self.fail({"numeral", "variable", "'('", "'|'"})


def parse_formula(text: str) -> Formula:
    """Parse formula text; binders come out renamed apart."""
    p = _Parser(tokenize(text))
    f = p.formula()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input starting at {tok.text!r}", tok.line, tok.col,
                         expected={"end of input"})
    return rename_apart(f)


def parse_term(text: str) -> Term:
    p = _Parser(tokenize(text))
    t = p.term()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input starting at {tok.text!r}", tok.line, tok.col,
                         expected={"end of input"})
    return t
