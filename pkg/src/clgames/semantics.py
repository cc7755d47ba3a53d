"""Budget-limited truth evaluation for elementary (choice-free) formulas.

Verdicts are three-valued: True, False, or None for "not decided within
the budget".  Soundness is the contract: a True/False answer is always
the real truth value over the naturals.

The evaluator leans on one structural fact of the term language: every
function symbol (successor, +, *, and the binary-length bars) is
monotone nondecreasing in each argument.  Quantified variables are
therefore handled with interval reasoning:

  * guard conjuncts refine the variable's range (so bounded-search
    formulas are decided exactly, independent of the budget);
  * a concrete sweep covers the refined range up to the budget;
  * the tail beyond the sweep is checked once with the variable bound
    to an unbounded interval; if the body is definitely false on the
    whole tail, an existential is exactly false (dually for universal).

``|t|`` is the length of the binary numeral of t, with ``|0| = 1``.
"""

from __future__ import annotations

from .syntax import (
    And,
    BlindAll,
    BlindExists,
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
    free_vars,
    is_elementary,
    term_vars,
)

Tri = bool | None
Interval = tuple[int, int | None]

# refinement probes stop growing past this; larger bounds act as "unbounded"
_PROBE_CAP = 1 << 62


def bitlen(n: int) -> int:
    """Length of the binary numeral; the numeral "0" has length 1."""
    return 1 if n == 0 else n.bit_length()


def _iv(v: int | Interval) -> Interval:
    if isinstance(v, int):
        return (v, v)
    return v


def _add(a: Interval, b: Interval) -> Interval:
    hi = None if a[1] is None or b[1] is None else a[1] + b[1]
    return (a[0] + b[0], hi)


def _mul(a: Interval, b: Interval) -> Interval:
    if a[1] is None:
        hi = 0 if b[1] == 0 else None
    elif b[1] is None:
        hi = 0 if a[1] == 0 else None
    else:
        hi = a[1] * b[1]
    return (a[0] * b[0], hi)


def eval_term(t: Term, env: dict[str, int | Interval]) -> Interval:
    if isinstance(t, Num):
        return (t.value, t.value)
    if isinstance(t, Var):
        if t.name not in env:
            raise KeyError(f"unbound variable {t.name!r}")
        return _iv(env[t.name])
    if isinstance(t, Succ):
        lo, hi = eval_term(t.arg, env)
        return (lo + 1, None if hi is None else hi + 1)
    if isinstance(t, Plus):
        return _add(eval_term(t.left, env), eval_term(t.right, env))
    if isinstance(t, Times):
        return _mul(eval_term(t.left, env), eval_term(t.right, env))
    if isinstance(t, Len):
        lo, hi = eval_term(t.arg, env)
        for _ in range(t.depth):
            lo = bitlen(lo)
            hi = None if hi is None else bitlen(hi)
        return (lo, hi)
    raise TypeError(f"not a term: {t!r}")


def eval_term_value(t: Term, env: dict[str, int] | None = None) -> int:
    """Exact value of a term under a concrete environment."""
    lo, hi = eval_term(t, dict(env or {}))
    assert lo == hi, "term not concrete under the given environment"
    return lo


def _tri_not(v: Tri) -> Tri:
    return None if v is None else not v


def _tri_and(a: Tri, b: Tri) -> Tri:
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _tri_or(a: Tri, b: Tri) -> Tri:
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def _interval_mode(env: dict[str, int | Interval]) -> bool:
    for v in env.values():
        if not isinstance(v, int):
            lo, hi = v
            if hi is None or hi != lo:
                return True
    return False


def _conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _guard_of_universal(body: Formula) -> tuple[list[Formula], Formula] | None:
    """Split Ax-body of shape (G -> E) or (~G \\/ E): values of x outside
    G satisfy the body vacuously, so G restricts the relevant range."""
    if isinstance(body, Implies):
        return _conjuncts(body.left), body.right
    if isinstance(body, Or) and isinstance(body.left, Not):
        return _conjuncts(body.left.arg), body.right
    return None


def _probe_least(pred) -> int | None:
    """Least w >= 0 with pred(w), assuming pred is monotone (false then
    true); None if pred stays false up to the probe cap."""
    if pred(0):
        return 0
    hi = 1
    while not pred(hi):
        hi *= 2
        if hi > _PROBE_CAP:
            return None
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _refine_with_atom(atom: Formula, var: str, lo: int, hi: int | None,
                      env: dict[str, int | Interval]) -> tuple[int, int | None]:
    """Shrink [lo, hi] using one atomic necessary condition on var.

    Monotonicity argument: if the var-bearing side of the atom already
    exceeds the closed side at value w, it does so for every value >= w.
    """
    if not isinstance(atom, (Eq, Leq)):
        return lo, hi
    left_has = var in term_vars(atom.left)
    right_has = var in term_vars(atom.right)
    if left_has == right_has:
        return lo, hi
    mine, other = (atom.left, atom.right) if left_has else (atom.right, atom.left)
    try:
        other_lo, other_hi = eval_term(other, env)
        eval_term(mine, {**env, var: (0, 0)})
    except KeyError:
        # atom mentions a variable bound further inside; unusable here
        return lo, hi

    def lo_at(w: int) -> int:
        return eval_term(mine, {**env, var: (w, None)})[0]

    def hi_at(w: int) -> int | None:
        return eval_term(mine, {**env, var: (w, w)})[1]

    # upper bound: var side definitely above the other side from w on
    if isinstance(atom, Eq) or left_has:
        if other_hi is not None:
            w = _probe_least(lambda w: lo_at(w) > other_hi)
            if w is not None:
                hi = w - 1 if hi is None else min(hi, w - 1)
    # lower bound: var side still below the other side before w
    if isinstance(atom, Eq) or right_has:
        w = _probe_least(lambda w: (h := hi_at(w)) is None or h >= other_lo)
        if w is not None:
            lo = max(lo, w)
    return lo, hi


def _refine_range(var: str, conjuncts: list[Formula], env: dict[str, int | Interval],
                  depth: int = 0) -> tuple[int, int | None]:
    lo: int = 0
    hi: int | None = None
    for c in conjuncts:
        if isinstance(c, (Eq, Leq)):
            lo, hi = _refine_with_atom(c, var, lo, hi, env)
        elif isinstance(c, BlindExists) and depth < 4:
            # a witness for var must make the inner existential true for
            # some value of its variable; refine under that full range
            inner = _conjuncts(c.body)
            ilo, ihi = _refine_range(c.var, inner, env, depth + 1)
            env2 = {**env, c.var: (ilo, ihi)}
            nlo, nhi = _refine_range(var, inner, env2, depth + 1)
            lo = max(lo, nlo)
            if nhi is not None:
                hi = nhi if hi is None else min(hi, nhi)
        if hi is not None and hi < lo:
            break
    return lo, hi


def eval_formula(f: Formula, env: dict[str, int | Interval], budget: int) -> Tri:
    if isinstance(f, Eq):
        l1, h1 = eval_term(f.left, env)
        l2, h2 = eval_term(f.right, env)
        if l1 == h1 and l2 == h2:
            return l1 == l2
        if (h1 is not None and h1 < l2) or (h2 is not None and h2 < l1):
            return False
        return None
    if isinstance(f, Leq):
        l1, h1 = eval_term(f.left, env)
        l2, h2 = eval_term(f.right, env)
        if h1 is not None and h1 <= l2:
            return True
        if h2 is not None and l1 > h2:
            return False
        return None
    if isinstance(f, Not):
        return _tri_not(eval_formula(f.arg, env, budget))
    if isinstance(f, And):
        return _tri_and(eval_formula(f.left, env, budget), eval_formula(f.right, env, budget))
    if isinstance(f, Or):
        return _tri_or(eval_formula(f.left, env, budget), eval_formula(f.right, env, budget))
    if isinstance(f, Implies):
        return _tri_or(_tri_not(eval_formula(f.left, env, budget)),
                       eval_formula(f.right, env, budget))
    if isinstance(f, BlindExists):
        return _eval_quant(f.var, f.body, env, budget, universal=False)
    if isinstance(f, BlindAll):
        return _eval_quant(f.var, f.body, env, budget, universal=True)
    raise TypeError(f"not an elementary formula: {f!r}")


def _eval_quant(var: str, body: Formula, env: dict[str, int | Interval],
                budget: int, universal: bool) -> Tri:
    if universal:
        split = _guard_of_universal(body)
        guard_conjuncts = split[0] if split else []
    else:
        guard_conjuncts = _conjuncts(body)
    lo, hi = _refine_range(var, guard_conjuncts, env)

    if hi is not None and hi < lo:
        # no value matters: an existential has no witness, a universal
        # holds vacuously
        return universal

    if _interval_mode(env):
        r = eval_formula(body, {**env, var: (lo, hi)}, budget)
        if r is None:
            return None
        # definite over the whole (nonempty) box decides both quantifiers
        return r

    # target: the "all clear" value (True for a universal, False for an
    # existential); its opposite anywhere is an exact early answer
    target: Tri = universal
    cap = budget if hi is None else min(hi, budget)

    def tail_at(w: int) -> Tri:
        """Definite value of the body over the whole range [w, hi];
        vacuously the target when that range is empty."""
        if hi is not None and w > hi:
            return target
        return eval_formula(body, {**env, var: (w, hi)}, budget)

    t = tail_at(lo)
    if t is (not universal):
        return not universal
    if t is target:
        return target

    # binary-search the least point from which the tail is definitely
    # "all clear" (definiteness only improves as the interval shrinks),
    # so the concrete sweep covers just the undecided prefix
    certified_from: int | None = None
    t_end = tail_at(cap + 1)
    if t_end is (not universal):
        return not universal  # the whole tail past the cap violates
    if t_end is target:
        lo_b, hi_b = lo, cap + 1
        while lo_b + 1 < hi_b:
            mid = (lo_b + hi_b) // 2
            tm = tail_at(mid)
            if tm is target:
                hi_b = mid
            elif tm is (not universal):
                return not universal
            else:
                lo_b = mid
        certified_from = hi_b

    sweep_end = (certified_from - 1) if certified_from is not None else cap
    saw_unknown = False
    for w in range(lo, sweep_end + 1):
        r = eval_formula(body, {**env, var: w}, budget)
        if r is None:
            saw_unknown = True
        elif r is (not universal):
            return not universal  # witness / counterexample is exact
    covered = certified_from is not None or (hi is not None and sweep_end >= hi)
    if covered and not saw_unknown:
        return universal
    return None


def evaluate_elementary_tri(f: Formula, budget: int,
                            env: dict[str, int] | None = None) -> Tri:
    """Three-valued truth of a choice-free formula over the naturals."""
    if not is_elementary(f):
        raise ValueError("formula contains choice operators")
    env2: dict[str, int | Interval] = dict(env or {})
    missing = free_vars(f) - set(env2)
    if missing:
        raise ValueError(f"unvalued free variables: {sorted(missing)}")
    return eval_formula(f, env2, budget)
