"""Budget-limited elementary evaluation against brute-force oracles."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from clgames.parser import parse_formula
from clgames.semantics import bitlen, eval_term, evaluate_elementary_tri
from clgames.syntax import Len, Num, Plus, Succ, Times, Var


def sieve(limit: int) -> list[bool]:
    """Sieve of Eratosthenes: is_prime[i] for i <= limit."""
    is_prime = [True] * (limit + 1)
    is_prime[0] = is_prime[1] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if is_prime[p]:
            for q in range(p * p, limit + 1, p):
                is_prime[q] = False
    return is_prime


def test_bitlen_convention():
    assert bitlen(0) == 1
    assert bitlen(1) == 1
    assert bitlen(2) == 2
    assert bitlen(255) == 8
    assert bitlen(256) == 9


def test_true_identity():
    assert evaluate_elementary_tri(parse_formula("3 = 2'"), 10) is True
    assert evaluate_elementary_tri(parse_formula("2 = 2'"), 10) is False


def test_prime_97_decided_false_with_budget():
    f = parse_formula("Ey>1 Ez>1 (97 = y*z)")
    assert evaluate_elementary_tri(f, 97) is False


def test_composite_witness_found():
    f = parse_formula("Ey>1 Ez>1 (91 = y*z)")
    assert evaluate_elementary_tri(f, 97) is True


def test_unbounded_universal_stays_unknown():
    assert evaluate_elementary_tri(parse_formula("Ax (x = x)"), 1000) is None


def test_unbounded_universal_refuted():
    assert evaluate_elementary_tri(parse_formula("Ax (x = 0)"), 1000) is False


def test_guard_bounded_universal_exact():
    # |z| <= 3 confines z to 0..7 regardless of the budget
    assert evaluate_elementary_tri(parse_formula("Az (|z| <= 3 -> z <= 7)"), 10) is True
    assert evaluate_elementary_tri(parse_formula("Az (|z| <= 3 -> z <= 6)"), 10) is False


def test_lower_bounded_existential_found_past_guard():
    assert evaluate_elementary_tri(parse_formula("Ex (5 <= x /\\ x = 7)"), 100) is True
    assert evaluate_elementary_tri(parse_formula("Ex (5 <= x /\\ x = 3)"), 100) is False


def test_unsatisfiable_equation_certified_false():
    # 2y never equals 7: the tail certificate closes the search exactly
    assert evaluate_elementary_tri(parse_formula("Ey (7 = 2*y)"), 100) is False
    assert evaluate_elementary_tri(parse_formula("Ey (8 = 2*y)"), 100) is True


def test_nested_guarded_pair():
    f = parse_formula("Az (|z| <= 2 -> Ew (w = z*z /\\ |w| <= 5))")
    assert evaluate_elementary_tri(f, 100) is True


def test_primality_matrix_against_sieve():
    is_prime = sieve(400)
    comp = parse_formula("Ey>1 Ez>1 (x = y*z)")
    for n in range(2, 401):
        got = evaluate_elementary_tri(comp, budget=1 + n, env={"x": n})
        assert got is (not is_prime[n]), f"composite test wrong at {n}"


def test_requires_closed_formula():
    with pytest.raises(ValueError):
        evaluate_elementary_tri(parse_formula("x = 0"), 10)
    with pytest.raises(ValueError):
        evaluate_elementary_tri(parse_formula("?y (y = 0)"), 10)


# ---------------------------------------------------------------------------
# Interval soundness: definite answers agree with point evaluation
# ---------------------------------------------------------------------------

_terms = st.deferred(lambda: st.one_of(
    st.integers(0, 6).map(Num),
    st.sampled_from(["a", "b"]).map(Var),
    _terms.map(lambda t: Succ(t)),
    st.tuples(_terms, _terms).map(lambda p: Plus(*p)),
    st.tuples(_terms, _terms).map(lambda p: Times(*p)),
    st.tuples(_terms, st.integers(1, 2)).map(lambda p: Len(*p)),
))


@settings(max_examples=300, deadline=None)
@given(_terms, st.integers(0, 30), st.integers(0, 12), st.integers(0, 40))
def test_interval_term_evaluation_bounds_points(t, a_lo, a_width, b):
    lo, hi = eval_term(t, {"a": (a_lo, a_lo + a_width), "b": (b, b)})
    for a in (a_lo, a_lo + a_width // 2, a_lo + a_width):
        v, v2 = eval_term(t, {"a": (a, a), "b": (b, b)})
        assert v == v2
        assert lo <= v <= (hi if hi is not None else v)


def _naive_truth(f, env, bound=25):
    from clgames.syntax import (And, BlindAll, BlindExists, Eq, Implies, Leq,
                                Not, Or)
    from clgames.semantics import eval_term as _et

    def val(t):
        lo, hi = _et(t, {k: (v, v) for k, v in env.items()})
        assert lo == hi
        return lo

    if isinstance(f, Eq):
        return val(f.left) == val(f.right)
    if isinstance(f, Leq):
        return val(f.left) <= val(f.right)
    if isinstance(f, Not):
        return not _naive_truth(f.arg, env, bound)
    if isinstance(f, And):
        return _naive_truth(f.left, env, bound) and _naive_truth(f.right, env, bound)
    if isinstance(f, Or):
        return _naive_truth(f.left, env, bound) or _naive_truth(f.right, env, bound)
    if isinstance(f, Implies):
        return (not _naive_truth(f.left, env, bound)) or _naive_truth(f.right, env, bound)
    if isinstance(f, BlindAll):
        return all(_naive_truth(f.body, {**env, f.var: w}, bound) for w in range(bound))
    if isinstance(f, BlindExists):
        return any(_naive_truth(f.body, {**env, f.var: w}, bound) for w in range(bound))
    raise TypeError(f)


def test_nested_quantifier_definite_answers_sound():
    """Two-level quantifier fuzz against brute force.

    Term shapes are v, v + c, 2*v, c with c <= 4, so along either
    variable every atom's truth flips at most once, at a threshold
    bounded by 2*(other side) + 4.  Sweeping the inner variable to 100
    therefore decides inner quantifiers exactly for outer values up to
    40 (thresholds <= 2*40 + 4 = 84), and the outer predicate is
    faithfully represented on 0..40 because truncation artifacts only
    appear where 2*v1 >= 100, i.e. v1 >= 50.
    """
    from clgames.syntax import (And, BlindAll, BlindExists, Eq, Implies, Leq,
                                Not, Or)

    rng = random.Random(271828)

    def term(v):
        k = rng.randrange(4)
        if k == 0:
            return v
        if k == 1:
            return f"{v} + {rng.randrange(5)}"
        if k == 2:
            return f"2*{v}"
        return str(rng.randrange(5))

    def atom(vs):
        v = rng.choice(vs)
        rel = rng.choice(["=", "<="])
        left, right = term(v), term(rng.choice(vs))
        return f"{left} {rel} {right}"

    def matrix(vs):
        op = rng.choice(["/\\", "\\/", "->"])
        a, b = atom(vs), atom(vs)
        return "(" + a + " " + op + " " + b + ")"

    def brute(f, env, bounds):
        if isinstance(f, Eq):
            return _concrete(f.left, env) == _concrete(f.right, env)
        if isinstance(f, Leq):
            return _concrete(f.left, env) <= _concrete(f.right, env)
        if isinstance(f, Not):
            return not brute(f.arg, env, bounds)
        if isinstance(f, And):
            return brute(f.left, env, bounds) and brute(f.right, env, bounds)
        if isinstance(f, Or):
            return brute(f.left, env, bounds) or brute(f.right, env, bounds)
        if isinstance(f, Implies):
            return (not brute(f.left, env, bounds)) or brute(f.right, env, bounds)
        if isinstance(f, (BlindAll, BlindExists)):
            bound, rest = bounds[0], bounds[1:]
            vals = (brute(f.body, {**env, f.var: w}, rest) for w in range(bound + 1))
            return all(vals) if isinstance(f, BlindAll) else any(vals)
        raise TypeError(f)

    def _concrete(t, env):
        lo, hi = eval_term(t, {k: (v, v) for k, v in env.items()})
        assert lo == hi
        return lo

    checked_definite = 0
    for _ in range(250):
        q1, q2 = (rng.choice("AE") for _ in range(2))
        inner = f"{q2}w {matrix(['v', 'w'])}"
        if rng.random() < 0.5:
            body = inner
        else:
            glue = rng.choice(["/\\", "\\/"])
            body = "(" + matrix(["v"]) + " " + glue + " " + inner + ")"
        text = f"{q1}v {body}"
        f = parse_formula(text)
        got = evaluate_elementary_tri(f, budget=128)
        if got is not None:
            want = brute(f, {}, (40, 100))
            assert got == want, text
            checked_definite += 1
    assert checked_definite > 100


def test_definite_answers_sound_on_random_small_formulas():
    # matrices compare the quantified variable against constants < 5,
    # so brute force over 0..24 is the exact truth value
    rng = random.Random(99)
    texts = []
    for _ in range(150):
        v = rng.choice(["p", "q"])
        c1, c2 = rng.randrange(5), rng.randrange(5)
        rel = rng.choice(["=", "<="])
        atom1 = f"{v} {rel} {c1}"
        atom2 = f"{v} + {c2} = {c1}" if rng.random() < 0.5 else f"{c1} <= {v}"
        op = rng.choice(["/\\", "\\/", "->"])
        q = rng.choice(["A", "E"])
        texts.append(f"{q}{v} ({atom1} {op} {atom2})")
    for text in texts:
        f = parse_formula(text)
        got = evaluate_elementary_tri(f, budget=64)
        if got is not None:
            assert got == _naive_truth(f, {}), text
